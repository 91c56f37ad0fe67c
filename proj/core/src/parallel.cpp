#include "mct/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <string>
#include <thread>

namespace mct {

namespace {

std::size_t default_thread_count() {
  std::size_t n = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MCT_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
    } catch (...) {
      // unparsable value: ignore the cap
    }
  }
  return n;
}

std::atomic<std::size_t> g_override{0};

// Minimal fork-join pool: workers pick block indices from a shared counter.
class Pool {
 public:
  static Pool& instance() {
    static Pool pool;
    return pool;
  }

  void run(std::size_t workers, std::size_t blocks, const std::function<void(std::size_t)>& job) {
    std::lock_guard<std::mutex> run_lock(run_mutex_);
    ensure_workers(workers - 1);
    {
      std::lock_guard<std::mutex> lk(m_);
      job_ = &job;
      blocks_ = blocks;
      next_.store(0);
      active_ = workers - 1;
      pending_ = workers - 1;
      ++generation_;
    }
    cv_.notify_all();
    drain();
    std::unique_lock<std::mutex> lk(m_);
    done_cv_.wait(lk, [&] { return pending_ == 0; });
    job_ = nullptr;
  }

  ~Pool() {
    {
      std::lock_guard<std::mutex> lk(m_);
      stop_ = true;
      ++generation_;
    }
    cv_.notify_all();
    for (auto& t : threads_) t.join();
  }

 private:
  void ensure_workers(std::size_t n) {
    while (threads_.size() < n) {
      const std::size_t id = threads_.size();
      threads_.emplace_back([this, id] { loop(id); });
    }
  }

  void drain() {
    for (;;) {
      const std::size_t b = next_.fetch_add(1);
      if (b >= blocks_) break;
      (*job_)(b);
    }
  }

  void loop(std::size_t id) {
    std::size_t seen = 0;
    for (;;) {
      {
        std::unique_lock<std::mutex> lk(m_);
        cv_.wait(lk, [&] { return stop_ || generation_ != seen; });
        if (stop_) return;
        seen = generation_;
        if (id >= active_) continue;
      }
      drain();
      {
        std::lock_guard<std::mutex> lk(m_);
        --pending_;
      }
      done_cv_.notify_one();
    }
  }

  std::mutex run_mutex_;
  std::mutex m_;
  std::condition_variable cv_;
  std::condition_variable done_cv_;
  std::vector<std::thread> threads_;
  const std::function<void(std::size_t)>* job_ = nullptr;
  std::size_t blocks_ = 0;
  std::atomic<std::size_t> next_{0};
  std::size_t active_ = 0;
  std::size_t pending_ = 0;
  std::size_t generation_ = 0;
  bool stop_ = false;
};

}  // namespace

std::size_t thread_count() {
  const std::size_t o = g_override.load();
  if (o > 0) return o;
  static const std::size_t n = default_thread_count();
  return n;
}

void set_thread_count(std::size_t n) { g_override.store(n); }

void parallel_blocks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                     std::size_t block) {
  if (n == 0) return;
  block = std::max<std::size_t>(1, block);
  const std::size_t blocks = (n + block - 1) / block;
  const std::size_t workers = std::min(thread_count(), blocks);
  auto job = [&](std::size_t b) { body(b * block, std::min(n, (b + 1) * block)); };
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) job(b);
    return;
  }
  const std::function<void(std::size_t)> fn = job;
  Pool::instance().run(workers, blocks, fn);
}

double pairwise_sum(const std::vector<double>& partials) {
  if (partials.empty()) return 0.0;
  std::vector<double> level = partials;
  while (level.size() > 1) {
    std::vector<double> next((level.size() + 1) / 2);
    for (std::size_t i = 0; i < next.size(); ++i) {
      const std::size_t a = 2 * i;
      next[i] = a + 1 < level.size() ? level[a] + level[a + 1] : level[a];
    }
    level.swap(next);
  }
  return level.front();
}

}  // namespace mct
