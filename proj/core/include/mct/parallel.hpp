#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace mct {

/// Number of workers used by parallel loops. Defaults to the hardware
/// concurrency, capped by the MCT_THREADS environment variable.
std::size_t thread_count();

/// Overrides the worker count for the current process (0 restores the default).
void set_thread_count(std::size_t n);

/// Fixed block length used to partition index ranges. Partitioning never
/// depends on the worker count, which is what makes reductions reproducible.
inline constexpr std::size_t kBlockSize = 4096;

/// Runs body(begin, end) over [0, n) split into fixed blocks of `block` items.
void parallel_blocks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                     std::size_t block = kBlockSize);

/// Pairwise tree sum of a vector of partials; the tree shape depends only on
/// the vector length.
double pairwise_sum(const std::vector<double>& partials);

/// Deterministic sum of term(i) for i in [0, n): sequential within each block,
/// pairwise across blocks. Bitwise identical for any worker count.
template <class F>
double parallel_sum(std::size_t n, F&& term) {
  const std::size_t blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<double> partials(blocks, 0.0);
  parallel_blocks(n, [&](std::size_t b, std::size_t e) {
    double acc = 0.0;
    for (std::size_t i = b; i < e; ++i) acc += term(i);
    partials[b / kBlockSize] = acc;
  });
  return pairwise_sum(partials);
}

/// Deterministic maximum of term(i); returns `init` for n == 0.
template <class F>
double parallel_max(std::size_t n, double init, F&& term) {
  const std::size_t blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<double> partials(blocks, init);
  parallel_blocks(n, [&](std::size_t b, std::size_t e) {
    double acc = init;
    for (std::size_t i = b; i < e; ++i) {
      const double v = term(i);
      if (v > acc) acc = v;
    }
    partials[b / kBlockSize] = acc;
  });
  double m = init;
  for (double v : partials) m = v > m ? v : m;
  return m;
}

}  // namespace mct
