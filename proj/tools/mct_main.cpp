// mct: run scenarios, epsilon sweeps and report rendering.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mct/errors.hpp"
#include "mct/parallel.hpp"
#include "mct/scenario.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kCheckFailure = 1;
constexpr int kError = 2;

mct::ScenarioConfig load(const std::string& source, const std::string& out_dir) {
  mct::ScenarioConfig cfg = mct::load_scenario(source);
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (cfg.output_dir.empty()) cfg.output_dir = "out/" + cfg.name;
  return cfg;
}

void print_checks(const std::vector<mct::CheckResult>& checks) {
  for (const auto& c : checks)
    std::printf("%-4s %-24s value=%.6g threshold=%.6g%s\n", c.pass ? "PASS" : (c.binding ? "FAIL" : "WARN"),
                c.name.c_str(), c.value, c.threshold, c.binding ? "" : " (advisory)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Allen-Cahn with transport: scenarios, diagnostics and convergence sweeps"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("-j,--threads", threads, "worker threads (default: MCT_THREADS or hardware)");

  std::string run_source, run_out;
  auto* run = app.add_subcommand("run", "run one scenario (config file or builtin name)");
  run->add_option("config", run_source, "config path or builtin name")->required();
  run->add_option("-o,--output", run_out, "output directory (overrides output_dir)");

  std::string sweep_source, sweep_out;
  auto* sweep = app.add_subcommand("sweep", "epsilon sweep over sweep.epsilons");
  sweep->add_option("config", sweep_source, "config path or builtin name")->required();
  sweep->add_option("-o,--output", sweep_out, "output directory (overrides output_dir)");

  std::string report_dir;
  auto* report = app.add_subcommand("report", "re-render summary.txt from the CSVs of a run");
  report->add_option("output_dir", report_dir)->required()->check(CLI::ExistingDirectory);

  auto* defaults = app.add_subcommand("dump-defaults", "print the documented default configuration");
  bool list_builtins = false;
  defaults->add_flag("--builtins", list_builtins, "list builtin scenario names instead");
  std::string builtin_name;
  defaults->add_option("--builtin", builtin_name, "print the config of one builtin scenario");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kPass : kError;
  }
  if (threads > 0) mct::set_thread_count(static_cast<std::size_t>(threads));

  try {
    if (*run) {
      const auto cfg = load(run_source, run_out);
      const auto r = mct::run_scenario(cfg);
      print_checks(r.checks);
      for (const auto& n : r.notes) std::printf("note: %s\n", n.c_str());
      std::printf("%s: %ld steps in %.2f s, outputs in %s\n", r.name.c_str(), r.steps, r.runtime_seconds,
                  cfg.output_dir.c_str());
      return r.passed() ? kPass : kCheckFailure;
    }
    if (*sweep) {
      const auto cfg = load(sweep_source, sweep_out);
      const auto r = mct::run_sweep(cfg);
      for (const auto& row : r.rows)
        std::printf("eps=%.6g res=%d energy_err=%.4e xi_l1=%.4e D_max=%.6g\n", row.epsilon, row.resolution,
                    row.energy_error, row.xi_l1, row.d_max);
      print_checks(r.checks);
      return r.passed() ? kPass : kCheckFailure;
    }
    if (*report) {
      bool pass = false;
      const std::string text = mct::render_report(report_dir, &pass);
      std::ofstream(report_dir + "/summary.txt") << text;
      std::cout << text;
      return pass ? kPass : kCheckFailure;
    }
    if (*defaults) {
      if (list_builtins)
        for (const auto& n : mct::builtin_names()) std::cout << n << "\n";
      else if (!builtin_name.empty())
        std::cout << mct::builtin_config(builtin_name).dump();
      else
        std::cout << mct::default_config_text();
      return kPass;
    }
  } catch (const mct::Error& e) {
    std::fprintf(stderr, "mct: %s\n", e.what());
    return kError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "mct: %s\n", e.what());
    return kError;
  }
  return kError;
}
