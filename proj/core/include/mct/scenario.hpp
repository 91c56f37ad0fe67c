#pragma once

#include <string>
#include <vector>

#include "mct/config.hpp"
#include "mct/grid.hpp"
#include "mct/monotonicity.hpp"
#include "mct/solver.hpp"

namespace mct {

struct GeometryConfig {
  std::string kind = "circle";  // circle | sphere | two_circles | annulus | graph
  Point center{0.5, 0.5, 0.5};
  double radius = 0.25;
  Point center2{0.75, 0.75, 0.0};
  double radius2 = 0.12;
  double r_in = 0.125, r_out = 0.375;
  double base = 0.25;
  std::vector<double> heights{0.75};
  double r_trunc = 0.0;  // <= 0: geometry reach
};

struct TransportConfig {
  std::string kind = "zero";  // zero | constant | shear | rotation | rough_radial | sampled
  std::vector<double> params;
  std::vector<std::string> files;  // sampled: dim component dumps per time knot
  double p = 4.0, q = 4.0, beta = 0.25;
};

struct DiagnosticsConfig {
  std::vector<double> times;  // diagnostic snapshot times; 0 and t_end are always added
  std::vector<Point> poles;   // empty with pole_auto: extinction point of the circle/sphere
  bool pole_auto = false;
  double pole_time = 0.0;     // <= 0: no monotonicity sampling
  double audit_t0 = -1.0, audit_t1 = -1.0;
  double audit_tolerance = 2e-3;
  double tail_constant = 1.0;
  std::vector<double> density_radii;
  std::vector<Point> density_centers;
  std::vector<double> density_probe_radii;
  int density_random = 100;
  std::vector<std::string> test_functions{"one", "cos_x"};
  bool brakke = true;
  double theta_radius_eps = 10.0;
  int theta_probes = 16;
  bool dump_fields = true;
  bool interface = true;
};

struct ChecksConfig {
  bool radius_law = false;
  std::vector<double> radius_times;
  double radius_tol = 0.02;
  bool translation = false;
  double translation_tol = 0.02;
  bool dissipation = false;
  double dissipation_tol = 1e-10;
  bool growth = false;
  double growth_tol = 1e-6;  // relative to mu(0)
  bool discrepancy = true;
  bool bv = true;
  double bv_tol = 1e-8;
  bool bv_perimeter = false;
  double bv_perimeter_tol = 0.03;
  bool theta = false;
  double theta_until = 0.0;
  double theta_lo = 0.9, theta_hi = 1.1;
  bool monotonicity = false;
  bool energy_concentration = false;
  double energy_tol = 0.02;
  double final_energy_fraction = -1.0;  // > 0: advisory mu(t_end) / mu(0) bound
  int final_components = -1;  // >= 0: interface component count expected at t_end
  bool interface_measure = false;
  double interface_tol = 0.01;
  bool plane_drift = false;
  double plane_drift_t1 = 0.01;
  double plane_drift_tol = 1e-4;
  bool plane_translation = false;
  double plane_shift_tol_h = 1.5;
  double plane_shape_tol = 5e-3;
};

struct SweepConfig {
  std::vector<std::string> epsilons;  // each "<value>", "<a>/<b>" or "<k>h"
  std::vector<int> resolutions;       // one per epsilon, or a single shared value
  double t_end = -1.0;                // < 0: keep solver.t_end
  double xi_time = 0.005;
  double d_tol = 0.15;
};

struct ScenarioConfig {
  std::string name = "custom";
  int dim = 2;
  int resolution = 256;
  std::string well = "quartic";
  std::string epsilon = "4h";
  GeometryConfig geometry;
  TransportConfig transport;
  SolverConfig solver;
  std::vector<double> snapshot_times;
  DiagnosticsConfig diagnostics;
  ChecksConfig checks;
  SweepConfig sweep;
  std::string output_dir;

  /// epsilon resolved against grid spacing 1/resolution.
  double epsilon_value(int res) const;
  double epsilon_value() const { return epsilon_value(resolution); }
};

/// Parses "<value>", "<a>/<b>" or "<k>h" (k grid spacings).
double parse_length(const std::string& text, double h);

ScenarioConfig scenario_from_config(const Config& c);
ScenarioConfig load_scenario(const std::string& path_or_builtin);

std::vector<std::string> builtin_names();
bool is_builtin(const std::string& name);
Config builtin_config(const std::string& name);
/// Fully commented default configuration (`mct dump-defaults`).
std::string default_config_text();

struct CheckResult {
  std::string name;
  bool binding = true;
  bool pass = true;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct MeasureRow {
  double t = 0.0;
  double mu_total = 0.0;
  double d_of_t = 1.0;
  double sup_xi_plus = 0.0;
  double xi_l1 = 0.0;
  double tv_w = 0.0;
  double brakke_residual = 0.0;  // max over test functions; NaN when not probed
};

struct BrakkeRow {
  double t = 0.0;
  std::string test;
  double lhs = 0.0, rhs = 0.0, residual = 0.0;
};

struct MonotonicityRow {
  Point pole{};
  double s = 0.0, t = 0.0;
  double value = 0.0, delta_from_prev = 0.0;
  double discrepancy_term = 0.0, transport_term = 0.0, tail_term = 0.0;
  bool pass = true;
};

struct InterfaceRow {
  double t = 0.0;
  int components = 0;
  double measure = 0.0;
  double fit_cx = 0.0, fit_cy = 0.0, fit_cz = 0.0, fit_radius = 0.0, fit_rms = 0.0;
  double theta_min = 0.0, theta_max = 0.0;
};

struct EnergyRow {
  long step = 0;
  double t = 0.0;
  double mu = 0.0;
  double advection_integral = 0.0;  // cumulative eps int int (u . grad phi)^2
};

struct DiagnosticsReport {
  std::string name;
  int dim = 2, resolution = 0;
  double epsilon = 0.0, sigma = 0.0, dt = 0.0;
  double perimeter = 0.0;
  double sobolev_norm = 0.0, p_hat = 0.0;
  double mollified_sup = 0.0, mollified_sup_grad = 0.0;
  long steps = 0;
  double runtime_seconds = 0.0;
  std::vector<MeasureRow> measures;
  std::vector<BrakkeRow> brakke;
  std::vector<MonotonicityRow> monotonicity;
  std::vector<AuditRecord> audits;
  std::vector<InterfaceRow> interfaces;
  std::vector<EnergyRow> energy;
  std::vector<CheckResult> checks;
  std::vector<std::string> notes;

  bool passed() const;  // all binding checks pass
  const CheckResult* check(const std::string& name) const;
};

/// Builds the profile, initial field and mollified transport, runs the solver,
/// evaluates the scheduled diagnostics and checks, and writes CSVs, dumps and
/// summary.txt into cfg.output_dir (nothing is written when it is empty).
DiagnosticsReport run_scenario(const ScenarioConfig& cfg);

struct ConvergenceRow {
  double epsilon = 0.0;
  int resolution = 0;
  double eps_over_h = 0.0;
  double energy_error = 0.0;     // |mu_0 - sigma Per| / (sigma Per)
  double interface_error = 0.0;  // radius-law error at the last radius time, else length error at t = 0
  double xi_l1 = 0.0;            // int |xi| at the diagnostic time closest to sweep.xi_time
  double d_max = 0.0;            // max_t D(t)
  double energy_order = 0.0, xi_order = 0.0;  // log-ratio against the previous row
};

struct SweepReport {
  std::string name;
  std::vector<ConvergenceRow> rows;  // ordered by decreasing epsilon
  std::vector<CheckResult> checks;
  bool passed() const;
};

/// Runs the scenario once per sweep entry (>= 3, each with eps/h in [2, 8]).
SweepReport run_sweep(const ScenarioConfig& cfg);

/// Re-renders summary.txt from the CSVs in `dir`; returns the text.
std::string render_report(const std::string& dir, bool* all_pass = nullptr);

}  // namespace mct
