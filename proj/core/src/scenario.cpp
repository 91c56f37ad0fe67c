#include "mct/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "mct/csv.hpp"
#include "mct/errors.hpp"
#include "mct/init.hpp"
#include "mct/interface.hpp"
#include "mct/measures.hpp"
#include "mct/potential.hpp"
#include "mct/transport.hpp"

namespace fs = std::filesystem;

namespace mct {

namespace {

constexpr double kTimeTol = 1e-12;

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::ConfigInvalid, msg); }

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<Point> parse_points(const std::string& text, const std::string& key) {
  std::vector<Point> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';')) {
    part = trim(part);
    if (part.empty()) continue;
    try {
      out.push_back(parse_point(part));
    } catch (const Error& e) {
      invalid(key + ": " + e.what());
    }
  }
  return out;
}

bool same_time(double a, double b) { return std::abs(a - b) <= kTimeTol * std::max(1.0, std::abs(a)); }

void require_increasing(const std::vector<double>& v, const std::string& key, double t_end) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0)) invalid(key + ": times must be >= 0");
    if (i > 0 && !(v[i] > v[i - 1])) invalid(key + ": times must be strictly increasing");
  }
  if (!v.empty() && v.back() > t_end * (1.0 + 1e-12)) invalid(key + ": last time exceeds solver.t_end");
}

const std::vector<std::string> kKnownKeys = {
    "name", "grid.dim", "grid.resolution", "well", "epsilon", "output_dir",
    "geometry.kind", "geometry.center", "geometry.radius", "geometry.center2", "geometry.radius2",
    "geometry.r_in", "geometry.r_out", "geometry.base", "geometry.heights", "geometry.heights_file",
    "geometry.r_trunc",
    "transport.kind", "transport.params", "transport.files", "transport.p", "transport.q", "transport.beta",
    "solver.scheme", "solver.dt", "solver.t_end", "solver.cfl_safety", "solver.upwind", "solver.snapshot_times",
    "diagnostics.times", "diagnostics.poles", "diagnostics.pole_time", "diagnostics.audit_window",
    "diagnostics.audit_tolerance", "diagnostics.tail_constant", "diagnostics.density_radii",
    "diagnostics.density_centers", "diagnostics.density_probe_radii", "diagnostics.density_random",
    "diagnostics.test_functions", "diagnostics.brakke", "diagnostics.theta_radius_eps",
    "diagnostics.theta_probes", "diagnostics.dump_fields", "diagnostics.interface",
    "checks.radius_law", "checks.radius_times", "checks.radius_tol", "checks.translation",
    "checks.translation_tol", "checks.dissipation", "checks.dissipation_tol", "checks.growth",
    "checks.growth_tol", "checks.discrepancy", "checks.bv", "checks.bv_tol", "checks.bv_perimeter",
    "checks.bv_perimeter_tol", "checks.theta", "checks.theta_until", "checks.theta_range",
    "checks.monotonicity", "checks.energy_concentration", "checks.energy_tol", "checks.final_components", "checks.final_energy_fraction",
    "checks.interface_measure", "checks.interface_tol", "checks.plane_drift",
    "checks.plane_drift_t1", "checks.plane_drift_tol", "checks.plane_translation", "checks.plane_shift_tol_h",
    "checks.plane_shape_tol",
    "sweep.epsilons", "sweep.resolutions", "sweep.t_end", "sweep.xi_time", "sweep.d_tol",
};

std::vector<double> read_heights_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("geometry.heights_file: cannot open " + path);
  std::vector<double> out;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    try {
      out.push_back(std::stod(line));
    } catch (const std::exception&) {
      invalid("geometry.heights_file: bad number '" + line + "'");
    }
  }
  return out;
}

// Wrapped to [-1/2, 1/2).
double wrap_half(double v) { return v - std::floor(v + 0.5); }

std::string time_tag(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", t);
  return buf;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

InitialGeometry make_geometry(const ScenarioConfig& cfg) {
  const auto& g = cfg.geometry;
  if (g.kind == "circle") {
    if (cfg.dim != 2) invalid("geometry.kind = circle needs grid.dim = 2");
    return InitialGeometry::circle(g.center, g.radius);
  }
  if (g.kind == "sphere") {
    if (cfg.dim != 3) invalid("geometry.kind = sphere needs grid.dim = 3");
    return InitialGeometry::sphere(g.center, g.radius);
  }
  if (g.kind == "two_circles") {
    if (cfg.dim != 2) invalid("geometry.kind = two_circles needs grid.dim = 2");
    return InitialGeometry::two_circles(g.center, g.radius, g.center2, g.radius2);
  }
  if (g.kind == "annulus") {
    if (cfg.dim != 2) invalid("geometry.kind = annulus needs grid.dim = 2");
    return InitialGeometry::annulus(g.center, g.r_in, g.r_out);
  }
  if (g.kind == "graph") {
    if (cfg.dim > 2) invalid("geometry.kind = graph needs grid.dim 1 or 2");
    return InitialGeometry::graph(cfg.dim, g.base, g.heights);
  }
  invalid("geometry.kind: unknown '" + g.kind + "'");
}

Point param_point(const std::vector<double>& p, std::size_t from, int dim, double fill) {
  Point out{fill, fill, fill};
  for (int k = 0; k < dim; ++k)
    if (from + k < p.size()) out[k] = p[from + k];
  return out;
}

TransportSpec make_transport(const ScenarioConfig& cfg) {
  const auto& t = cfg.transport;
  const auto& p = t.params;
  TransportSpec spec = TransportSpec::zero(cfg.dim);
  if (t.kind == "zero") {
  } else if (t.kind == "constant") {
    if (p.size() != static_cast<std::size_t>(cfg.dim)) invalid("transport.params: constant needs grid.dim components");
    spec = TransportSpec::constant(cfg.dim, param_point(p, 0, cfg.dim, 0.0));
  } else if (t.kind == "shear") {
    spec = TransportSpec::shear(cfg.dim, p.empty() ? 1.0 : p[0]);
  } else if (t.kind == "rotation") {
    spec = TransportSpec::rotation(cfg.dim, p.empty() ? 1.0 : p[0], param_point(p, 1, cfg.dim, 0.5));
  } else if (t.kind == "rough_radial") {
    spec = TransportSpec::rough_radial(cfg.dim, p.empty() ? 1.0 : p[0], param_point(p, 1, cfg.dim, 0.5));
  } else if (t.kind == "sampled") {
    if (t.files.empty() || t.files.size() % cfg.dim != 0)
      invalid("transport.files: sampled transport needs grid.dim dumps per time knot");
    std::vector<double> times;
    std::vector<VectorField> fields;
    for (std::size_t k = 0; k < t.files.size(); k += cfg.dim) {
      std::vector<ScalarField> comps;
      double time = 0.0;
      for (int c = 0; c < cfg.dim; ++c) {
        const FieldDump d = read_field_dump(t.files[k + c]);
        if (static_cast<int>(d.dim) != cfg.dim) invalid("transport.files: " + t.files[k + c] + " has wrong dim");
        time = d.time;
        comps.push_back(field_from_dump(d));
      }
      times.push_back(time);
      fields.emplace_back(std::move(comps));
    }
    spec = TransportSpec::sampled(std::move(times), std::move(fields));
  } else {
    invalid("transport.kind: unknown '" + t.kind + "'");
  }
  spec.with_exponents(t.p, t.q);
  return spec;
}

// Extinction time of a round circle or sphere.
double extinction_time(const ScenarioConfig& cfg) {
  return cfg.geometry.radius * cfg.geometry.radius / (2.0 * (cfg.dim - 1));
}

Point constant_velocity(const ScenarioConfig& cfg) {
  if (cfg.transport.kind != "constant") return {0.0, 0.0, 0.0};
  return param_point(cfg.transport.params, 0, cfg.dim, 0.0);
}

bool round_geometry(const ScenarioConfig& cfg) {
  return cfg.geometry.kind == "circle" || cfg.geometry.kind == "sphere";
}

std::vector<double> diagnostic_schedule(const ScenarioConfig& cfg) {
  const double t_end = cfg.solver.t_end;
  std::vector<double> t{0.0, t_end};
  for (double v : cfg.diagnostics.times) t.push_back(v);
  if (cfg.checks.radius_law || cfg.checks.translation)
    for (double v : cfg.checks.radius_times) t.push_back(v);
  std::vector<double> out;
  std::sort(t.begin(), t.end());
  for (double v : t) {
    if (v < 0.0 || v > t_end * (1.0 + 1e-12)) continue;
    if (!out.empty() && same_time(out.back(), v)) continue;
    out.push_back(std::min(v, t_end));
  }
  return out;
}

CheckResult make_check(std::string name, bool binding, bool pass, double value, double threshold,
                       std::string detail = {}) {
  return CheckResult{std::move(name), binding, pass, value, threshold, sanitize(std::move(detail))};
}

const InterfaceRow* interface_at(const DiagnosticsReport& r, double t) {
  for (const auto& row : r.interfaces)
    if (same_time(row.t, t)) return &row;
  return nullptr;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
}

// Exact round-trip cells.
std::string cell(double v) { return format_double(v); }

void write_outputs(const ScenarioConfig& cfg, const DiagnosticsReport& r, const std::string& source) {
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  write_text(dir / "config.conf", source);

  std::ostringstream info;
  info << "name = " << r.name << "\n"
       << "dim = " << r.dim << "\n"
       << "resolution = " << r.resolution << "\n"
       << "epsilon = " << cell(r.epsilon) << "\n"
       << "sigma = " << cell(r.sigma) << "\n"
       << "dt = " << cell(r.dt) << "\n"
       << "steps = " << r.steps << "\n"
       << "perimeter = " << cell(r.perimeter) << "\n"
       << "sobolev_norm = " << cell(r.sobolev_norm) << "\n"
       << "p_hat = " << cell(r.p_hat) << "\n"
       << "mollified_sup = " << cell(r.mollified_sup) << "\n"
       << "mollified_sup_grad = " << cell(r.mollified_sup_grad) << "\n";
  write_text(dir / "info.conf", info.str());

  CsvTable m;
  m.header = {"t", "mu_total", "D", "sup_xi_plus", "xi_l1", "tv_w", "brakke_residual"};
  for (const auto& row : r.measures)
    m.add_row({row.t, row.mu_total, row.d_of_t, row.sup_xi_plus, row.xi_l1, row.tv_w, row.brakke_residual});
  m.write((dir / "measures.csv").string());

  CsvTable mono;
  mono.header = {"pole_x", "pole_y"};
  if (r.dim == 3) mono.header.push_back("pole_z");
  for (const char* h : {"s", "t", "value", "delta_from_prev", "discrepancy_term", "transport_term", "tail_term", "pass"})
    mono.header.push_back(h);
  for (const auto& row : r.monotonicity) {
    std::vector<double> v{row.pole[0], row.pole[1]};
    if (r.dim == 3) v.push_back(row.pole[2]);
    for (double x : {row.s, row.t, row.value, row.delta_from_prev, row.discrepancy_term, row.transport_term,
                     row.tail_term, row.pass ? 1.0 : 0.0})
      v.push_back(x);
    mono.add_row(v);
  }
  mono.write((dir / "monotonicity.csv").string());

  CsvTable b;
  b.header = {"t", "test", "lhs", "rhs", "residual"};
  for (const auto& row : r.brakke)
    b.rows.push_back({cell(row.t), row.test, cell(row.lhs), cell(row.rhs), cell(row.residual)});
  b.write((dir / "brakke.csv").string());

  CsvTable itf;
  itf.header = {"t", "components", "measure", "fit_x", "fit_y", "fit_z", "fit_radius", "fit_rms", "theta_min",
                "theta_max"};
  for (const auto& row : r.interfaces)
    itf.add_row({row.t, static_cast<double>(row.components), row.measure, row.fit_cx, row.fit_cy, row.fit_cz,
                 row.fit_radius, row.fit_rms, row.theta_min, row.theta_max});
  itf.write((dir / "interface.csv").string());

  if (!r.energy.empty()) {
    CsvTable e;
    e.header = {"step", "t", "mu", "advection_integral"};
    for (const auto& row : r.energy)
      e.add_row({static_cast<double>(row.step), row.t, row.mu, row.advection_integral});
    e.write((dir / "energy.csv").string());
  }

  CsvTable c;
  c.header = {"name", "binding", "pass", "value", "threshold", "detail"};
  for (const auto& ch : r.checks)
    c.rows.push_back({ch.name, ch.binding ? "1" : "0", ch.pass ? "1" : "0", cell(ch.value), cell(ch.threshold),
                      ch.detail});
  c.write((dir / "checks.csv").string());

  write_text(dir / "summary.txt", render_report(dir.string()));
}

}  // namespace

double parse_length(const std::string& text, double h) {
  const std::string s = trim(text);
  if (s.empty()) invalid("empty length");
  try {
    std::size_t used = 0;
    if (s.back() == 'h') {
      const double k = std::stod(s.substr(0, s.size() - 1), &used);
      if (used != s.size() - 1) throw std::invalid_argument(s);
      return k * h;
    }
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
      const std::string a = trim(s.substr(0, slash)), b = trim(s.substr(slash + 1));
      std::size_t ua = 0, ub = 0;
      const double num = std::stod(a, &ua), den = std::stod(b, &ub);
      if (ua != a.size() || ub != b.size() || den == 0.0) throw std::invalid_argument(s);
      return num / den;
    }
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    invalid("bad length '" + s + "' (expected <value>, <a>/<b> or <k>h)");
  }
}

double ScenarioConfig::epsilon_value(int res) const { return parse_length(epsilon, 1.0 / res); }

ScenarioConfig scenario_from_config(const Config& c) {
  c.require_known(kKnownKeys);
  ScenarioConfig s;
  s.name = c.get("name", s.name);
  s.dim = c.get_int("grid.dim", s.dim);
  s.resolution = c.get_int("grid.resolution", s.resolution);
  if (s.dim < 1 || s.dim > 3) invalid("grid.dim: must be 1, 2 or 3");
  if (s.resolution < 16) invalid("grid.resolution: must be >= 16");
  s.well = c.get("well", s.well);
  s.epsilon = c.get("epsilon", s.epsilon);
  s.output_dir = c.get("output_dir", "");

  auto& g = s.geometry;
  g.kind = c.get("geometry.kind", g.kind);
  if (c.has("geometry.center")) g.center = parse_point(c.get("geometry.center"));
  if (c.has("geometry.center2")) g.center2 = parse_point(c.get("geometry.center2"));
  g.radius = c.get_double("geometry.radius", g.radius);
  g.radius2 = c.get_double("geometry.radius2", g.radius2);
  g.r_in = c.get_double("geometry.r_in", g.r_in);
  g.r_out = c.get_double("geometry.r_out", g.r_out);
  g.base = c.get_double("geometry.base", g.base);
  if (c.has("geometry.heights")) g.heights = c.get_doubles("geometry.heights");
  if (c.has("geometry.heights_file")) g.heights = read_heights_file(c.get("geometry.heights_file"));
  g.r_trunc = c.get_double("geometry.r_trunc", g.r_trunc);

  auto& t = s.transport;
  t.kind = c.get("transport.kind", t.kind);
  if (c.has("transport.params")) t.params = c.get_doubles("transport.params");
  if (c.has("transport.files")) t.files = c.get_strings("transport.files");
  t.p = c.get_double("transport.p", t.p);
  t.q = c.get_double("transport.q", t.q);
  t.beta = c.get_double("transport.beta", t.beta);
  if (!(t.beta > 0.0 && t.beta < 1.0)) invalid("transport.beta: must lie in (0, 1)");

  auto& sv = s.solver;
  const std::string scheme = c.get("solver.scheme", "semi_implicit");
  if (scheme == "explicit")
    sv.scheme = Scheme::Explicit;
  else if (scheme == "semi_implicit")
    sv.scheme = Scheme::SemiImplicit;
  else
    invalid("solver.scheme: expected explicit or semi_implicit, got '" + scheme + "'");
  const std::string dt = c.get("solver.dt", "auto");
  sv.dt = dt == "auto" ? 0.0 : c.get_double("solver.dt", 0.0);
  sv.t_end = c.get_double("solver.t_end", 0.0);
  if (!(sv.t_end >= 0.0)) invalid("solver.t_end: must be >= 0");
  sv.cfl_safety = c.get_double("solver.cfl_safety", sv.cfl_safety);
  if (!(sv.cfl_safety > 0.0 && sv.cfl_safety <= 1.0)) invalid("solver.cfl_safety: must lie in (0, 1]");
  sv.upwind = c.get_bool("solver.upwind", sv.upwind);
  if (c.has("solver.snapshot_times")) s.snapshot_times = c.get_doubles("solver.snapshot_times");
  require_increasing(s.snapshot_times, "solver.snapshot_times", sv.t_end);

  auto& d = s.diagnostics;
  if (c.has("diagnostics.times")) d.times = c.get_doubles("diagnostics.times");
  require_increasing(d.times, "diagnostics.times", sv.t_end);
  const std::string poles = c.get("diagnostics.poles", "");
  if (trim(poles) == "auto")
    d.pole_auto = true;
  else
    d.poles = parse_points(poles, "diagnostics.poles");
  const std::string pole_time = c.get("diagnostics.pole_time", "");
  if (trim(pole_time) == "auto") {
    if (!round_geometry(s)) invalid("diagnostics.pole_time = auto needs a circle or sphere geometry");
    d.pole_time = extinction_time(s);
  } else {
    d.pole_time = c.get_double("diagnostics.pole_time", 0.0);
  }
  if (d.pole_auto && !round_geometry(s)) invalid("diagnostics.poles = auto needs a circle or sphere geometry");
  if (c.has("diagnostics.audit_window")) {
    const auto w = c.get_doubles("diagnostics.audit_window");
    if (w.size() != 2 || !(w[1] > w[0]) || w[0] < 0.0) invalid("diagnostics.audit_window: expected t0, t1 with t0 < t1");
    d.audit_t0 = w[0];
    d.audit_t1 = w[1];
  }
  d.audit_tolerance = c.get_double("diagnostics.audit_tolerance", d.audit_tolerance);
  d.tail_constant = c.get_double("diagnostics.tail_constant", d.tail_constant);
  if (c.has("diagnostics.density_radii")) d.density_radii = c.get_doubles("diagnostics.density_radii");
  d.density_centers = parse_points(c.get("diagnostics.density_centers", ""), "diagnostics.density_centers");
  if (c.has("diagnostics.density_probe_radii"))
    d.density_probe_radii = c.get_doubles("diagnostics.density_probe_radii");
  d.density_random = c.get_int("diagnostics.density_random", d.density_random);
  if (c.has("diagnostics.test_functions")) d.test_functions = c.get_strings("diagnostics.test_functions");
  for (const auto& name : d.test_functions) {
    try {
      test_function_by_name(name);
    } catch (const Error&) {
      invalid("diagnostics.test_functions: unknown '" + name + "'");
    }
  }
  d.brakke = c.get_bool("diagnostics.brakke", d.brakke);
  d.theta_radius_eps = c.get_double("diagnostics.theta_radius_eps", d.theta_radius_eps);
  d.theta_probes = c.get_int("diagnostics.theta_probes", d.theta_probes);
  d.dump_fields = c.get_bool("diagnostics.dump_fields", d.dump_fields);
  d.interface = c.get_bool("diagnostics.interface", d.interface);

  auto& k = s.checks;
  k.radius_law = c.get_bool("checks.radius_law", k.radius_law);
  if (c.has("checks.radius_times")) k.radius_times = c.get_doubles("checks.radius_times");
  require_increasing(k.radius_times, "checks.radius_times", std::numeric_limits<double>::infinity());
  k.radius_tol = c.get_double("checks.radius_tol", k.radius_tol);
  k.translation = c.get_bool("checks.translation", k.translation);
  k.translation_tol = c.get_double("checks.translation_tol", k.translation_tol);
  if ((k.radius_law || k.translation) && !round_geometry(s))
    invalid("checks.radius_law / checks.translation need a circle or sphere geometry");
  if (k.translation && t.kind != "constant") invalid("checks.translation needs transport.kind = constant");
  k.dissipation = c.get_bool("checks.dissipation", k.dissipation);
  k.dissipation_tol = c.get_double("checks.dissipation_tol", k.dissipation_tol);
  k.growth = c.get_bool("checks.growth", k.growth);
  k.growth_tol = c.get_double("checks.growth_tol", k.growth_tol);
  k.discrepancy = c.get_bool("checks.discrepancy", k.discrepancy);
  k.bv = c.get_bool("checks.bv", k.bv);
  k.bv_tol = c.get_double("checks.bv_tol", k.bv_tol);
  k.bv_perimeter = c.get_bool("checks.bv_perimeter", k.bv_perimeter);
  k.bv_perimeter_tol = c.get_double("checks.bv_perimeter_tol", k.bv_perimeter_tol);
  k.theta = c.get_bool("checks.theta", k.theta);
  k.theta_until = c.get_double("checks.theta_until", k.theta_until);
  if (c.has("checks.theta_range")) {
    const auto r = c.get_doubles("checks.theta_range");
    if (r.size() != 2 || !(r[0] < r[1])) invalid("checks.theta_range: expected lo, hi");
    k.theta_lo = r[0];
    k.theta_hi = r[1];
  }
  if (k.theta && !round_geometry(s)) invalid("checks.theta needs a circle or sphere geometry");
  k.monotonicity = c.get_bool("checks.monotonicity", k.monotonicity);
  if (k.monotonicity && (d.pole_time <= 0.0 || d.audit_t0 < 0.0))
    invalid("checks.monotonicity needs diagnostics.pole_time and diagnostics.audit_window");
  k.energy_concentration = c.get_bool("checks.energy_concentration", k.energy_concentration);
  k.energy_tol = c.get_double("checks.energy_tol", k.energy_tol);
  k.final_energy_fraction = c.get_double("checks.final_energy_fraction", k.final_energy_fraction);
  k.final_components = c.get_int("checks.final_components", k.final_components);
  k.interface_measure = c.get_bool("checks.interface_measure", k.interface_measure);
  k.interface_tol = c.get_double("checks.interface_tol", k.interface_tol);
  k.plane_drift = c.get_bool("checks.plane_drift", k.plane_drift);
  k.plane_drift_t1 = c.get_double("checks.plane_drift_t1", k.plane_drift_t1);
  k.plane_drift_tol = c.get_double("checks.plane_drift_tol", k.plane_drift_tol);
  k.plane_translation = c.get_bool("checks.plane_translation", k.plane_translation);
  k.plane_shift_tol_h = c.get_double("checks.plane_shift_tol_h", k.plane_shift_tol_h);
  k.plane_shape_tol = c.get_double("checks.plane_shape_tol", k.plane_shape_tol);
  if ((k.plane_drift || k.plane_translation) && g.kind != "graph")
    invalid("checks.plane_drift / checks.plane_translation need geometry.kind = graph");

  auto& w = s.sweep;
  if (c.has("sweep.epsilons")) {
    w.epsilons = c.get_strings("sweep.epsilons");
    if (w.epsilons.empty()) invalid("sweep.epsilons: empty list");
  }
  if (c.has("sweep.resolutions")) {
    for (double v : c.get_doubles("sweep.resolutions")) {
      if (v != std::floor(v) || v < 16) invalid("sweep.resolutions: integers >= 16 expected");
      w.resolutions.push_back(static_cast<int>(v));
    }
  }
  w.t_end = c.get_double("sweep.t_end", w.t_end);
  w.xi_time = c.get_double("sweep.xi_time", w.xi_time);
  w.d_tol = c.get_double("sweep.d_tol", w.d_tol);

  const double h = 1.0 / s.resolution;
  const double ratio = s.epsilon_value() / h;
  if (!(ratio >= 2.0 - 1e-9 && ratio <= 8.0 + 1e-9)) {
    std::ostringstream os;
    os << "epsilon: eps/h = " << ratio << " outside [2, 8]";
    invalid(os.str());
  }
  // catches unknown well names early
  try {
    well_by_name(s.well);
  } catch (const Error& e) {
    invalid(std::string("well: ") + e.what());
  }
  return s;
}

namespace {

const char* kDefaultText = R"(# mct scenario configuration
#
# Grammar: one `key = value` per line, '#' starts a comment, lists are comma
# separated (optionally in [ ]), point lists separate points with ';'.
# Lengths given as "<k>h" are k grid spacings; "<a>/<b>" fractions work too.

name = custom
grid.dim = 2                  # 1, 2 or 3
grid.resolution = 256         # cells per axis on the unit torus
well = quartic                # quartic | perturbed_quartic | table:<path>
epsilon = 4h                  # must satisfy 2h <= epsilon <= 8h
output_dir =                  # empty: nothing is written

geometry.kind = circle        # circle | sphere | two_circles | annulus | graph
geometry.center = 0.5, 0.5
geometry.radius = 0.25
# geometry.center2 = 0.75, 0.75   two_circles
# geometry.radius2 = 0.12
# geometry.r_in = 0.125           annulus
# geometry.r_out = 0.375
# geometry.base = 0.25            graph: slab between base and heights(y)
# geometry.heights = 0.75         periodic samples, or geometry.heights_file
geometry.r_trunc = 0          # distance truncation radius, 0 selects the reach

transport.kind = zero         # zero | constant | shear | rotation | rough_radial | sampled
transport.params =            # constant: U; shear: A; rotation/rough_radial: amplitude, center
transport.p = 4
transport.q = 4
transport.beta = 0.25         # mollification exponent
# transport.files = u0.pfmf, v0.pfmf, u1.pfmf, v1.pfmf   sampled: grid.dim dumps per knot

solver.scheme = semi_implicit # semi_implicit | explicit
solver.dt = auto              # auto: cfl_safety times the stability bound
solver.t_end = 0.02
solver.cfl_safety = 0.5
solver.upwind = false
solver.snapshot_times =

diagnostics.times = 0.005, 0.01, 0.015
diagnostics.poles =           # auto, or points separated by ';'
diagnostics.pole_time = 0     # auto: extinction time of the circle/sphere
# diagnostics.audit_window = 0.001, 0.02
diagnostics.audit_tolerance = 0.002
diagnostics.tail_constant = 1
diagnostics.density_radii =   # empty: 5, 10, 20 eps and 0.1, 0.2
diagnostics.density_centers =
diagnostics.density_probe_radii =
diagnostics.density_random = 100
diagnostics.test_functions = one, cos_x
diagnostics.brakke = true
diagnostics.theta_radius_eps = 10
diagnostics.theta_probes = 16
diagnostics.dump_fields = true
diagnostics.interface = true

checks.radius_law = false
checks.radius_times =
checks.radius_tol = 0.02
checks.translation = false
checks.translation_tol = 0.02
checks.dissipation = false
checks.dissipation_tol = 1e-10
checks.growth = false
checks.growth_tol = 1e-6
checks.discrepancy = true
checks.bv = true
checks.bv_tol = 1e-8
checks.bv_perimeter = false
checks.bv_perimeter_tol = 0.03
checks.theta = false
checks.theta_until = 0
checks.theta_range = 0.9, 1.1
checks.monotonicity = false
checks.energy_concentration = false
checks.energy_tol = 0.02
checks.final_energy_fraction = -1  # > 0: advisory bound on mu(t_end) / mu(0)
checks.final_components = -1  # >= 0: interface components expected at t_end
checks.interface_measure = false
checks.interface_tol = 0.01
checks.plane_drift = false
checks.plane_drift_t1 = 0.01
checks.plane_drift_tol = 1e-4
checks.plane_translation = false
checks.plane_shift_tol_h = 1.5
checks.plane_shape_tol = 5e-3

# sweep.epsilons = 1/24, 1/32, 1/48
# sweep.resolutions = 48, 128, 384
sweep.t_end = -1              # < 0 keeps solver.t_end
sweep.xi_time = 0.005
sweep.d_tol = 0.15
)";

const std::map<std::string, std::string>& builtins() {
  static const std::map<std::string, std::string> table = {
      {"plane_stationary", R"(
name = plane_stationary
grid.dim = 2
grid.resolution = 256
epsilon = 4h
geometry.kind = graph
geometry.base = 0.25
geometry.heights = 0.75
solver.scheme = explicit
solver.t_end = 0.01
diagnostics.times = 0.001, 0.0025, 0.005, 0.0075
checks.plane_drift = true
checks.dissipation = true
checks.energy_concentration = true
)"},
      {"plane_translate", R"(
name = plane_translate
grid.dim = 2
grid.resolution = 256
epsilon = 8h
geometry.kind = graph
geometry.base = 0.25
geometry.heights = 0.75
transport.kind = constant
transport.params = 0.5, 0
solver.scheme = explicit
solver.t_end = 0.02
diagnostics.times = 0.005, 0.01, 0.015
checks.plane_translation = true
checks.growth = true
)"},
      {"circle_shrink", R"(
name = circle_shrink
grid.dim = 2
grid.resolution = 256
epsilon = 4h
geometry.kind = circle
geometry.center = 0.5, 0.5
geometry.radius = 0.25
solver.scheme = explicit
solver.t_end = 0.031
diagnostics.times = 0.001, 0.0025, 0.005, 0.0075, 0.01, 0.0125, 0.015, 0.0175, 0.02, 0.0225, 0.025, 0.0275, 0.03
diagnostics.poles = auto
diagnostics.pole_time = auto
diagnostics.audit_window = 0.001, 0.02
diagnostics.density_centers = 0.5, 0.5
diagnostics.density_probe_radii = 0.15, 0.16, 0.17, 0.18, 0.19, 0.2, 0.21, 0.22, 0.23, 0.24, 0.25, 0.26, 0.27, 0.28, 0.29, 0.3, 0.31, 0.32, 0.33, 0.34, 0.35, 0.36, 0.37, 0.38, 0.39, 0.4, 0.41, 0.42, 0.43, 0.44, 0.45
checks.radius_law = true
checks.radius_times = 0.005, 0.01, 0.02
checks.dissipation = true
checks.bv_perimeter = true
checks.theta = true
checks.theta_until = 0.025
checks.monotonicity = true
checks.energy_concentration = true
checks.interface_measure = true
checks.final_energy_fraction = 0.1
sweep.epsilons = 1/24, 1/32, 1/48
sweep.resolutions = 48, 128, 384
sweep.t_end = 0.02
)"},
      {"circle_transport", R"(
name = circle_transport
grid.dim = 2
grid.resolution = 256
epsilon = 4h
geometry.kind = circle
geometry.center = 0.5, 0.5
geometry.radius = 0.25
transport.kind = constant
transport.params = 0.5, 0
solver.scheme = explicit
solver.t_end = 0.031
diagnostics.times = 0.001, 0.0025, 0.005, 0.0075, 0.01, 0.0125, 0.015, 0.0175, 0.02, 0.0225, 0.025, 0.0275, 0.03
diagnostics.poles = auto
diagnostics.pole_time = auto
diagnostics.audit_window = 0.001, 0.02
checks.radius_law = true
checks.translation = true
checks.radius_times = 0.005, 0.01, 0.02
checks.growth = true
checks.theta = true
checks.theta_until = 0.025
checks.monotonicity = true
checks.energy_concentration = true
)"},
      {"two_circles_disjoint", R"(
name = two_circles_disjoint
grid.dim = 2
grid.resolution = 256
epsilon = 4h
geometry.kind = two_circles
geometry.center = 0.3, 0.3
geometry.radius = 0.15
geometry.center2 = 0.7, 0.7
geometry.radius2 = 0.12
solver.scheme = explicit
solver.t_end = 0.005
diagnostics.times = 0.001, 0.0025
checks.dissipation = true
checks.energy_concentration = true
checks.bv_perimeter = true
checks.interface_measure = true
)"},
      {"annulus_collapse", R"(
name = annulus_collapse
grid.dim = 2
grid.resolution = 256
epsilon = 4h
geometry.kind = annulus
geometry.center = 0.5, 0.5
geometry.r_in = 0.125
geometry.r_out = 0.375
solver.scheme = explicit
solver.t_end = 0.015
diagnostics.times = 0.0025, 0.005, 0.0075, 0.01, 0.0125
checks.dissipation = true
checks.energy_concentration = true
checks.bv_perimeter = true
checks.final_components = 1
)"},
      {"sphere_shrink", R"(
name = sphere_shrink
grid.dim = 3
grid.resolution = 128
epsilon = 4h
geometry.kind = sphere
geometry.center = 0.5, 0.5, 0.5
geometry.radius = 0.25
solver.scheme = explicit
solver.t_end = 0.005
diagnostics.times = 0.001, 0.0025
diagnostics.brakke = false
checks.radius_law = true
checks.radius_times = 0.0025, 0.005
checks.dissipation = true
checks.energy_concentration = true
checks.energy_tol = 0.03
checks.interface_measure = true
checks.interface_tol = 0.03
)"},
      {"rough_u_circle", R"(
name = rough_u_circle
grid.dim = 2
grid.resolution = 256
epsilon = 4h
geometry.kind = circle
geometry.center = 0.5, 0.5
geometry.radius = 0.25
transport.kind = rough_radial
transport.params = 1, 0.5, 0.5
transport.p = 1.6
transport.q = 4
solver.scheme = explicit
solver.t_end = 0.01
diagnostics.times = 0.001, 0.0025, 0.005, 0.0075
checks.growth = true
checks.energy_concentration = true
)"},
  };
  return table;
}

}  // namespace

std::vector<std::string> builtin_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : builtins()) out.push_back(k);
  return out;
}

bool is_builtin(const std::string& name) { return builtins().count(name) != 0; }

Config builtin_config(const std::string& name) {
  const auto it = builtins().find(name);
  if (it == builtins().end()) invalid("unknown builtin scenario '" + name + "'");
  return Config::parse(it->second, "builtin:" + name);
}

std::string default_config_text() { return kDefaultText; }

ScenarioConfig load_scenario(const std::string& path_or_builtin) {
  if (is_builtin(path_or_builtin) && !fs::exists(path_or_builtin))
    return scenario_from_config(builtin_config(path_or_builtin));
  return scenario_from_config(Config::load(path_or_builtin));
}

bool DiagnosticsReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass || !c.binding; });
}

const CheckResult* DiagnosticsReport::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

bool SweepReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass || !c.binding; });
}

namespace {

std::string source_text(const ScenarioConfig& cfg);

}  // namespace

DiagnosticsReport run_scenario(const ScenarioConfig& cfg) {
  const PeriodicGrid grid(cfg.dim, cfg.resolution);
  const double eps = cfg.epsilon_value();
  const double ratio = eps / grid.h();
  if (!(ratio >= 2.0 - 1e-9 && ratio <= 8.0 + 1e-9)) {
    std::ostringstream os;
    os << "epsilon: eps/h = " << ratio << " outside [2, 8]";
    invalid(os.str());
  }
  const DoubleWell well = well_by_name(cfg.well);
  const Profile profile = standing_wave(well);
  const InitialGeometry geo = make_geometry(cfg);
  const PhaseField init = build_initial_field(geo, profile, eps, grid, cfg.geometry.r_trunc);
  const TransportSpec spec = make_transport(cfg);
  const double t_end = cfg.solver.t_end;
  const MollifiedTransport u = mollify(spec, eps, grid, std::max(t_end, 1e-12), cfg.transport.beta);
  const double dt = resolve_dt(cfg.solver, grid, eps, well, u.sup_norm());

  DiagnosticsReport r;
  r.name = cfg.name;
  r.dim = cfg.dim;
  r.resolution = cfg.resolution;
  r.epsilon = eps;
  r.sigma = profile.sigma();
  r.dt = dt;
  r.perimeter = geo.boundary_measure();
  if (!spec.is_zero()) {
    r.sobolev_norm = sobolev_norm(spec, std::max(t_end, 1e-12), grid);
    r.p_hat = p_hat(spec.p(), spec.q(), cfg.dim);
  }
  r.mollified_sup = u.sup_norm();
  r.mollified_sup_grad = u.sup_gradient();

  const auto clock0 = std::chrono::steady_clock::now();
  const std::vector<double> diag = diagnostic_schedule(cfg);
  std::vector<double> targets = diag;
  for (double t : cfg.snapshot_times) targets.push_back(t);

  // per-step energy bookkeeping
  const bool track_energy = cfg.checks.dissipation || cfg.checks.growth;
  const double mu0 = total_energy(init, well);
  double max_increase = -std::numeric_limits<double>::infinity();
  double growth_excess = -std::numeric_limits<double>::infinity();
  double running_min = mu0;  // min over t0 of mu(t0) - A(t0)
  double adv_cum = 0.0;
  if (track_energy) r.energy.push_back({0, 0.0, mu0, 0.0});
  double mu_prev = mu0;
  StepObserver observer;
  if (track_energy) {
    observer = [&](const FlowState&, const FlowState& after, const StepInfo& info) {
      const double mu = total_energy(after.field, well);
      max_increase = std::max(max_increase, mu - mu_prev);
      adv_cum += info.advection_energy;
      const double f = mu - adv_cum;
      growth_excess = std::max(growth_excess, f - running_min);
      running_min = std::min(running_min, f);
      mu_prev = mu;
      r.energy.push_back({after.step_count, after.t, mu, adv_cum});
    };
  }

  FlowState start;
  start.field = init;
  const std::vector<FlowState> states = run(start, well, u, cfg.solver, targets, observer);
  r.steps = states.back().step_count;

  const Stepper probe(well, u, cfg.solver);
  std::vector<TestFunction> tests;
  for (const auto& name : cfg.diagnostics.test_functions) tests.push_back(test_function_by_name(name));

  // monotonicity poles
  std::vector<KernelSpec> kernels;
  if (cfg.diagnostics.pole_time > 0.0) {
    const double s = cfg.diagnostics.pole_time;
    std::vector<Point> poles = cfg.diagnostics.poles;
    if (cfg.diagnostics.pole_auto) {
      const Point U = constant_velocity(cfg);
      Point y = cfg.geometry.center;
      for (int k = 0; k < cfg.dim; ++k) y[k] += U[k] * s;
      poles.push_back(wrap_point(y, cfg.dim));
    }
    for (const auto& y : poles) kernels.push_back(KernelSpec{y, s, cfg.dim});
  }
  std::vector<std::vector<MonotonicitySample>> mono(kernels.size());

  DensityOptions dens;
  dens.radii = cfg.diagnostics.density_radii;
  dens.extra_centers = cfg.diagnostics.density_centers;
  dens.extra_radii = cfg.diagnostics.density_probe_radii;
  dens.random_centers = cfg.diagnostics.density_random;

  const double theta_r = cfg.diagnostics.theta_radius_eps * eps;
  const bool theta_ok = cfg.dim >= 2 && theta_r >= 5.0 * eps && theta_r <= 0.25;
  if (round_geometry(cfg) && !theta_ok && cfg.checks.theta)
    r.notes.push_back("theta radius " + num(theta_r) + " outside [5 eps, 0.25]; theta skipped");

  double sup_abs_drift = 0.0;  // plane_stationary
  std::vector<double> plane_shift_err, plane_shape_err;
  const double U0 = constant_velocity(cfg)[0];

  for (const FlowState& st : states) {
    const bool is_diag = std::any_of(diag.begin(), diag.end(), [&](double t) { return same_time(t, st.t); });
    if (!is_diag) continue;
    const double t = st.t;
    const MeasureField m = energy_and_discrepancy(st.field, well);
    MeasureRow row;
    row.t = t;
    row.mu_total = m.total();
    const DensityReport dr = density_ratio(m, profile, dens);
    row.d_of_t = dr.d_of_t;
    const DiscrepancyBound db = positive_discrepancy_bound(m, cfg.transport.beta);
    row.sup_xi_plus = db.sup_value;
    row.xi_l1 = discrepancy_l1(m);
    row.tv_w = bv_projection(st.field, profile).total_variation;
    row.brakke_residual = std::numeric_limits<double>::quiet_NaN();
    if (cfg.diagnostics.brakke && !tests.empty()) {
      const FlowState next = probe.step(st, dt);
      VectorField um;
      const VectorField* up = nullptr;
      if (!u.is_zero()) {
        um = u.at(t + 0.5 * dt);
        up = &um;
      }
      double worst = 0.0;
      for (TestFunction f : tests) {
        const BrakkeResidual br = brakke_residual(st.field, next.field, dt, well, up, f);
        r.brakke.push_back({t, to_string(f), br.lhs, br.rhs, br.residual});
        worst = std::max(worst, br.residual);
      }
      row.brakke_residual = worst;
    }
    r.measures.push_back(row);

    for (std::size_t k = 0; k < kernels.size(); ++k) {
      if (t >= kernels[k].s) continue;
      VectorField ut;
      const VectorField* up = nullptr;
      if (!u.is_zero()) {
        ut = u.at(t);
        up = &ut;
      }
      mono[k].push_back(sample_monotonicity(m, kernels[k], t, up, dr.d_of_t));
    }

    if (cfg.dim >= 2 && cfg.diagnostics.interface) {
      InterfaceRow ir;
      ir.t = t;
      try {
        const InterfaceMesh mesh = extract_interface(st.field.phi);
        ir.components = static_cast<int>(mesh.components.size());
        ir.measure = mesh.measure;
        if (round_geometry(cfg) && mesh.components.size() == 1) {
          const CircleFit fit = cfg.dim == 2 ? fit_circle(mesh) : fit_sphere(mesh);
          ir.fit_cx = fit.center[0];
          ir.fit_cy = fit.center[1];
          ir.fit_cz = fit.center[2];
          ir.fit_radius = fit.radius;
          ir.fit_rms = fit.rms_residual;
          if (theta_ok) {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            const int np = std::max(1, cfg.diagnostics.theta_probes);
            for (int j = 0; j < np; ++j) {
              const double a = 2.0 * std::numbers::pi * (j + 0.5) / np;
              Point c = fit.center;
              c[0] += fit.radius * std::cos(a);
              c[1] += fit.radius * std::sin(a);
              const double th = density_estimate(m, r.sigma, wrap_point(c, cfg.dim), theta_r).theta_hat;
              lo = std::min(lo, th);
              hi = std::max(hi, th);
            }
            ir.theta_min = lo;
            ir.theta_max = hi;
          }
        }
        if (!cfg.output_dir.empty()) {
          fs::create_directories(cfg.output_dir);
          write_interface_csv((fs::path(cfg.output_dir) / ("interface_t" + time_tag(t) + ".csv")).string(), mesh);
        }
        if (cfg.checks.plane_translation && cfg.geometry.kind == "graph" && t > 0.0) {
          // sheets at base + U t and height + U t
          const double expect[2] = {cfg.geometry.base + U0 * t, cfg.geometry.heights.front() + U0 * t};
          const auto pos = component_positions(mesh, 0);
          double worst = pos.size() == 2 ? 0.0 : std::numeric_limits<double>::infinity();
          double shift = 0.0;
          for (double e : expect) {
            double best = std::numeric_limits<double>::infinity(), off = 0.0;
            for (double p : pos)
              if (std::abs(wrap_half(p - e)) < best) {
                best = std::abs(wrap_half(p - e));
                off = wrap_half(p - e);
              }
            worst = std::max(worst, best);
            shift += 0.5 * off;
          }
          plane_shift_err.push_back(worst);
          // shape: compare against the initial profile moved by the measured shift
          const double X = U0 * t + shift;
          const Truncation trunc(cfg.geometry.r_trunc > 0.0 ? cfg.geometry.r_trunc : geo.reach());
          double shape = 0.0;
          for (std::size_t i = 0; i < grid.size(); ++i) {
            Point x = grid.center(i);
            x[0] -= X;
            const double ref = profile.psi(trunc(geo.signed_distance(wrap_point(x, cfg.dim))) / eps);
            shape = std::max(shape, std::abs(st.field.phi[i] - ref));
          }
          plane_shape_err.push_back(shape);
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoInterface && e.code() != ErrorCode::MultipleLoops) throw;
        if (e.code() == ErrorCode::NoInterface) ir.components = 0;
      }
      r.interfaces.push_back(ir);
    }

    if (cfg.checks.plane_drift && t <= cfg.checks.plane_drift_t1 * (1.0 + 1e-12)) {
      double drift = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i)
        drift = std::max(drift, std::abs(st.field.phi[i] - init.phi[i]));
      sup_abs_drift = std::max(sup_abs_drift, drift);
    }

    if (cfg.diagnostics.dump_fields && !cfg.output_dir.empty()) {
      fs::create_directories(cfg.output_dir);
      write_field_dump((fs::path(cfg.output_dir) / ("phi_t" + time_tag(t) + ".pfmf")).string(), st.field.phi, eps, t);
    }
  }

  // monotonicity rows and audits
  for (std::size_t k = 0; k < kernels.size(); ++k) {
    const auto& ks = kernels[k];
    const auto& smp = mono[k];
    const double a0 = cfg.diagnostics.audit_t0 >= 0.0 ? cfg.diagnostics.audit_t0 : (smp.empty() ? 0.0 : smp.front().t);
    std::size_t first = smp.size();
    for (std::size_t i = 0; i < smp.size(); ++i)
      if (smp[i].t >= a0 - kTimeTol) {
        first = i;
        break;
      }
    double disc = 0.0, trans = 0.0, dmax = 0.0;
    for (std::size_t i = 0; i < smp.size(); ++i) {
      MonotonicityRow row;
      row.pole = ks.y;
      row.s = ks.s;
      row.t = smp[i].t;
      row.value = smp[i].value;
      row.delta_from_prev = i == 0 ? 0.0 : smp[i].value - smp[i - 1].value;
      if (first < smp.size() && i > first) {
        const double span = smp[i].t - smp[i - 1].t;
        disc += 0.5 * span * (smp[i].discrepancy + smp[i - 1].discrepancy);
        trans += 0.5 * span * (smp[i].transport + smp[i - 1].transport);
      }
      if (first < smp.size() && i >= first) {
        dmax = std::max(dmax, smp[i].density);
        row.discrepancy_term = disc;
        row.transport_term = trans;
        row.tail_term = cfg.diagnostics.tail_constant * std::exp(-1.0 / (128.0 * (ks.s - smp[first].t))) *
                        (smp[i].t - smp[first].t) * dmax;
        row.pass = smp[i].value - smp[first].value <=
                   row.transport_term + row.tail_term + cfg.diagnostics.audit_tolerance;
      }
      r.monotonicity.push_back(row);
    }
    if (cfg.diagnostics.audit_t0 >= 0.0) {
      try {
        r.audits.push_back(monotonicity_audit(smp, ks, cfg.diagnostics.audit_t0, cfg.diagnostics.audit_t1,
                                              cfg.diagnostics.audit_tolerance, cfg.diagnostics.tail_constant));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::InsufficientSnapshots) throw;
        AuditRecord bad;
        bad.t0 = cfg.diagnostics.audit_t0;
        bad.t1 = cfg.diagnostics.audit_t1;
        bad.pass = false;
        r.audits.push_back(bad);
        r.notes.push_back(e.what());
      }
    }
  }

  // checks
  const auto& ck = cfg.checks;
  if (ck.radius_law || ck.translation) {
    const double shrink = 2.0 * (cfg.dim - 1);
    const double r0 = cfg.geometry.radius;
    const Point U = constant_velocity(cfg);
    const double speed = std::sqrt(U[0] * U[0] + U[1] * U[1] + U[2] * U[2]);
    double worst_r = 0.0, worst_c = 0.0;
    std::string detail_r, detail_c;
    bool missing = false;
    for (double t : ck.radius_times) {
      if (t > t_end * (1.0 + 1e-12)) continue;
      const InterfaceRow* ir = interface_at(r, t);
      if (!ir || ir->fit_radius <= 0.0) {
        missing = true;
        detail_r += " no single-component fit at t=" + num(t);
        continue;
      }
      const double exact = std::sqrt(std::max(0.0, r0 * r0 - shrink * t));
      const double er = std::abs(ir->fit_radius - exact) / exact;
      if (er >= worst_r) {
        worst_r = er;
        detail_r = "t=" + num(t) + " fit=" + num(ir->fit_radius) + " exact=" + num(exact);
      }
      if (ck.translation && t > 0.0) {
        const Point drift = periodic_delta(cfg.geometry.center, Point{ir->fit_cx, ir->fit_cy, ir->fit_cz}, cfg.dim);
        double err2 = 0.0;
        for (int k = 0; k < cfg.dim; ++k) err2 += std::pow(drift[k] - U[k] * t, 2);
        const double ec = std::sqrt(err2) / (speed * t);
        if (ec >= worst_c) {
          worst_c = ec;
          detail_c = "t=" + num(t) + " drift_x=" + num(drift[0]) +
                     " expected=" + num(U[0] * t);
        }
      }
    }
    if (ck.radius_law)
      r.checks.push_back(make_check("radius_law", true, !missing && worst_r <= ck.radius_tol, worst_r, ck.radius_tol,
                                    detail_r));
    if (ck.translation)
      r.checks.push_back(make_check("translation", true, !missing && worst_c <= ck.translation_tol, worst_c,
                                    ck.translation_tol, detail_c));
  }
  if (ck.dissipation) {
    const double v = r.steps > 0 ? max_increase : 0.0;
    r.checks.push_back(make_check("dissipation", true, v <= ck.dissipation_tol, v, ck.dissipation_tol,
                                  "largest step-to-step increase of mu"));
  }
  if (ck.growth) {
    const double v = r.steps > 0 ? growth_excess / mu0 : 0.0;
    r.checks.push_back(make_check("growth", true, v <= ck.growth_tol, v, ck.growth_tol,
                                  "max over t0<t1 of mu(t1)-mu(t0)-advection integral; relative to mu(0)"));
  }
  if (ck.discrepancy) {
    double worst = -std::numeric_limits<double>::infinity(), at = 0.0;
    for (const auto& row : r.measures)
      if (row.sup_xi_plus > worst) {
        worst = row.sup_xi_plus;
        at = row.t;
      }
    const double thr = 10.0 * std::pow(eps, -cfg.transport.beta);
    r.checks.push_back(make_check("discrepancy", true, worst <= thr, worst, thr, "sup xi_+ max at t=" + num(at)));
  }
  if (ck.bv) {
    double worst = -std::numeric_limits<double>::infinity(), at = 0.0;
    for (const auto& row : r.measures) {
      const double ex = row.tv_w - row.mu_total / r.sigma;
      if (ex > worst) {
        worst = ex;
        at = row.t;
      }
    }
    r.checks.push_back(make_check("bv", true, worst <= ck.bv_tol, worst, ck.bv_tol,
                                  "TV - mu/sigma max at t=" + num(at)));
  }
  if (ck.bv_perimeter) {
    const double v = std::abs(r.measures.front().tv_w - r.perimeter) / r.perimeter;
    r.checks.push_back(make_check("bv_perimeter", true, v <= ck.bv_perimeter_tol, v, ck.bv_perimeter_tol,
                                  "TV(0)=" + num(r.measures.front().tv_w) + " Per=" + num(r.perimeter)));
  }
  if (ck.energy_concentration) {
    const double target = r.sigma * r.perimeter;
    const double v = std::abs(r.measures.front().mu_total - target) / target;
    r.checks.push_back(make_check("energy_concentration", true, v <= ck.energy_tol, v, ck.energy_tol,
                                  "mu(0)=" + num(r.measures.front().mu_total) +
                                      " sigma*Per=" + num(target)));
  }
  if (ck.final_energy_fraction > 0.0) {
    const double v = r.measures.back().mu_total / r.measures.front().mu_total;
    r.checks.push_back(make_check("final_energy_fraction", false, v <= ck.final_energy_fraction, v,
                                  ck.final_energy_fraction, "mu(t_end) / mu(0)"));
  }
  if (ck.final_components >= 0) {
    const InterfaceRow* first = r.interfaces.empty() ? nullptr : &r.interfaces.front();
    const InterfaceRow* last = r.interfaces.empty() ? nullptr : &r.interfaces.back();
    const int got = last ? last->components : -1;
    r.checks.push_back(make_check("final_components", true, got == ck.final_components, got, ck.final_components,
                                  "interface components " + std::to_string(first ? first->components : -1) +
                                      " at t=0 and " + std::to_string(got) + " at t_end"));
  }
  if (ck.interface_measure) {
    const InterfaceRow* ir = interface_at(r, 0.0);
    const double v = ir ? std::abs(ir->measure - r.perimeter) / r.perimeter : std::numeric_limits<double>::infinity();
    r.checks.push_back(make_check("interface_measure", true, v <= ck.interface_tol, v, ck.interface_tol,
                                  "extracted measure at t=0 against the analytic boundary measure"));
  }
  if (ck.theta) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    bool any = false;
    for (const auto& ir : r.interfaces) {
      if (ir.t > ck.theta_until * (1.0 + 1e-12) || ir.fit_radius <= 0.0 || !theta_ok) continue;
      any = true;
      lo = std::min(lo, ir.theta_min);
      hi = std::max(hi, ir.theta_max);
    }
    const double dev = any ? std::max(ck.theta_lo - lo, hi - ck.theta_hi) : std::numeric_limits<double>::infinity();
    r.checks.push_back(make_check("theta", false, any && lo >= ck.theta_lo && hi <= ck.theta_hi, any ? hi : 0.0,
                                  ck.theta_hi,
                                  any ? "theta range [" + num(lo) + " " + num(hi) + "] excess " +
                                            num(dev)
                                      : "no theta samples"));
  }
  if (ck.monotonicity) {
    for (const auto& a : r.audits) {
      // without transport the bare tolerance is the budget
      const double budget = u.is_zero() ? a.tolerance : a.transport_term + a.tail_term + a.tolerance;
      r.checks.push_back(make_check("monotonicity", true, a.delta_m <= budget, a.delta_m, budget,
                                    "window [" + num(a.t0) + " " + num(a.t1) +
                                        "] transport=" + num(a.transport_term) +
                                        " tail=" + num(a.tail_term) +
                                        " discrepancy=" + num(a.discrepancy_term)));
    }
  }
  if (ck.plane_drift) {
    r.checks.push_back(make_check("plane_drift", true, sup_abs_drift <= ck.plane_drift_tol, sup_abs_drift,
                                  ck.plane_drift_tol,
                                  "sup |phi(t)-phi(0)| over t<=" + num(ck.plane_drift_t1)));
  }
  if (ck.plane_translation) {
    const double shift = plane_shift_err.empty() ? std::numeric_limits<double>::infinity() : plane_shift_err.back();
    const double shape = plane_shape_err.empty() ? std::numeric_limits<double>::infinity() : plane_shape_err.back();
    const double tol_shift = ck.plane_shift_tol_h * grid.h();
    r.checks.push_back(make_check("plane_translation", true, shift <= tol_shift, shift, tol_shift,
                                  "zero-set offset at t_end"));
    r.checks.push_back(make_check("plane_shape", true, shape <= ck.plane_shape_tol, shape, ck.plane_shape_tol,
                                  "sup |phi - shifted initial profile| at t_end"));
  }

  r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - clock0).count();
  if (!cfg.output_dir.empty()) write_outputs(cfg, r, source_text(cfg));
  return r;
}

namespace {

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_double(v[i]);
  return out;
}

std::string join_points(const std::vector<Point>& v, int dim) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += "; ";
    for (int k = 0; k < dim; ++k) out += (k ? ", " : "") + format_double(v[i][k]);
  }
  return out;
}

// Effective configuration; scenario_from_config reads it back to the same values.
std::string source_text(const ScenarioConfig& s) {
  Config c;
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  auto d = [](double v) { return format_double(v); };
  c.set("name", s.name);
  c.set("grid.dim", std::to_string(s.dim));
  c.set("grid.resolution", std::to_string(s.resolution));
  c.set("well", s.well);
  c.set("epsilon", s.epsilon);
  const auto& g = s.geometry;
  c.set("geometry.kind", g.kind);
  c.set("geometry.center", join_points({g.center}, s.dim));
  c.set("geometry.radius", d(g.radius));
  c.set("geometry.center2", join_points({g.center2}, s.dim));
  c.set("geometry.radius2", d(g.radius2));
  c.set("geometry.r_in", d(g.r_in));
  c.set("geometry.r_out", d(g.r_out));
  c.set("geometry.base", d(g.base));
  c.set("geometry.heights", join(g.heights));
  c.set("geometry.r_trunc", d(g.r_trunc));
  const auto& t = s.transport;
  c.set("transport.kind", t.kind);
  c.set("transport.params", join(t.params));
  if (!t.files.empty()) {
    std::string f;
    for (std::size_t i = 0; i < t.files.size(); ++i) f += (i ? ", " : "") + t.files[i];
    c.set("transport.files", f);
  }
  c.set("transport.p", d(t.p));
  c.set("transport.q", d(t.q));
  c.set("transport.beta", d(t.beta));
  c.set("solver.scheme", s.solver.scheme == Scheme::Explicit ? "explicit" : "semi_implicit");
  c.set("solver.dt", s.solver.dt > 0.0 ? d(s.solver.dt) : "auto");
  c.set("solver.t_end", d(s.solver.t_end));
  c.set("solver.cfl_safety", d(s.solver.cfl_safety));
  c.set("solver.upwind", b(s.solver.upwind));
  c.set("solver.snapshot_times", join(s.snapshot_times));
  const auto& dg = s.diagnostics;
  c.set("diagnostics.times", join(dg.times));
  c.set("diagnostics.poles", dg.pole_auto ? "auto" : join_points(dg.poles, s.dim));
  c.set("diagnostics.pole_time", d(dg.pole_time));
  if (dg.audit_t0 >= 0.0) c.set("diagnostics.audit_window", join({dg.audit_t0, dg.audit_t1}));
  c.set("diagnostics.audit_tolerance", d(dg.audit_tolerance));
  c.set("diagnostics.tail_constant", d(dg.tail_constant));
  c.set("diagnostics.density_radii", join(dg.density_radii));
  c.set("diagnostics.density_centers", join_points(dg.density_centers, s.dim));
  c.set("diagnostics.density_probe_radii", join(dg.density_probe_radii));
  c.set("diagnostics.density_random", std::to_string(dg.density_random));
  {
    std::string f;
    for (std::size_t i = 0; i < dg.test_functions.size(); ++i) f += (i ? ", " : "") + dg.test_functions[i];
    c.set("diagnostics.test_functions", f);
  }
  c.set("diagnostics.brakke", b(dg.brakke));
  c.set("diagnostics.theta_radius_eps", d(dg.theta_radius_eps));
  c.set("diagnostics.theta_probes", std::to_string(dg.theta_probes));
  c.set("diagnostics.dump_fields", b(dg.dump_fields));
  c.set("diagnostics.interface", b(dg.interface));
  const auto& k = s.checks;
  c.set("checks.radius_law", b(k.radius_law));
  c.set("checks.radius_times", join(k.radius_times));
  c.set("checks.radius_tol", d(k.radius_tol));
  c.set("checks.translation", b(k.translation));
  c.set("checks.translation_tol", d(k.translation_tol));
  c.set("checks.dissipation", b(k.dissipation));
  c.set("checks.dissipation_tol", d(k.dissipation_tol));
  c.set("checks.growth", b(k.growth));
  c.set("checks.growth_tol", d(k.growth_tol));
  c.set("checks.discrepancy", b(k.discrepancy));
  c.set("checks.bv", b(k.bv));
  c.set("checks.bv_tol", d(k.bv_tol));
  c.set("checks.bv_perimeter", b(k.bv_perimeter));
  c.set("checks.bv_perimeter_tol", d(k.bv_perimeter_tol));
  c.set("checks.theta", b(k.theta));
  c.set("checks.theta_until", d(k.theta_until));
  c.set("checks.theta_range", join({k.theta_lo, k.theta_hi}));
  c.set("checks.monotonicity", b(k.monotonicity));
  c.set("checks.energy_concentration", b(k.energy_concentration));
  c.set("checks.energy_tol", d(k.energy_tol));
  c.set("checks.final_energy_fraction", d(k.final_energy_fraction));
  c.set("checks.final_components", std::to_string(k.final_components));
  c.set("checks.interface_measure", b(k.interface_measure));
  c.set("checks.interface_tol", d(k.interface_tol));
  c.set("checks.plane_drift", b(k.plane_drift));
  c.set("checks.plane_drift_t1", d(k.plane_drift_t1));
  c.set("checks.plane_drift_tol", d(k.plane_drift_tol));
  c.set("checks.plane_translation", b(k.plane_translation));
  c.set("checks.plane_shift_tol_h", d(k.plane_shift_tol_h));
  c.set("checks.plane_shape_tol", d(k.plane_shape_tol));
  if (!s.sweep.epsilons.empty()) {
    std::string f;
    for (std::size_t i = 0; i < s.sweep.epsilons.size(); ++i) f += (i ? ", " : "") + s.sweep.epsilons[i];
    c.set("sweep.epsilons", f);
  }
  if (!s.sweep.resolutions.empty()) {
    std::vector<double> rs(s.sweep.resolutions.begin(), s.sweep.resolutions.end());
    c.set("sweep.resolutions", join(rs));
  }
  c.set("sweep.t_end", d(s.sweep.t_end));
  c.set("sweep.xi_time", d(s.sweep.xi_time));
  c.set("sweep.d_tol", d(s.sweep.d_tol));
  return c.dump();
}

double log_order(double e_prev, double e_cur, double eps_prev, double eps_cur) {
  if (!(e_prev > 0.0 && e_cur > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::log(e_prev / e_cur) / std::log(eps_prev / eps_cur);
}

}  // namespace

SweepReport run_sweep(const ScenarioConfig& cfg) {
  const auto& sw = cfg.sweep;
  if (sw.epsilons.size() < 3) invalid("sweep.epsilons: need at least 3 values");
  if (!sw.resolutions.empty() && sw.resolutions.size() != 1 && sw.resolutions.size() != sw.epsilons.size())
    invalid("sweep.resolutions: give one value or one per epsilon");

  struct Entry {
    double eps;
    int res;
    std::string text;
  };
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < sw.epsilons.size(); ++i) {
    const int res = sw.resolutions.empty() ? cfg.resolution
                                           : sw.resolutions[sw.resolutions.size() == 1 ? 0 : i];
    const double eps = parse_length(sw.epsilons[i], 1.0 / res);
    const double ratio = eps * res;
    if (!(ratio >= 2.0 - 1e-9 && ratio <= 8.0 + 1e-9)) {
      std::ostringstream os;
      os << "sweep.epsilons[" << i << "]: eps/h = " << ratio << " outside [2, 8]";
      invalid(os.str());
    }
    entries.push_back({eps, res, sw.epsilons[i]});
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.eps > b.eps; });

  SweepReport rep;
  rep.name = cfg.name;
  std::vector<std::vector<MeasureRow>> all_measures;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    ScenarioConfig c = cfg;
    c.resolution = entries[i].res;
    c.epsilon = entries[i].text;
    if (sw.t_end >= 0.0) c.solver.t_end = sw.t_end;
    auto clip = [&](std::vector<double>& v) {
      v.erase(std::remove_if(v.begin(), v.end(), [&](double t) { return t > c.solver.t_end * (1.0 + 1e-12); }),
              v.end());
    };
    clip(c.diagnostics.times);
    clip(c.snapshot_times);
    c.diagnostics.dump_fields = false;
    if (c.diagnostics.pole_time > 0.0 && c.diagnostics.audit_t1 > c.solver.t_end) {
      c.diagnostics.audit_t0 = -1.0;
      c.checks.monotonicity = false;
    }
    if (!cfg.output_dir.empty())
      c.output_dir = (fs::path(cfg.output_dir) / ("sweep_" + std::to_string(i) + "_res" + std::to_string(c.resolution)))
                         .string();
    const DiagnosticsReport r = run_scenario(c);

    ConvergenceRow row;
    row.epsilon = r.epsilon;
    row.resolution = c.resolution;
    row.eps_over_h = r.epsilon * c.resolution;
    row.energy_error = std::abs(r.measures.front().mu_total - r.sigma * r.perimeter) / (r.sigma * r.perimeter);
    if (const CheckResult* rl = r.check("radius_law"); rl && c.checks.radius_law) {
      // error at the last radius time inside the run
      double last = -1.0;
      for (double t : c.checks.radius_times)
        if (t <= c.solver.t_end * (1.0 + 1e-12)) last = t;
      const InterfaceRow* ir = last >= 0.0 ? interface_at(r, last) : nullptr;
      if (ir && ir->fit_radius > 0.0) {
        const double exact = std::sqrt(c.geometry.radius * c.geometry.radius - 2.0 * (c.dim - 1) * last);
        row.interface_error = std::abs(ir->fit_radius - exact) / exact;
      } else {
        row.interface_error = std::numeric_limits<double>::quiet_NaN();
      }
    } else {
      const InterfaceRow* ir = interface_at(r, 0.0);
      row.interface_error =
          ir ? std::abs(ir->measure - r.perimeter) / r.perimeter : std::numeric_limits<double>::quiet_NaN();
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& m : r.measures)
      if (std::abs(m.t - sw.xi_time) < best) {
        best = std::abs(m.t - sw.xi_time);
        row.xi_l1 = m.xi_l1;
      }
    for (const auto& m : r.measures) row.d_max = std::max(row.d_max, m.d_of_t);
    if (i > 0) {
      const auto& p = rep.rows.back();
      row.energy_order = log_order(p.energy_error, row.energy_error, p.epsilon, row.epsilon);
      row.xi_order = log_order(p.xi_l1, row.xi_l1, p.epsilon, row.epsilon);
    } else {
      row.energy_order = row.xi_order = std::numeric_limits<double>::quiet_NaN();
    }
    rep.rows.push_back(row);
    all_measures.push_back(r.measures);
  }

  auto strictly_decreasing = [&](auto get, double& worst_ratio) {
    bool ok = true;
    worst_ratio = 0.0;
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
      const double a = get(rep.rows[i - 1]), b = get(rep.rows[i]);
      worst_ratio = std::max(worst_ratio, b / a);
      if (!(b < a)) ok = false;
    }
    return ok;
  };
  double ratio_e = 0.0, ratio_x = 0.0;
  const bool dec_e = strictly_decreasing([](const ConvergenceRow& r) { return r.energy_error; }, ratio_e);
  const bool dec_x = strictly_decreasing([](const ConvergenceRow& r) { return r.xi_l1; }, ratio_x);
  rep.checks.push_back(make_check("energy_error_decreasing", true, dec_e, ratio_e, 1.0,
                                  "largest ratio of consecutive energy errors"));
  rep.checks.push_back(make_check("xi_decreasing", false, dec_x, ratio_x, 1.0,
                                  "largest ratio of consecutive int |xi| values"));

  double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
  for (const auto& row : rep.rows) {
    dmin = std::min(dmin, row.d_max);
    dmax = std::max(dmax, row.d_max);
  }
  const double spread = (dmax - dmin) / dmin;
  rep.checks.push_back(make_check("density_uniformity", true, spread < sw.d_tol, spread, sw.d_tol,
                                  "spread of max_t D(t) across the sweep"));
  // same statistic per shared diagnostic time
  double per_time = 0.0, at = 0.0;
  for (const auto& m0 : all_measures.front()) {
    double lo = m0.d_of_t, hi = m0.d_of_t;
    bool shared = true;
    for (std::size_t k = 1; k < all_measures.size(); ++k) {
      const auto it = std::find_if(all_measures[k].begin(), all_measures[k].end(),
                                   [&](const MeasureRow& m) { return same_time(m.t, m0.t); });
      if (it == all_measures[k].end()) {
        shared = false;
        break;
      }
      lo = std::min(lo, it->d_of_t);
      hi = std::max(hi, it->d_of_t);
    }
    if (shared && (hi - lo) / lo > per_time) {
      per_time = (hi - lo) / lo;
      at = m0.t;
    }
  }
  rep.checks.push_back(make_check("density_per_time", false, per_time < sw.d_tol, per_time, sw.d_tol,
                                  "largest spread of D(t) at a shared time t=" + num(at)));

  if (!cfg.output_dir.empty()) {
    fs::create_directories(cfg.output_dir);
    CsvTable t;
    t.header = {"epsilon", "resolution", "eps_over_h", "energy_error", "interface_error", "xi_l1", "D_max",
                "energy_order", "xi_order"};
    for (const auto& row : rep.rows)
      t.add_row({row.epsilon, static_cast<double>(row.resolution), row.eps_over_h, row.energy_error,
                 row.interface_error, row.xi_l1, row.d_max, row.energy_order, row.xi_order});
    t.write((fs::path(cfg.output_dir) / "convergence.csv").string());
    CsvTable c;
    c.header = {"name", "binding", "pass", "value", "threshold", "detail"};
    for (const auto& ch : rep.checks)
      c.rows.push_back({ch.name, ch.binding ? "1" : "0", ch.pass ? "1" : "0", cell(ch.value), cell(ch.threshold),
                        ch.detail});
    c.write((fs::path(cfg.output_dir) / "checks.csv").string());
    write_text(fs::path(cfg.output_dir) / "summary.txt", render_report(cfg.output_dir));
  }
  return rep;
}

std::string render_report(const std::string& dir, bool* all_pass) {
  const fs::path p(dir);
  if (!fs::is_directory(p)) throw Error(ErrorCode::IoError, "not a directory: " + dir);
  std::ostringstream out;
  char buf[256];

  if (fs::exists(p / "info.conf")) {
    const Config info = Config::load((p / "info.conf").string());
    out << "scenario " << info.get("name") << "\n";
    std::snprintf(buf, sizeof buf, "  dim %s  resolution %s  eps %.6g (eps/h %.3g)  sigma %.10g\n",
                  info.get("dim").c_str(), info.get("resolution").c_str(), info.get_double("epsilon", 0.0),
                  info.get_double("epsilon", 0.0) * info.get_double("resolution", 0.0), info.get_double("sigma", 0.0));
    out << buf;
    std::snprintf(buf, sizeof buf, "  dt %.6g  steps %s  perimeter %.8g\n", info.get_double("dt", 0.0),
                  info.get("steps").c_str(), info.get_double("perimeter", 0.0));
    out << buf;
    if (info.get_double("mollified_sup", 0.0) > 0.0) {
      std::snprintf(buf, sizeof buf, "  transport: sup|u_eps| %.6g  sup|grad u_eps| %.6g  W^{1,p} norm %.6g  p_hat %.6g\n",
                    info.get_double("mollified_sup", 0.0), info.get_double("mollified_sup_grad", 0.0),
                    info.get_double("sobolev_norm", 0.0), info.get_double("p_hat", 0.0));
      out << buf;
    }
    out << "\n";
  }
  if (fs::exists(p / "measures.csv")) {
    const CsvTable m = CsvTable::read((p / "measures.csv").string());
    out << "          t        mu(Omega)            D    sup xi_+     int|xi|          TV      brakke\n";
    for (std::size_t i = 0; i < m.rows.size(); ++i) {
      std::snprintf(buf, sizeof buf, "  %9.6g  %15.10g  %11.6g  %10.4g  %10.4g  %10.6g  %10.3g\n", m.number(i, "t"),
                    m.number(i, "mu_total"), m.number(i, "D"), m.number(i, "sup_xi_plus"), m.number(i, "xi_l1"),
                    m.number(i, "tv_w"), m.number(i, "brakke_residual"));
      out << buf;
    }
    out << "\n";
  }
  if (fs::exists(p / "convergence.csv")) {
    const CsvTable t = CsvTable::read((p / "convergence.csv").string());
    out << "convergence\n        eps    res  eps/h   energy err  interface err     int|xi|       D_max  order(E)  order(xi)\n";
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      std::snprintf(buf, sizeof buf, "  %9.6g  %5.0f  %5.2f  %11.4e  %13.4e  %10.4e  %10.6g  %8.3f  %9.3f\n",
                    t.number(i, "epsilon"), t.number(i, "resolution"), t.number(i, "eps_over_h"),
                    t.number(i, "energy_error"), t.number(i, "interface_error"), t.number(i, "xi_l1"),
                    t.number(i, "D_max"), t.number(i, "energy_order"), t.number(i, "xi_order"));
      out << buf;
    }
    out << "\n";
  }
  bool pass = true;
  if (fs::exists(p / "checks.csv")) {
    const CsvTable c = CsvTable::read((p / "checks.csv").string());
    out << "checks\n";
    for (std::size_t i = 0; i < c.rows.size(); ++i) {
      const bool binding = c.rows[i][c.column("binding")] == "1";
      const bool ok = c.rows[i][c.column("pass")] == "1";
      if (binding && !ok) pass = false;
      const char* verdict = ok ? "PASS" : (binding ? "FAIL" : "WARN");
      std::snprintf(buf, sizeof buf, "  %-4s %-24s value %-12.6g threshold %-12.6g %s", verdict,
                    c.rows[i][c.column("name")].c_str(), c.number(i, "value"), c.number(i, "threshold"),
                    binding ? "" : "(advisory) ");
      out << buf << c.rows[i][c.column("detail")] << "\n";
    }
    out << "\nverdict: " << (pass ? "PASS" : "FAIL") << "\n";
  } else {
    throw Error(ErrorCode::IoError, "no checks.csv in " + dir);
  }
  if (all_pass) *all_pass = pass;
  return out.str();
}

}  // namespace mct
