#include "mct/potential.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mct/errors.hpp"

namespace mct {

namespace {

constexpr double kScanStep = 1e-4;

double integrate(const std::function<double(double)>& f, double a, double b) {
  if (a == b) return 0.0;
  double err = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-11, &err);
  if (!std::isfinite(v) || err > 1e-10 * std::max(1.0, std::abs(v))) {
    throw Error(ErrorCode::QuadratureFailure,
                "adaptive quadrature did not reach 1e-10 on [" + std::to_string(a) + ", " +
                    std::to_string(b) + "] (estimate " + std::to_string(err) + ")");
  }
  return v;
}

double sqrt2w(const DoubleWell& w, double s) { return std::sqrt(2.0 * std::max(0.0, w.value(s))); }

// Quintic Hermite interpolation on [0, 1] given values, first and second
// derivatives (already scaled by the interval length) at both ends.
struct Quintic {
  double value, slope;
};

Quintic quintic_hermite(double t, double p0, double m0, double a0, double p1, double m1, double a1) {
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const double h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
  const double h1 = t - 6 * t3 + 8 * t4 - 3 * t5;
  const double h2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
  const double h3 = 0.5 * (t3 - 2 * t4 + t5);
  const double h4 = -4 * t3 + 7 * t4 - 3 * t5;
  const double h5 = 10 * t3 - 15 * t4 + 6 * t5;
  const double d0 = -30 * t2 + 60 * t3 - 30 * t4;
  const double d1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
  const double d2 = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4);
  const double d3 = 0.5 * (3 * t2 - 8 * t3 + 5 * t4);
  const double d4 = -12 * t2 + 28 * t3 - 15 * t4;
  const double d5 = 30 * t2 - 60 * t3 + 30 * t4;
  return {h0 * p0 + h1 * m0 + h2 * a0 + h3 * a1 + h4 * m1 + h5 * p1,
          d0 * p0 + d1 * m0 + d2 * a0 + d3 * a1 + d4 * m1 + d5 * p1};
}

// Clamped cubic spline with zero end slopes; used for tabulated wells.
struct Spline {
  std::vector<double> x, y, m;  // m = second derivatives

  Spline(std::vector<double> xs, std::vector<double> ys) : x(std::move(xs)), y(std::move(ys)) {
    const std::size_t n = x.size();
    m.assign(n, 0.0);
    std::vector<double> a(n), b(n), c(n), r(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == 0) {
        const double h = x[1] - x[0];
        a[i] = 0;
        b[i] = h / 3;
        c[i] = h / 6;
        r[i] = (y[1] - y[0]) / h;  // clamped slope 0
      } else if (i == n - 1) {
        const double h = x[n - 1] - x[n - 2];
        a[i] = h / 6;
        b[i] = h / 3;
        c[i] = 0;
        r[i] = -(y[n - 1] - y[n - 2]) / h;
      } else {
        const double h0 = x[i] - x[i - 1], h1 = x[i + 1] - x[i];
        a[i] = h0 / 6;
        b[i] = (h0 + h1) / 3;
        c[i] = h1 / 6;
        r[i] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
      }
    }
    for (std::size_t i = 1; i < n; ++i) {
      const double w = a[i] / b[i - 1];
      b[i] -= w * c[i - 1];
      r[i] -= w * r[i - 1];
    }
    m[n - 1] = r[n - 1] / b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) m[i] = (r[i] - c[i] * m[i + 1]) / b[i];
  }

  std::size_t segment(double s) const {
    auto it = std::upper_bound(x.begin(), x.end(), s);
    std::size_t k = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
    return std::min(k, x.size() - 2);
  }

  double eval(double s, int deriv) const {
    const std::size_t k = segment(s);
    const double h = x[k + 1] - x[k];
    const double A = (x[k + 1] - s) / h, B = (s - x[k]) / h;
    switch (deriv) {
      case 0:
        return A * y[k] + B * y[k + 1] + ((A * A * A - A) * m[k] + (B * B * B - B) * m[k + 1]) * h * h / 6;
      case 1:
        return (y[k + 1] - y[k]) / h - (3 * A * A - 1) / 6 * h * m[k] + (3 * B * B - 1) / 6 * h * m[k + 1];
      default:
        return A * m[k] + B * m[k + 1];
    }
  }
};

}  // namespace

DoubleWell::DoubleWell(std::string name, Fn value, Fn d1, Fn d2)
    : name_(std::move(name)), value_(std::move(value)), d1_(std::move(d1)), d2_(std::move(d2)) {
  validate(true);
}

DoubleWell::DoubleWell(std::string name, Fn value, Fn d1, Fn d2, double alpha, double kappa)
    : name_(std::move(name)),
      value_(std::move(value)),
      d1_(std::move(d1)),
      d2_(std::move(d2)),
      alpha_(alpha),
      kappa_(kappa) {
  validate(false);
}

void DoubleWell::validate(bool scan_alpha) {
  auto reject = [&](const std::string& why) {
    throw Error(ErrorCode::InvalidWell, "well '" + name_ + "': " + why);
  };
  for (double s : {-1.0, 1.0}) {
    if (std::abs(value_(s)) > 1e-12) reject("W(+-1) must vanish");
    if (std::abs(d1_(s)) > 1e-12) reject("W'(+-1) must vanish");
  }
  const int n = static_cast<int>(std::lround(2.0 / kScanStep));
  // W' > 0 on (-1, gamma), W' < 0 on (gamma, 1): exactly one sign change.
  d2_max_ = 0.0;
  int first_nonpos = -1;
  double prev_d = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double s = -1.0 + k * kScanStep;
    d2_max_ = std::max(d2_max_, std::abs(d2_(s)));
    if (k == 0 || k == n) continue;
    if (value_(s) <= 0.0) reject("W must be positive inside (-1, 1)");
    const double d = d1_(s);
    if (first_nonpos < 0) {
      if (d <= 0.0) {
        if (k == 1) reject("W' must be positive right of -1");
        first_nonpos = k;
        gamma_ = d == 0.0 ? s : s - kScanStep * d / (d - prev_d);
      }
    } else if (d >= 0.0) {
      reject("W' must change sign exactly once, from + to -");
    }
    prev_d = d;
  }
  if (first_nonpos < 0) reject("W' has no interior sign change");

  if (scan_alpha) {
    // smallest alpha0 with W'' > 0 on |s| >= alpha0, then halfway to 1
    int k0 = n / 2;
    for (int k = n / 2; k <= n; ++k) {
      const double s = k * kScanStep - 1.0;
      if (d2_(s) <= 0.0 || d2_(-s) <= 0.0) k0 = k + 1;
    }
    if (k0 >= n) reject("no convexity region near +-1 (alpha/kappa scan failed)");
    const int ka = k0 + (n - k0) / 2;
    alpha_ = ka * kScanStep - 1.0;
  }
  if (!(alpha_ > 0.0 && alpha_ < 1.0)) reject("alpha must lie in (0, 1)");
  double kmin = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= n; ++k) {
    const double s = -1.0 + k * kScanStep;
    if (std::abs(s) + 1e-12 >= alpha_) kmin = std::min(kmin, d2_(s));
  }
  if (scan_alpha) kappa_ = kmin;
  if (!(kappa_ > 0.0) || kmin < kappa_ * (1.0 - 1e-12)) reject("W'' >= kappa > 0 fails on |s| >= alpha");
}

DoubleWell DoubleWell::scaled(double c) const {
  if (!(c > 0)) throw Error(ErrorCode::InvalidWell, "scale factor must be positive");
  auto v = value_, a = d1_, b = d2_;
  DoubleWell w(name_ + "*" + std::to_string(c), [v, c](double s) { return c * v(s); },
               [a, c](double s) { return c * a(s); }, [b, c](double s) { return c * b(s); },
               alpha_, kappa_ * c);
  w.quartic_scale_ = quartic_scale_ * c;
  return w;
}

DoubleWell make_quartic_well() {
  DoubleWell w(
      "quartic", [](double s) { return (1 - s * s) * (1 - s * s); },
      [](double s) { return -4 * s * (1 - s * s); }, [](double s) { return -4 + 12 * s * s; }, 0.9,
      -4 + 12 * 0.81);
  w.quartic_scale_ = 1.0;
  return w;
}

DoubleWell make_perturbed_quartic_well(double a) {
  return DoubleWell(
      "perturbed_quartic",
      [a](double s) {
        const double q = 1 - s * s;
        return q * q * (1 + a * s * s);
      },
      [a](double s) {
        const double q = 1 - s * s;
        return -4 * s * q * (1 + a * s * s) + 2 * a * s * q * q;
      },
      [a](double s) {
        const double s2 = s * s;
        // expand (1 - 2 s^2 + s^4)(1 + a s^2) = 1 + (a-2) s^2 + (1-2a) s^4 + a s^6
        return 2 * (a - 2) + 12 * (1 - 2 * a) * s2 + 30 * a * s2 * s2;
      });
}

DoubleWell make_table_well(const std::vector<double>& s, const std::vector<double>& w,
                           std::string name) {
  if (s.size() != w.size() || s.size() < 5)
    throw Error(ErrorCode::InvalidWell, "table well needs >= 5 matching (s, W) samples");
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!(s[i] > s[i - 1])) throw Error(ErrorCode::InvalidWell, "table abscissae must increase");
  if (std::abs(s.front() + 1) > 1e-12 || std::abs(s.back() - 1) > 1e-12)
    throw Error(ErrorCode::InvalidWell, "table must span exactly [-1, 1]");
  auto sp = std::make_shared<Spline>(s, w);
  sp->x.front() = -1.0;
  sp->x.back() = 1.0;
  sp->y.front() = 0.0;
  sp->y.back() = 0.0;
  *sp = Spline(sp->x, sp->y);
  const double cm = sp->eval(-1.0, 2), cp = sp->eval(1.0, 2);
  auto value = [sp, cm, cp](double x) {
    if (x > 1) return 0.5 * cp * (x - 1) * (x - 1);
    if (x < -1) return 0.5 * cm * (x + 1) * (x + 1);
    return sp->eval(x, 0);
  };
  auto d1 = [sp, cm, cp](double x) {
    if (x >= 1) return cp * (x - 1);
    if (x <= -1) return cm * (x + 1);
    return sp->eval(x, 1);
  };
  auto d2 = [sp, cm, cp](double x) {
    if (x > 1) return cp;
    if (x < -1) return cm;
    return sp->eval(x, 2);
  };
  return DoubleWell(std::move(name), value, d1, d2);
}

DoubleWell load_table_well(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open well table '" + path + "'");
  std::vector<double> s, w;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double a, b;
    if (ss >> a >> b) {
      s.push_back(a);
      w.push_back(b);
    }
  }
  return make_table_well(s, w, "table:" + path);
}

DoubleWell well_by_name(const std::string& name) {
  if (name == "quartic") return make_quartic_well();
  if (name == "perturbed_quartic") return make_perturbed_quartic_well();
  if (name.rfind("table:", 0) == 0) return load_table_well(name.substr(6));
  throw Error(ErrorCode::InvalidWell, "unknown well '" + name + "'");
}

double surface_tension(const DoubleWell& well) {
  return integrate([&](double s) { return sqrt2w(well, s); }, -1.0, 1.0);
}

// ---------------------------------------------------------------------------

Profile standing_wave(const DoubleWell& well) {
  Profile p;
  p.well_ = std::make_shared<const DoubleWell>(well);
  p.sigma_ = surface_tension(well);
  const DoubleWell& w = *p.well_;

  if (w.quartic_scale() > 0.0) {
    p.closed_form_ = true;
    p.rate_ = std::sqrt(2.0 * w.quartic_scale());
  } else {
    constexpr double L = 12.0;
    constexpr double dx = 1e-3;
    const int half = static_cast<int>(std::lround(L / dx));
    p.table_half_width_ = L;
    p.table_dx_ = dx;
    p.psi_nodes_.assign(2 * half + 1, 0.0);
    auto f = [&](double v) { return sqrt2w(w, v); };
    auto rk4 = [&](double v, double hstep) {
      const double k1 = f(v);
      const double k2 = f(v + 0.5 * hstep * k1);
      const double k3 = f(v + 0.5 * hstep * k2);
      const double k4 = f(v + hstep * k3);
      return v + hstep / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    };
    for (int dir : {1, -1}) {
      double v = 0.0;
      for (int k = 1; k <= half; ++k) {
        const double hstep = dir * dx;
        const double coarse = rk4(v, hstep);
        const double fine = rk4(rk4(v, 0.5 * hstep), 0.5 * hstep);
        if (!std::isfinite(fine) || std::abs(fine - coarse) > 1e-12 || std::abs(fine) >= 1.0 ||
            dir * (fine - v) < 0.0) {
          throw Error(ErrorCode::IntegrationFailure,
                      "standing-wave ODE lost accuracy at x = " + std::to_string(dir * k * dx));
        }
        v = fine;
        p.psi_nodes_[half + dir * k] = v;
      }
    }
    p.tail_rate_plus_ = std::sqrt(std::max(w.d2(1.0), 1e-12));
    p.tail_rate_minus_ = std::sqrt(std::max(w.d2(-1.0), 1e-12));
    p.tail_c_plus_ = 1.0 - p.psi_nodes_.back();
    p.tail_c_minus_ = 1.0 + p.psi_nodes_.front();

    // Phi table: cumulative integrals of sqrt(2W) between nodes
    constexpr double ds = 1e-3;
    const int m = static_cast<int>(std::lround(2.0 / ds));
    p.phi_ds_ = ds;
    p.phi_nodes_.assign(m + 1, 0.0);
    double acc = 0.0;
    for (int k = 1; k <= m; ++k) {
      const double a = -1.0 + (k - 1) * ds, b = -1.0 + k * ds;
      acc += integrate([&](double s) { return sqrt2w(w, s); }, a, b);
      p.phi_nodes_[k] = acc / p.sigma_;
    }
    p.phi_nodes_.back() = 1.0;
  }

  const double res = p.equipartition_residual();
  if (!(res <= 1e-10)) {
    throw Error(ErrorCode::IntegrationFailure,
                "equipartition residual " + std::to_string(res) + " exceeds 1e-10");
  }
  return p;
}

double Profile::psi(double x) const {
  if (closed_form_) return std::tanh(rate_ * x);
  const double L = table_half_width_;
  if (x >= L) return 1.0 - tail_c_plus_ * std::exp(-tail_rate_plus_ * (x - L));
  if (x <= -L) return -1.0 + tail_c_minus_ * std::exp(tail_rate_minus_ * (x + L));
  const double u = (x + L) / table_dx_;
  std::size_t k = std::min(static_cast<std::size_t>(u), psi_nodes_.size() - 2);
  const double t = u - static_cast<double>(k);
  const DoubleWell& w = *well_;
  const double p0 = psi_nodes_[k], p1 = psi_nodes_[k + 1];
  const double h = table_dx_;
  return quintic_hermite(t, p0, h * sqrt2w(w, p0), h * h * w.d1(p0), p1, h * sqrt2w(w, p1),
                         h * h * w.d1(p1))
      .value;
}

double Profile::dpsi(double x) const {
  if (closed_form_) {
    const double th = std::tanh(rate_ * x);
    return rate_ * (1.0 - th * th);
  }
  const double L = table_half_width_;
  if (x >= L) return tail_rate_plus_ * tail_c_plus_ * std::exp(-tail_rate_plus_ * (x - L));
  if (x <= -L) return tail_rate_minus_ * tail_c_minus_ * std::exp(tail_rate_minus_ * (x + L));
  const double u = (x + L) / table_dx_;
  std::size_t k = std::min(static_cast<std::size_t>(u), psi_nodes_.size() - 2);
  const double t = u - static_cast<double>(k);
  const DoubleWell& w = *well_;
  const double p0 = psi_nodes_[k], p1 = psi_nodes_[k + 1];
  const double h = table_dx_;
  return quintic_hermite(t, p0, h * sqrt2w(w, p0), h * h * w.d1(p0), p1, h * sqrt2w(w, p1),
                         h * h * w.d1(p1))
             .slope /
         h;
}

double Profile::psi_inverse(double v) const {
  if (closed_form_) {
    const double c = std::clamp(v, -1.0 + 1e-16, 1.0 - 1e-16);
    return std::atanh(c) / rate_;
  }
  double lo = -table_half_width_, hi = table_half_width_;
  if (v <= psi(lo)) return lo;
  if (v >= psi(hi)) return hi;
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    (psi(mid) < v ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double Profile::phi_map(double s) const {
  s = std::clamp(s, -1.0, 1.0);
  if (closed_form_) return (3.0 * s - s * s * s + 2.0) / 4.0;
  const double u = (s + 1.0) / phi_ds_;
  std::size_t k = std::min(static_cast<std::size_t>(u), phi_nodes_.size() - 2);
  const double t = u - static_cast<double>(k);
  const double h = phi_ds_;
  const double s0 = -1.0 + k * h, s1 = s0 + h;
  const double m0 = sqrt2w(*well_, s0) / sigma_ * h, m1 = sqrt2w(*well_, s1) / sigma_ * h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * phi_nodes_[k] + (t3 - 2 * t2 + t) * m0 +
         (-2 * t3 + 3 * t2) * phi_nodes_[k + 1] + (t3 - t2) * m1;
}

double Profile::dphi_map(double s) const {
  if (s <= -1.0 || s >= 1.0) return 0.0;
  return sqrt2w(*well_, s) / sigma_;
}

double Profile::equipartition_residual(double half_width, double spacing) const {
  const long n = std::lround(2.0 * half_width / spacing);
  double worst = 0.0;
  for (long k = 0; k <= n; ++k) {
    const double x = -half_width + k * spacing;
    const double d = dpsi(x);
    worst = std::max(worst, std::abs(d * d - 2.0 * well_->value(psi(x))));
  }
  return worst;
}

std::function<double(double)> bv_map(const DoubleWell& well) {
  auto p = std::make_shared<const Profile>(standing_wave(well));
  return [p](double s) { return p->phi_map(s); };
}

}  // namespace mct
