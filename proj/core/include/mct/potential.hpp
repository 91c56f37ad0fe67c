#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace mct {

/// Double-well potential W on [-1, 1] with its first two derivatives.
///
/// Construction validates the W-shape: W(+-1) = W'(+-1) = 0, W' changes sign
/// once at `gamma`, and W'' >= kappa on |s| >= alpha. The object is immutable
/// afterwards and may be shared across threads.
class DoubleWell {
 public:
  using Fn = std::function<double(double)>;

  DoubleWell(std::string name, Fn value, Fn d1, Fn d2);

  /// As above but with a prescribed (alpha, kappa) pair, still checked.
  DoubleWell(std::string name, Fn value, Fn d1, Fn d2, double alpha, double kappa);

  const std::string& name() const { return name_; }
  double value(double s) const { return value_(s); }
  double d1(double s) const { return d1_(s); }
  double d2(double s) const { return d2_(s); }
  double gamma() const { return gamma_; }
  double alpha() const { return alpha_; }
  double kappa() const { return kappa_; }
  /// max |W''| on [-1, 1]; the reaction stiffness used by the time step bound.
  double d2_max() const { return d2_max_; }

  /// c * W, with derivatives scaled accordingly.
  DoubleWell scaled(double c) const;

  /// Set for the built-in (1 - s^2)^2 family; value is the scale factor.
  double quartic_scale() const { return quartic_scale_; }

 private:
  void validate(bool scan_alpha);

  std::string name_;
  Fn value_, d1_, d2_;
  double gamma_ = 0.0;
  double alpha_ = 0.0;
  double kappa_ = 0.0;
  double d2_max_ = 0.0;
  double quartic_scale_ = 0.0;

  friend DoubleWell make_quartic_well();
};

/// W(s) = (1 - s^2)^2 with gamma = 0, alpha = 0.9, kappa = W''(0.9).
DoubleWell make_quartic_well();

/// W(s) = (1 - s^2)^2 (1 + a s^2); exercises the generic (tabulated) profile path.
DoubleWell make_perturbed_quartic_well(double a = 0.5);

/// Clamped cubic spline through (s, W(s)) samples covering [-1, 1].
DoubleWell make_table_well(const std::vector<double>& s, const std::vector<double>& w,
                           std::string name = "table");

/// Reads a two-column CSV of (s, W(s)) samples; '#' lines and a non-numeric
/// header row are skipped.
DoubleWell load_table_well(const std::string& path);

/// Selects "quartic", "perturbed_quartic" or "table:<csv path>".
DoubleWell well_by_name(const std::string& name);

/// sigma = int_{-1}^{1} sqrt(2 W(s)) ds, relative error <= 1e-10.
double surface_tension(const DoubleWell& well);

/// Standing wave Psi (Psi' = sqrt(2 W(Psi)), Psi(0) = 0), the surface tension
/// and the BV map Phi(s) = sigma^{-1} int_{-1}^{s} sqrt(2 W).
class Profile {
 public:
  double psi(double x) const;
  double dpsi(double x) const;
  /// Inverse of psi on (-1, 1); clamps to the table range outside it.
  double psi_inverse(double v) const;
  double sigma() const { return sigma_; }
  double phi_map(double s) const;
  double dphi_map(double s) const;
  const DoubleWell& well() const { return *well_; }

  /// Largest equipartition residual |psi'^2 - 2 W(psi)| over [-L, L] at the given spacing.
  double equipartition_residual(double half_width = 10.0, double spacing = 1e-3) const;

 private:
  friend Profile standing_wave(const DoubleWell& well);
  friend std::function<double(double)> bv_map(const DoubleWell& well);

  std::shared_ptr<const DoubleWell> well_;
  double sigma_ = 0.0;
  bool closed_form_ = false;
  double rate_ = 0.0;  // sqrt(2c) for the quartic family

  // tabulated psi for generic wells: nodes x_k = -L + k*dx
  double table_half_width_ = 0.0;
  double table_dx_ = 0.0;
  std::vector<double> psi_nodes_;
  double tail_c_plus_ = 0.0, tail_c_minus_ = 0.0;
  double tail_rate_plus_ = 0.0, tail_rate_minus_ = 0.0;

  // tabulated Phi for generic wells on s in [-1, 1]
  double phi_ds_ = 0.0;
  std::vector<double> phi_nodes_;
};

/// Builds Psi (closed form for the quartic family, RK4 table otherwise) with
/// equipartition certified to 1e-10, plus sigma and Phi.
Profile standing_wave(const DoubleWell& well);

/// Phi as a standalone callable (Phi(-1) = 0, Phi(1) = 1).
std::function<double(double)> bv_map(const DoubleWell& well);

}  // namespace mct
