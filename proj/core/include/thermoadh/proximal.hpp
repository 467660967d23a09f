#pragma once

#include <variant>

/// Scalar Moreau-Yosida toolkit: resolvent and Yosida regularisation of the
/// logarithm, the regularised positive part and Heaviside graph, and the
/// regularised constraint operators acting on the damage parameter and on
/// the normal displacement.
///
/// Everything here is a pure function of its arguments.
namespace thermoadh::prox {

/// Below this scale the upper bounds `ln_mu'(x) <= 2/x` and `I_mu(x) <= 2x`
/// (x > 0) are asserted by the test suites.
inline constexpr double kSmallMuThreshold = 1e-2;

class YosidaParam {
 public:
  /// Throws std::invalid_argument unless mu > 0 and finite.
  explicit YosidaParam(double mu);

  double mu() const noexcept { return mu_; }
  bool below_small_mu_threshold() const noexcept { return mu_ < kSmallMuThreshold; }

 private:
  double mu_;
};

/// Indicator of [lo, hi].
struct BoxConstraint {
  double lo = 0.0;
  double hi = 1.0;
};

/// Super-quadratic potential c |x|^q with q > 2.
struct PowerConstraint {
  double c = 1.0;
  double q = 4.0;
};

using Constraint = std::variant<BoxConstraint, PowerConstraint>;

/// Throws std::invalid_argument on lo >= hi or non-finite bounds.
BoxConstraint make_box(double lo, double hi);
/// Throws std::invalid_argument unless c > 0 and q > 2.
PowerConstraint make_power(double c, double q);

/// The three quantities that share one scalar solve.
struct LnEval {
  double r;      ///< resolvent r_mu(x) > 0
  double ln;     ///< ln_mu(x) = ln(r_mu(x))
  double dln;    ///< ln_mu'(x) = 1 / (r_mu(x) + mu)
};

/// Unique y > 0 with y + mu ln y = x.
double resolvent_ln(YosidaParam p, double x);
double yosida_ln(YosidaParam p, double x);
double yosida_ln_deriv(YosidaParam p, double x);
LnEval ln_mu_eval(YosidaParam p, double x);

/// I_mu(x) = int_0^x s ln_mu'(s) ds by adaptive Simpson quadrature on
/// geometrically graded pieces (relative tolerance about 1e-12 per piece).
double i_mu(YosidaParam p, double x);
/// Same integral in closed form, via the substitution s = r + mu ln r.
double i_mu_closed(YosidaParam p, double x);

/// Closed-form I_mu with ln(r_mu(0)) computed once, for assembly loops.
class IMu {
 public:
  explicit IMu(YosidaParam p);
  double operator()(double x) const;

 private:
  double mu_;
  double z0_;
};

double pos_part_mu(YosidaParam p, double x);
double heaviside_mu(YosidaParam p, double x);
/// Generalised derivative of heaviside_mu (1/mu on (0, mu), else 0).
double heaviside_mu_deriv(YosidaParam p, double x);

double yosida_box(YosidaParam p, const BoxConstraint& b, double x);
double yosida_box_deriv(YosidaParam p, const BoxConstraint& b, double x);
/// Moreau envelope dist(x, [lo, hi])^2 / (2 mu).
double box_envelope(YosidaParam p, const BoxConstraint& b, double x);

double yosida_power(YosidaParam p, const PowerConstraint& c, double x);
double yosida_power_deriv(YosidaParam p, const PowerConstraint& c, double x);
double power_envelope(YosidaParam p, const PowerConstraint& c, double x);

double yosida_beta(YosidaParam p, const Constraint& c, double x);
double yosida_beta_deriv(YosidaParam p, const Constraint& c, double x);
double beta_envelope(YosidaParam p, const Constraint& c, double x);

/// Yosida approximation of the subdifferential of the indicator of
/// (-inf, 0], applied to the normal trace un: (un)^+ / mu.
double yosida_impen(YosidaParam p, double un);
double yosida_impen_deriv(YosidaParam p, double un);
/// Its primitive ((un)^+)^2 / (2 mu).
double impen_envelope(YosidaParam p, double un);

}  // namespace thermoadh::prox
