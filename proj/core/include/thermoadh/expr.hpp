#pragma once

#include <limits>
#include <vector>

#include "thermoadh/types.hpp"

namespace thermoadh {

/// One term of the closed expression whitelist:
///
///   c * x^px * y^py * cos(kx x + phx) * cos(ky y + phy)
///     * exp(-decay t) * cos(omega t + pht) * [t_on <= t < t_off]
///
/// Constants, monomials, spatial sinusoids, exponential decay, temporal
/// sinusoids and time cutoffs are all special cases.
struct ExprTerm {
  double c = 0.0;
  int px = 0;
  int py = 0;
  double kx = 0.0, phx = 0.0;
  double ky = 0.0, phy = 0.0;
  double decay = 0.0;
  double omega = 0.0, pht = 0.0;
  double t_on = -std::numeric_limits<double>::infinity();
  double t_off = std::numeric_limits<double>::infinity();

  double eval(Point p, double t) const;
  bool operator==(const ExprTerm&) const = default;
};

class ScalarExpr {
 public:
  ScalarExpr() = default;
  explicit ScalarExpr(std::vector<ExprTerm> terms) : terms_(std::move(terms)) {}
  static ScalarExpr constant(double c);

  double eval(Point p, double t) const;
  /// Value as t -> infinity. Throws Error when a term oscillates forever.
  double eval_limit(Point p) const;
  /// Every term switches off or decays exponentially (integrable on (0, inf)).
  bool integrable_in_time() const;
  /// Every term has a limit as t -> infinity and an integrable time derivative.
  bool settles() const;
  bool is_zero() const;

  const std::vector<ExprTerm>& terms() const { return terms_; }
  bool operator==(const ScalarExpr&) const = default;

 private:
  std::vector<ExprTerm> terms_;
};

struct VectorExpr {
  ScalarExpr x;
  ScalarExpr y;

  Point eval(Point p, double t) const { return {x.eval(p, t), y.eval(p, t)}; }
  Point eval_limit(Point p) const { return {x.eval_limit(p), y.eval_limit(p)}; }
  bool settles() const { return x.settles() && y.settles(); }
  bool is_zero() const { return x.is_zero() && y.is_zero(); }
  bool operator==(const VectorExpr&) const = default;
};

}  // namespace thermoadh
