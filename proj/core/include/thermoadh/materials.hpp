#pragma once

#include "thermoadh/expr.hpp"
#include "thermoadh/proximal.hpp"

namespace thermoadh {

/// Latent-heat coupling l0 x + l2 x^2 / 2.
struct LatentHeat {
  double l0 = 0.5;
  double l2 = 0.0;
  double value(double x) const { return l0 * x + 0.5 * l2 * x * x; }
  double deriv(double x) const { return l0 + l2 * x; }
  double deriv2(double) const { return l2; }
};

/// Cohesion potential w (1 - x) + s0 x^2 / 2.
struct Cohesion {
  double w = 1.0;
  double s0 = 1.0;
  double value(double x) const { return w * (1.0 - x) + 0.5 * s0 * x * x; }
  double deriv(double x) const { return -w + s0 * x; }
  double deriv2(double) const { return s0; }
};

/// Heat exchange coefficient max(floor, k0 + k1 tanh x).
struct Exchange {
  double k0 = 1.0;
  double k1 = 0.5;
  double floor = 0.5;
  double value(double x) const;
  double deriv(double x) const;
};

struct MaterialLaws {
  double lame_lambda = 1.0;
  double lame_mu = 1.0;
  LatentHeat latent;
  Cohesion cohesion;
  Exchange exchange;
  prox::Constraint constraint = prox::BoxConstraint{0.0, 1.0};
  /// Critical temperature; enters only through sigma_eff = sigma - theta_eq lambda.
  double theta_eq = 0.0;

  double sigma(double x) const { return cohesion.value(x) - theta_eq * latent.value(x); }
  double sigma_d(double x) const { return cohesion.deriv(x) - theta_eq * latent.deriv(x); }
  double sigma_dd(double x) const { return cohesion.deriv2(x) - theta_eq * latent.deriv2(x); }
  double lambda(double x) const { return latent.value(x); }
  double lambda_d(double x) const { return latent.deriv(x); }
  double lambda_dd(double x) const { return latent.deriv2(x); }
  double k(double x) const { return exchange.value(x); }

  /// Throws ConfigError (path under "material") on non-positive Lame
  /// constants, a non-positive exchange floor, an invalid constraint, or a
  /// supplied derivative that disagrees with the finite difference of its
  /// function.
  void validate() const;
};

struct SourceData {
  ScalarExpr h;  ///< bulk entropy source
  VectorExpr f;  ///< bulk force
  VectorExpr g;  ///< traction on the traction part

  /// h integrable in time and f, g converging with integrable time
  /// derivative: the data assumptions under which trajectories equilibrate.
  bool equilibrating() const {
    return h.integrable_in_time() && f.settles() && g.settles();
  }
};

struct RegularizationParams {
  double eps = 1e-3;  ///< viscosity added to both entropy equations
  double mu = 1e-2;   ///< Yosida scale
  prox::YosidaParam yosida() const { return prox::YosidaParam(mu); }
};

}  // namespace thermoadh
