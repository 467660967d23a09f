#pragma once

#include <functional>
#include <string>

#include "thermoadh/types.hpp"

namespace thermoadh::detail {

struct NewtonOptions {
  double tol = 1e-10;  ///< on the max-abs residual entry
  int max_iters = 50;
  /// Extra full steps taken after the tolerance is met; kept only if they
  /// do not increase the residual.
  int polish = 1;
};

struct NewtonResult {
  int iters = 0;
  double residual = 0.0;
  bool converged = false;
};

using ResidualFn = std::function<Vec(const Vec&)>;
using JacobianFn = std::function<SpMat(const Vec&)>;

/// Solves J dx = -r. Tries sparse LDL^T, then LU, then a diagonal shift.
/// Throws Error when all of them fail.
Vec solve_linear(const SpMat& j, const Vec& rhs);

/// Semismooth Newton with backtracking on the Euclidean residual norm.
NewtonResult newton_solve(Vec& x, const ResidualFn& residual, const JacobianFn& jacobian,
                          const NewtonOptions& opt);

}  // namespace thermoadh::detail
