#include "newton.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <cmath>

#include "thermoadh/error.hpp"

namespace thermoadh::detail {

namespace {

bool finite(const Vec& v) { return v.allFinite(); }

double inf_norm(const Vec& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

}  // namespace

Vec solve_linear(const SpMat& j, const Vec& rhs) {
  {
    Eigen::SimplicialLDLT<SpMat> ldlt(j);
    if (ldlt.info() == Eigen::Success) {
      Vec x = ldlt.solve(rhs);
      if (ldlt.info() == Eigen::Success && finite(x) &&
          (j * x - rhs).norm() <= 1e-8 * std::max(1.0, rhs.norm()))
        return x;
    }
  }
  {
    Eigen::SparseLU<SpMat> lu;
    lu.analyzePattern(j);
    lu.factorize(j);
    if (lu.info() == Eigen::Success) {
      Vec x = lu.solve(rhs);
      if (lu.info() == Eigen::Success && finite(x)) return x;
    }
  }
  double scale = 0.0;
  for (int k = 0; k < j.outerSize(); ++k)
    for (SpMat::InnerIterator it(j, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
  SpMat eye(j.rows(), j.cols());
  eye.setIdentity();
  for (double shift = 1e-10; shift <= 1e-2; shift *= 100.0) {
    SpMat js = j + (shift * std::max(scale, 1.0)) * eye;
    Eigen::SparseLU<SpMat> lu;
    lu.analyzePattern(js);
    lu.factorize(js);
    if (lu.info() != Eigen::Success) continue;
    Vec x = lu.solve(rhs);
    if (finite(x)) return x;
  }
  throw Error("linear solve failed: singular Jacobian");
}

NewtonResult newton_solve(Vec& x, const ResidualFn& residual, const JacobianFn& jacobian,
                          const NewtonOptions& opt) {
  NewtonResult res;
  Vec r = residual(x);
  if (!finite(r)) return res;
  res.residual = inf_norm(r);
  int polished = 0;
  while (true) {
    const bool ok = res.residual <= opt.tol;
    if (ok && polished >= opt.polish) {
      res.converged = true;
      return res;
    }
    if (res.iters >= opt.max_iters) {
      res.converged = ok;
      return res;
    }
    Vec dx;
    try {
      dx = solve_linear(jacobian(x), -r);
    } catch (const Error&) {
      res.converged = ok;
      return res;
    }
    ++res.iters;
    if (ok) {
      // Polishing step: keep it only when it helps.
      ++polished;
      Vec xt = x + dx;
      Vec rt = residual(xt);
      if (finite(rt) && inf_norm(rt) <= res.residual) {
        x = std::move(xt);
        r = std::move(rt);
        res.residual = inf_norm(r);
      }
      continue;
    }
    const double n0 = r.norm();
    double alpha = 1.0;
    Vec best_x, best_r;
    double best = INFINITY;
    for (int ls = 0; ls < 12; ++ls, alpha *= 0.5) {
      Vec xt = x + alpha * dx;
      Vec rt = residual(xt);
      if (!finite(rt)) continue;
      const double nt = rt.norm();
      if (nt < best) {
        best = nt;
        best_x = std::move(xt);
        best_r = std::move(rt);
      }
      if (nt <= (1.0 - 1e-4 * alpha) * n0) break;
    }
    if (!std::isfinite(best)) return res;
    x = std::move(best_x);
    r = std::move(best_r);
    res.residual = inf_norm(r);
  }
}

}  // namespace thermoadh::detail
