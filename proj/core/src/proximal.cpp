#include "thermoadh/proximal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace thermoadh::prox {

namespace {

// Solves exp(z) + mu z = x for z = ln(r_mu(x)). Working with the logarithm
// keeps the solve well posed when r_mu(x) underflows (x/mu << 0).
//
// h(z) = exp(z) + mu z - x is convex and increasing, so Newton started at a
// point with h >= 0 decreases monotonically onto the root. The bracket is
// kept anyway and bisection takes over if an iterate leaves it.
double solve_log_resolvent(double mu, double x) {
  double hi = x >= 1.0 ? std::log(x) : std::min(0.0, x / mu);
  double lo = (x - std::exp(hi)) / mu;
  double z = hi;
  for (int it = 0; it < 200; ++it) {
    const double ez = std::exp(z);
    const double h = ez + mu * z - x;
    if (h == 0.0) return z;
    if (h > 0.0) hi = std::min(hi, z);
    else lo = std::max(lo, z);
    double next = z - h / (ez + mu);
    if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - z);
    z = next;
    if (step <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(z)))
      return z;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(z)))
      return z;
  }
  throw std::logic_error("resolvent_ln: scalar solve did not converge for x=" +
                         std::to_string(x) + ", mu=" + std::to_string(mu));
}

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// Resolvent of the power-law subdifferential: |J| = t solves t + a t^(q-1) = |x|.
double power_resolvent(double mu, const PowerConstraint& c, double x) {
  const double ax = std::abs(x);
  if (ax == 0.0) return 0.0;
  const double a = mu * c.c * c.q;
  double t = ax;
  for (int it = 0; it < 200; ++it) {
    const double g = t + a * std::pow(t, c.q - 1.0) - ax;
    const double dg = 1.0 + a * (c.q - 1.0) * std::pow(t, c.q - 2.0);
    const double next = std::max(0.0, t - g / dg);
    if (std::abs(next - t) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, t)) {
      t = next;
      break;
    }
    t = next;
  }
  return std::copysign(t, x);
}

}  // namespace

YosidaParam::YosidaParam(double mu) : mu_(mu) {
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw std::invalid_argument("Yosida parameter must be positive and finite");
}

BoxConstraint make_box(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    throw std::invalid_argument("box constraint needs finite bounds lo < hi");
  return {lo, hi};
}

PowerConstraint make_power(double c, double q) {
  if (!(c > 0.0) || !(q > 2.0) || !std::isfinite(c) || !std::isfinite(q))
    throw std::invalid_argument("power constraint needs c > 0 and q > 2");
  return {c, q};
}

LnEval ln_mu_eval(YosidaParam p, double x) {
  const double z = solve_log_resolvent(p.mu(), x);
  const double r = std::max(std::exp(z), std::numeric_limits<double>::denorm_min());
  return {r, z, 1.0 / (r + p.mu())};
}

double resolvent_ln(YosidaParam p, double x) { return ln_mu_eval(p, x).r; }
double yosida_ln(YosidaParam p, double x) { return ln_mu_eval(p, x).ln; }
double yosida_ln_deriv(YosidaParam p, double x) { return ln_mu_eval(p, x).dln; }

double i_mu(YosidaParam p, double x) {
  if (x == 0.0) return 0.0;
  auto f = [p](double s) { return s * yosida_ln_deriv(p, s); };
  // The integrand bends on the scale mu near 0 and on the scale 1 where the
  // resolvent crosses 1; geometrically graded pieces resolve both.
  const double sign = x > 0.0 ? 1.0 : -1.0;
  const double ax = std::abs(x);
  double total = 0.0;
  double a = 0.0;
  double b = std::min(ax, p.mu());
  while (true) {
    const double lo = sign * a, hi = sign * b;
    const double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
    const double whole = simpson(lo, hi, fa, fm, fb);
    total += adaptive_simpson(f, lo, hi, fa, fm, fb, whole, 1e-12 * std::max(1.0, std::abs(whole)),
                              50);
    if (b >= ax) break;
    a = b;
    b = std::min(ax, 2.0 * b);
  }
  return total;
}

double i_mu_closed(YosidaParam p, double x) {
  const double mu = p.mu();
  const double z = solve_log_resolvent(mu, x);
  const double z0 = solve_log_resolvent(mu, 0.0);
  return (std::exp(z) - std::exp(z0)) + 0.5 * mu * (z - z0) * (z + z0);
}

IMu::IMu(YosidaParam p) : mu_(p.mu()), z0_(solve_log_resolvent(p.mu(), 0.0)) {}

double IMu::operator()(double x) const {
  const double z = solve_log_resolvent(mu_, x);
  return (std::exp(z) - std::exp(z0_)) + 0.5 * mu_ * (z - z0_) * (z + z0_);
}

double pos_part_mu(YosidaParam p, double x) {
  const double mu = p.mu();
  if (x <= 0.0) return 0.0;
  if (x < mu) return x * x / (2.0 * mu);
  return x - 0.5 * mu;
}

double heaviside_mu(YosidaParam p, double x) {
  const double mu = p.mu();
  if (x <= 0.0) return 0.0;
  if (x < mu) return x / mu;
  return 1.0;
}

double heaviside_mu_deriv(YosidaParam p, double x) {
  return (x > 0.0 && x < p.mu()) ? 1.0 / p.mu() : 0.0;
}

double yosida_box(YosidaParam p, const BoxConstraint& b, double x) {
  return (std::max(x - b.hi, 0.0) - std::max(b.lo - x, 0.0)) / p.mu();
}

double yosida_box_deriv(YosidaParam p, const BoxConstraint& b, double x) {
  return (x > b.hi || x < b.lo) ? 1.0 / p.mu() : 0.0;
}

double box_envelope(YosidaParam p, const BoxConstraint& b, double x) {
  const double d = std::max({x - b.hi, b.lo - x, 0.0});
  return d * d / (2.0 * p.mu());
}

double yosida_power(YosidaParam p, const PowerConstraint& c, double x) {
  return (x - power_resolvent(p.mu(), c, x)) / p.mu();
}

double yosida_power_deriv(YosidaParam p, const PowerConstraint& c, double x) {
  const double t = std::abs(power_resolvent(p.mu(), c, x));
  const double dj = 1.0 / (1.0 + p.mu() * c.c * c.q * (c.q - 1.0) * std::pow(t, c.q - 2.0));
  return (1.0 - dj) / p.mu();
}

double power_envelope(YosidaParam p, const PowerConstraint& c, double x) {
  const double j = power_resolvent(p.mu(), c, x);
  return (x - j) * (x - j) / (2.0 * p.mu()) + c.c * std::pow(std::abs(j), c.q);
}

double yosida_beta(YosidaParam p, const Constraint& c, double x) {
  return std::visit(
      [&](const auto& k) {
        if constexpr (std::is_same_v<std::decay_t<decltype(k)>, BoxConstraint>)
          return yosida_box(p, k, x);
        else
          return yosida_power(p, k, x);
      },
      c);
}

double yosida_beta_deriv(YosidaParam p, const Constraint& c, double x) {
  return std::visit(
      [&](const auto& k) {
        if constexpr (std::is_same_v<std::decay_t<decltype(k)>, BoxConstraint>)
          return yosida_box_deriv(p, k, x);
        else
          return yosida_power_deriv(p, k, x);
      },
      c);
}

double beta_envelope(YosidaParam p, const Constraint& c, double x) {
  return std::visit(
      [&](const auto& k) {
        if constexpr (std::is_same_v<std::decay_t<decltype(k)>, BoxConstraint>)
          return box_envelope(p, k, x);
        else
          return power_envelope(p, k, x);
      },
      c);
}

double yosida_impen(YosidaParam p, double un) { return std::max(un, 0.0) / p.mu(); }

double yosida_impen_deriv(YosidaParam p, double un) { return un > 0.0 ? 1.0 / p.mu() : 0.0; }

double impen_envelope(YosidaParam p, double un) {
  const double pos = std::max(un, 0.0);
  return pos * pos / (2.0 * p.mu());
}

}  // namespace thermoadh::prox
