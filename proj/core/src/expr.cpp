#include "thermoadh/expr.hpp"

#include <cmath>

#include "thermoadh/error.hpp"

namespace thermoadh {

namespace {

double spatial(const ExprTerm& k, Point p) {
  double v = k.c;
  if (k.px) v *= std::pow(p.x, k.px);
  if (k.py) v *= std::pow(p.y, k.py);
  if (k.kx != 0.0 || k.phx != 0.0) v *= std::cos(k.kx * p.x + k.phx);
  if (k.ky != 0.0 || k.phy != 0.0) v *= std::cos(k.ky * p.y + k.phy);
  return v;
}

}  // namespace

double ExprTerm::eval(Point p, double t) const {
  if (t < t_on || t >= t_off) return 0.0;
  double v = spatial(*this, p);
  if (decay != 0.0) v *= std::exp(-decay * t);
  if (omega != 0.0 || pht != 0.0) v *= std::cos(omega * t + pht);
  return v;
}

ScalarExpr ScalarExpr::constant(double c) {
  ExprTerm k;
  k.c = c;
  return ScalarExpr({k});
}

double ScalarExpr::eval(Point p, double t) const {
  double v = 0.0;
  for (const auto& k : terms_) v += k.eval(p, t);
  return v;
}

double ScalarExpr::eval_limit(Point p) const {
  double v = 0.0;
  for (const auto& k : terms_) {
    if (std::isfinite(k.t_off) || k.decay > 0.0 || k.c == 0.0) continue;
    if (k.decay < 0.0) throw Error("expression grows without bound as t -> infinity");
    if (k.omega != 0.0) throw Error("expression oscillates forever; no limit as t -> infinity");
    v += spatial(k, p) * std::cos(k.pht);
  }
  return v;
}

bool ScalarExpr::integrable_in_time() const {
  for (const auto& k : terms_)
    if (k.c != 0.0 && !std::isfinite(k.t_off) && !(k.decay > 0.0)) return false;
  return true;
}

bool ScalarExpr::settles() const {
  for (const auto& k : terms_) {
    if (k.c == 0.0 || std::isfinite(k.t_off) || k.decay > 0.0) continue;
    if (k.decay < 0.0 || k.omega != 0.0) return false;
  }
  return true;
}

bool ScalarExpr::is_zero() const {
  for (const auto& k : terms_)
    if (k.c != 0.0) return false;
  return true;
}

}  // namespace thermoadh
