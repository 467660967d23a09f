#include "thermoadh/materials.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "thermoadh/error.hpp"

namespace thermoadh {

double Exchange::value(double x) const { return std::max(floor, k0 + k1 * std::tanh(x)); }

double Exchange::deriv(double x) const {
  if (k0 + k1 * std::tanh(x) < floor) return 0.0;
  const double th = std::tanh(x);
  return k1 * (1.0 - th * th);
}

namespace {

template <class F, class DF>
void check_derivative(const char* path, F f, DF df) {
  for (int i = 0; i <= 40; ++i) {
    const double x = -2.0 + 0.1 * i + 0.013;
    const double h = 1e-6;
    const double fd = (f(x + h) - f(x - h)) / (2.0 * h);
    if (std::abs(fd - df(x)) > 1e-6 * std::max(1.0, std::abs(fd)))
      throw ConfigError(path, "supplied derivative disagrees with finite difference at x=" +
                                  std::to_string(x));
  }
}

}  // namespace

void MaterialLaws::validate() const {
  if (!(lame_lambda > 0.0)) throw ConfigError("material.lame_lambda", "must be > 0");
  if (!(lame_mu > 0.0)) throw ConfigError("material.lame_mu", "must be > 0");
  if (!(exchange.floor > 0.0)) throw ConfigError("material.exchange.floor", "must be > 0");
  for (int i = 0; i <= 40; ++i) {
    const double x = -4.0 + 0.2 * i;
    if (!(k(x) >= exchange.floor))
      throw ConfigError("material.exchange", "k falls below its floor");
  }
  if (const auto* box = std::get_if<prox::BoxConstraint>(&constraint)) {
    if (!std::isfinite(box->lo) || !std::isfinite(box->hi) || !(box->lo < box->hi))
      throw ConfigError("material.constraint", "box bounds must be finite with lo < hi");
  } else {
    const auto& pw = std::get<prox::PowerConstraint>(constraint);
    if (!(pw.c > 0.0) || !(pw.q > 2.0))
      throw ConfigError("material.constraint", "power law needs c > 0 and q > 2");
  }
  check_derivative("material.latent", [this](double x) { return lambda(x); },
                   [this](double x) { return lambda_d(x); });
  check_derivative("material.cohesion", [this](double x) { return sigma(x); },
                   [this](double x) { return sigma_d(x); });
}

}  // namespace thermoadh
