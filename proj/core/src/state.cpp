#include "thermoadh/state.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "thermoadh/error.hpp"

namespace thermoadh {

State zero_state(const mesh::Spaces& sp) {
  State st;
  st.theta = Vec::Zero(sp.n_v);
  st.theta_s = Vec::Zero(sp.n_s);
  st.u = Vec::Zero(sp.n_w);
  st.chi = Vec::Zero(sp.n_s);
  st.aux = {Vec::Zero(sp.n_s), Vec::Zero(sp.n_s), Vec::Zero(sp.n_s)};
  return st;
}

void check_dimensions(const State& st, const mesh::Spaces& sp) {
  const auto expect = [](const Vec& v, int n, const char* name) {
    if (v.size() != n)
      throw Error(std::string("state field ") + name + " has length " +
                  std::to_string(v.size()) + ", expected " + std::to_string(n));
  };
  expect(st.theta, sp.n_v, "theta");
  expect(st.theta_s, sp.n_s, "theta_s");
  expect(st.u, sp.n_w, "u");
  expect(st.chi, sp.n_s, "chi");
}

namespace {

AuxSelections compute_aux(const State& st, const mesh::Spaces& sp, const MaterialLaws& mat,
                          prox::YosidaParam p) {
  AuxSelections aux{Vec(sp.n_s), Vec(sp.n_s), Vec(sp.n_s)};
  std::vector<Point> normal(static_cast<std::size_t>(sp.n_s), Point{});
  for (const auto& seg : sp.contact_segments)
    for (int a = 0; a < 2; ++a) normal[seg.node[a]] = normal[seg.node[a]] + seg.normal;
  for (int s = 0; s < sp.n_s; ++s) {
    const double chi = st.chi[s];
    aux.xi[s] = prox::yosida_beta(p, mat.constraint, chi);
    aux.zeta[s] = prox::heaviside_mu(p, chi);
    const int v = sp.surface->parent[s];
    const double ux = sp.w_dof[2 * v] >= 0 ? st.u[sp.w_dof[2 * v]] : 0.0;
    const double uy = sp.w_dof[2 * v + 1] >= 0 ? st.u[sp.w_dof[2 * v + 1]] : 0.0;
    const Point n = normal[s];
    const double len = std::hypot(n.x, n.y);
    aux.eta[s] = prox::yosida_impen(p, (ux * n.x + uy * n.y) / len);
  }
  return aux;
}

}  // namespace

void refresh_aux(State& st, const mesh::Spaces& sp, const MaterialLaws& mat,
                 prox::YosidaParam p) {
  st.aux = compute_aux(st, sp, mat, p);
}

bool aux_consistent(const State& st, const mesh::Spaces& sp, const MaterialLaws& mat,
                    prox::YosidaParam p, double tol) {
  if (st.aux.xi.size() != sp.n_s || st.aux.zeta.size() != sp.n_s || st.aux.eta.size() != sp.n_s)
    return false;
  const AuxSelections fresh = compute_aux(st, sp, mat, p);
  const auto close = [tol](const Vec& a, const Vec& b) {
    return (a - b).lpNorm<Eigen::Infinity>() <= tol * std::max(1.0, b.lpNorm<Eigen::Infinity>());
  };
  return close(st.aux.xi, fresh.xi) && close(st.aux.zeta, fresh.zeta) &&
         close(st.aux.eta, fresh.eta);
}

}  // namespace thermoadh
