#pragma once

#include "thermoadh/materials.hpp"
#include "thermoadh/mesh.hpp"
#include "thermoadh/types.hpp"

namespace thermoadh {

/// Nodal selections on the contact surface, recomputable from (chi, u).
struct AuxSelections {
  Vec xi;    ///< beta_mu(chi)
  Vec zeta;  ///< H_mu(chi)
  Vec eta;   ///< (u.n)^+ / mu, with n the averaged nodal normal
};

/// The four evolving fields.
struct State {
  double t = 0.0;
  Vec theta;    ///< V_h
  Vec theta_s;  ///< S_h
  Vec u;        ///< W_h
  Vec chi;      ///< S_h
  AuxSelections aux;
};

State zero_state(const mesh::Spaces& sp);

/// Throws Error when a coefficient vector has the wrong length.
void check_dimensions(const State& st, const mesh::Spaces& sp);

void refresh_aux(State& st, const mesh::Spaces& sp, const MaterialLaws& mat,
                 prox::YosidaParam p);
bool aux_consistent(const State& st, const mesh::Spaces& sp, const MaterialLaws& mat,
                    prox::YosidaParam p, double tol = 1e-12);

}  // namespace thermoadh
