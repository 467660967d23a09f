#include "thermoadh/assembly.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "thermoadh/error.hpp"

namespace thermoadh::assembly {

namespace {

// Barycentric coordinates of the 3-point interior rule; weights area / 3.
constexpr double kTriLam[3][3] = {{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
                                  {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
                                  {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}};

// 2-point Gauss abscissae on [0, 1]; weights length / 2.
const double kSegXi[2] = {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};

inline double seg_basis(int q, int a) { return a == 0 ? 1.0 - kSegXi[q] : kSegXi[q]; }

inline double tri_interp(const Vec& f, const mesh::TriangleGeom& tr, int q) {
  return kTriLam[q][0] * f[tr.v[0]] + kTriLam[q][1] * f[tr.v[1]] + kTriLam[q][2] * f[tr.v[2]];
}

inline double seg_interp(const Vec& f, const std::array<int, 2>& idx, int q) {
  return seg_basis(q, 0) * f[idx[0]] + seg_basis(q, 1) * f[idx[1]];
}

inline double w_value(const mesh::Spaces& sp, const Vec& u, int v, int c) {
  const int d = sp.w_dof[2 * v + c];
  return d >= 0 ? u[d] : 0.0;
}

inline Point seg_disp(const mesh::Spaces& sp, const Vec& u, const mesh::SegmentGeom& seg, int q) {
  Point r;
  for (int a = 0; a < 2; ++a) {
    const double b = seg_basis(q, a);
    r.x += b * w_value(sp, u, seg.parent[a], 0);
    r.y += b * w_value(sp, u, seg.parent[a], 1);
  }
  return r;
}

Point tri_point(const mesh::Spaces& sp, const mesh::TriangleGeom& tr, int q) {
  Point p;
  for (int k = 0; k < 3; ++k) p = p + kTriLam[q][k] * sp.body->vertices[tr.v[k]];
  return p;
}

Point edge_point(const mesh::Spaces& sp, const std::array<int, 2>& v, int q) {
  return seg_basis(q, 0) * sp.body->vertices[v[0]] + seg_basis(q, 1) * sp.body->vertices[v[1]];
}

// Rows of the Voigt strain operator (exx, eyy, 2 exy) for local dof 2 k + c.
std::array<std::array<double, 6>, 3> strain_rows(const mesh::TriangleGeom& tr) {
  std::array<std::array<double, 6>, 3> bm{};
  for (int k = 0; k < 3; ++k) {
    bm[0][2 * k] = tr.grad[k].x;
    bm[1][2 * k + 1] = tr.grad[k].y;
    bm[2][2 * k] = tr.grad[k].y;
    bm[2][2 * k + 1] = tr.grad[k].x;
  }
  return bm;
}

SpMat from_triplets(int rows, int cols, const std::vector<Triplet>& t) {
  SpMat m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

double tri_div(const mesh::Spaces& sp, const Vec& u, const mesh::TriangleGeom& tr) {
  double d = 0.0;
  for (int k = 0; k < 3; ++k)
    d += tr.grad[k].x * w_value(sp, u, tr.v[k], 0) + tr.grad[k].y * w_value(sp, u, tr.v[k], 1);
  return d;
}

}  // namespace

AssembledForms assemble_constant_forms(const mesh::Spaces& sp, const MaterialLaws& mat) {
  const double lam = mat.lame_lambda;
  const double mu = mat.lame_mu;
  const double da[3][3] = {{lam + 2 * mu, lam, 0.0}, {lam, lam + 2 * mu, 0.0}, {0.0, 0.0, mu}};
  const double db[3] = {1.0, 1.0, 0.5};

  std::vector<Triplet> ta, tb, tk, tm, td, tmw, tks, tms;
  AssembledForms f;
  for (const auto& tr : sp.triangles) {
    f.area += tr.area;
    const auto bm = strain_rows(tr);
    int dof[6];
    for (int k = 0; k < 3; ++k)
      for (int c = 0; c < 2; ++c) dof[2 * k + c] = sp.w_dof[2 * tr.v[k] + c];
    for (int i = 0; i < 6; ++i) {
      if (dof[i] < 0) continue;
      for (int j = 0; j < 6; ++j) {
        if (dof[j] < 0) continue;
        double sa = 0.0, sb = 0.0;
        for (int r = 0; r < 3; ++r) {
          sb += bm[r][i] * db[r] * bm[r][j];
          for (int s = 0; s < 3; ++s) sa += bm[r][i] * da[r][s] * bm[s][j];
        }
        ta.emplace_back(dof[i], dof[j], sa * tr.area);
        tb.emplace_back(dof[i], dof[j], sb * tr.area);
      }
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        tk.emplace_back(tr.v[i], tr.v[j], dot(tr.grad[i], tr.grad[j]) * tr.area);
        const double m = tr.area * (i == j ? 2.0 : 1.0) / 12.0;
        tm.emplace_back(tr.v[i], tr.v[j], m);
        for (int c = 0; c < 2; ++c) {
          const int di = dof[2 * i + c];
          const int dj = dof[2 * j + c];
          if (di >= 0 && dj >= 0) tmw.emplace_back(di, dj, m);
        }
      }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 6; ++j) {
        if (dof[j] < 0) continue;
        const Point g = tr.grad[j / 2];
        td.emplace_back(tr.v[i], dof[j], (j % 2 == 0 ? g.x : g.y) * tr.area / 3.0);
      }
  }
  for (const auto& seg : sp.contact_segments) {
    f.contact_length += seg.length;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        tks.emplace_back(seg.node[a], seg.node[b], (a == b ? 1.0 : -1.0) / seg.length);
        tms.emplace_back(seg.node[a], seg.node[b], seg.length * (a == b ? 2.0 : 1.0) / 6.0);
      }
  }
  f.a = from_triplets(sp.n_w, sp.n_w, ta);
  f.b = from_triplets(sp.n_w, sp.n_w, tb);
  f.stiff_v = from_triplets(sp.n_v, sp.n_v, tk);
  f.mass_v = from_triplets(sp.n_v, sp.n_v, tm);
  f.div = from_triplets(sp.n_v, sp.n_w, td);
  f.mass_w = from_triplets(sp.n_w, sp.n_w, tmw);
  f.stiff_s = from_triplets(sp.n_s, sp.n_s, tks);
  f.mass_s = from_triplets(sp.n_s, sp.n_s, tms);
  return f;
}

Problem make_problem(std::shared_ptr<const mesh::Spaces> spaces, MaterialLaws mat,
                     SourceData src, RegularizationParams rp) {
  if (!spaces) throw Error("make_problem: null spaces");
  mat.validate();
  if (!(rp.eps >= 0.0) || !std::isfinite(rp.eps))
    throw ConfigError("regularization.eps", "must be finite and >= 0");
  if (!(rp.mu > 0.0) || !std::isfinite(rp.mu))
    throw ConfigError("regularization.mu", "must be finite and > 0");
  Problem pb;
  pb.forms = assemble_constant_forms(*spaces, mat);
  pb.spaces = std::move(spaces);
  pb.mat = std::move(mat);
  pb.src = std::move(src);
  pb.rp = rp;
  return pb;
}

Vec entropy_load(const Problem& pb, double t) {
  const auto& sp = pb.sp();
  Vec r = Vec::Zero(sp.n_v);
  if (pb.src.h.is_zero()) return r;
  for (const auto& tr : sp.triangles)
    for (int q = 0; q < 3; ++q) {
      const double hq = pb.src.h.eval(tri_point(sp, tr, q), t) * tr.area / 3.0;
      for (int k = 0; k < 3; ++k) r[tr.v[k]] += hq * kTriLam[q][k];
    }
  return r;
}

namespace {

template <class Eval>
Vec mech_load_impl(const Problem& pb, const Eval& f_at, const Eval& g_at) {
  const auto& sp = pb.sp();
  Vec r = Vec::Zero(sp.n_w);
  for (const auto& tr : sp.triangles)
    for (int q = 0; q < 3; ++q) {
      const Point fq = f_at(pb.src.f, tri_point(sp, tr, q));
      const double w = tr.area / 3.0;
      for (int k = 0; k < 3; ++k) {
        const int dx = sp.w_dof[2 * tr.v[k]];
        const int dy = sp.w_dof[2 * tr.v[k] + 1];
        if (dx >= 0) r[dx] += w * kTriLam[q][k] * fq.x;
        if (dy >= 0) r[dy] += w * kTriLam[q][k] * fq.y;
      }
    }
  for (const auto& e : sp.traction_edges)
    for (int q = 0; q < 2; ++q) {
      const Point gq = g_at(pb.src.g, edge_point(sp, e.v, q));
      const double w = e.length / 2.0;
      for (int a = 0; a < 2; ++a) {
        const int dx = sp.w_dof[2 * e.v[a]];
        const int dy = sp.w_dof[2 * e.v[a] + 1];
        if (dx >= 0) r[dx] += w * seg_basis(q, a) * gq.x;
        if (dy >= 0) r[dy] += w * seg_basis(q, a) * gq.y;
      }
    }
  return r;
}

}  // namespace

namespace {

Vec with_offset(const Problem& pb, Vec r) {
  if (pb.load_offset.size() == r.size()) r += pb.load_offset;
  else if (pb.load_offset.size() != 0) throw Error("load_offset has the wrong length");
  return r;
}

}  // namespace

Vec mechanical_load(const Problem& pb, double t) {
  if (pb.src.f.is_zero() && pb.src.g.is_zero()) return with_offset(pb, Vec::Zero(pb.sp().n_w));
  const auto at = [t](const VectorExpr& e, Point p) { return e.eval(p, t); };
  return with_offset(pb, mech_load_impl(pb, at, at));
}

Vec mechanical_load_limit(const Problem& pb) {
  if (pb.src.f.is_zero() && pb.src.g.is_zero()) return with_offset(pb, Vec::Zero(pb.sp().n_w));
  const auto at = [](const VectorExpr& e, Point p) { return e.eval_limit(p); };
  return with_offset(pb, mech_load_impl(pb, at, at));
}

// ---------------------------------------------------------------------------

Vec momentum_kernel(const Vec& u, const Vec& u_prev, const Vec& chi, const Vec& theta,
                    double inv_dt, const Vec& load, const Problem& pb) {
  const auto& sp = pb.sp();
  const auto& f = pb.forms;
  const auto p = pb.rp.yosida();
  Vec r = f.a * u + f.div.transpose() * theta - load;
  if (inv_dt != 0.0) r += inv_dt * (f.b * (u - u_prev));
  for (const auto& seg : sp.contact_segments)
    for (int q = 0; q < 2; ++q) {
      const double w = seg.length / 2.0;
      const double pc = prox::pos_part_mu(p, seg_interp(chi, seg.node, q));
      const Point uq = seg_disp(sp, u, seg, q);
      const double eta = prox::yosida_impen(p, dot(uq, seg.normal));
      const Point force = pc * uq + eta * seg.normal;
      for (int a = 0; a < 2; ++a) {
        const double b = w * seg_basis(q, a);
        const int dx = sp.w_dof[2 * seg.parent[a]];
        const int dy = sp.w_dof[2 * seg.parent[a] + 1];
        if (dx >= 0) r[dx] += b * force.x;
        if (dy >= 0) r[dy] += b * force.y;
      }
    }
  return r;
}

SpMat momentum_jacobian(const Vec& u, const Vec& chi, double inv_dt, const Problem& pb) {
  const auto& sp = pb.sp();
  const auto p = pb.rp.yosida();
  std::vector<Triplet> t;
  for (const auto& seg : sp.contact_segments)
    for (int q = 0; q < 2; ++q) {
      const double w = seg.length / 2.0;
      const double pc = prox::pos_part_mu(p, seg_interp(chi, seg.node, q));
      const Point uq = seg_disp(sp, u, seg, q);
      const double deta = prox::yosida_impen_deriv(p, dot(uq, seg.normal));
      const double n[2] = {seg.normal.x, seg.normal.y};
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const double wab = w * seg_basis(q, a) * seg_basis(q, b);
          for (int c = 0; c < 2; ++c) {
            const int di = sp.w_dof[2 * seg.parent[a] + c];
            if (di < 0) continue;
            for (int d = 0; d < 2; ++d) {
              const int dj = sp.w_dof[2 * seg.parent[b] + d];
              if (dj < 0) continue;
              const double v = wab * ((c == d ? pc : 0.0) + deta * n[c] * n[d]);
              if (v != 0.0) t.emplace_back(di, dj, v);
            }
          }
        }
    }
  SpMat j = from_triplets(sp.n_w, sp.n_w, t);
  j += pb.forms.a;
  if (inv_dt != 0.0) j += inv_dt * pb.forms.b;
  return j;
}

SpMat momentum_chi_coupling(const Vec& u, const Vec& chi, const Problem& pb) {
  const auto& sp = pb.sp();
  const auto p = pb.rp.yosida();
  std::vector<Triplet> t;
  for (const auto& seg : sp.contact_segments)
    for (int q = 0; q < 2; ++q) {
      const double w = seg.length / 2.0;
      const double hc = prox::heaviside_mu(p, seg_interp(chi, seg.node, q));
      if (hc == 0.0) continue;
      const Point uq = seg_disp(sp, u, seg, q);
      const double uc[2] = {uq.x, uq.y};
      for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 2; ++c) {
          const int di = sp.w_dof[2 * seg.parent[a] + c];
          if (di < 0) continue;
          for (int b = 0; b < 2; ++b)
            t.emplace_back(di, seg.node[b], w * hc * uc[c] * seg_basis(q, a) * seg_basis(q, b));
        }
    }
  return from_triplets(sp.n_w, sp.n_s, t);
}

Vec damage_kernel(const Vec& chi, const Vec& chi_prev, const Vec& theta_s, const Vec& u,
                  double inv_dt, const Problem& pb) {
  const auto& sp = pb.sp();
  const auto& mat = pb.mat;
  const auto p = pb.rp.yosida();
  Vec r = pb.forms.stiff_s * chi;
  if (inv_dt != 0.0) r += inv_dt * (pb.forms.mass_s * (chi - chi_prev));
  for (const auto& seg : sp.contact_segments)
    for (int q = 0; q < 2; ++q) {
      const double w = seg.length / 2.0;
      const double c = seg_interp(chi, seg.node, q);
      const double ts = seg_interp(theta_s, seg.node, q);
      const Point uq = seg_disp(sp, u, seg, q);
      const double src = prox::yosida_beta(p, mat.constraint, c) + mat.sigma_d(c) +
                         mat.lambda_d(c) * ts + 0.5 * prox::heaviside_mu(p, c) * dot(uq, uq);
      for (int a = 0; a < 2; ++a) r[seg.node[a]] += w * seg_basis(q, a) * src;
    }
  return r;
}

SpMat damage_jacobian(const Vec& chi, const Vec& theta_s, const Vec& u, double inv_dt,
                      const Problem& pb) {
  const auto& sp = pb.sp();
  const auto& mat = pb.mat;
  const auto p = pb.rp.yosida();
  std::vector<Triplet> t;
  for (const auto& seg : sp.contact_segments)
    for (int q = 0; q < 2; ++q) {
      const double w = seg.length / 2.0;
      const double c = seg_interp(chi, seg.node, q);
      const double ts = seg_interp(theta_s, seg.node, q);
      const Point uq = seg_disp(sp, u, seg, q);
      const double d = prox::yosida_beta_deriv(p, mat.constraint, c) + mat.sigma_dd(c) +
                       mat.lambda_dd(c) * ts +
                       0.5 * prox::heaviside_mu_deriv(p, c) * dot(uq, uq);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          t.emplace_back(seg.node[a], seg.node[b], w * d * seg_basis(q, a) * seg_basis(q, b));
    }
  SpMat j = from_triplets(sp.n_s, sp.n_s, t);
  j += pb.forms.stiff_s;
  if (inv_dt != 0.0) j += inv_dt * pb.forms.mass_s;
  return j;
}

Vec entropy_kernel(const State& st, const State& prev, double inv_dt, const Vec& h_load,
                   const Problem& pb) {
  const auto& sp = pb.sp();
  const auto& f = pb.forms;
  const auto& mat = pb.mat;
  const auto p = pb.rp.yosida();
  const double eps = pb.rp.eps;
  const int nv = sp.n_v;
  Vec r(nv + sp.n_s);
  auto bulk = r.head(nv);
  auto surf = r.tail(sp.n_s);

  const Vec dth = st.theta - prev.theta;
  const Vec dts = st.theta_s - prev.theta_s;
  bulk = f.stiff_v * st.theta - h_load;
  surf = f.stiff_s * st.theta_s;
  if (inv_dt != 0.0) {
    bulk += (eps * inv_dt) * (f.mass_v * dth + f.stiff_v * dth) -
            inv_dt * (f.div * (st.u - prev.u));
    surf += (eps * inv_dt) * (f.mass_s * dts + f.stiff_s * dts);
    for (const auto& tr : sp.triangles)
      for (int q = 0; q < 3; ++q) {
        const double dl = prox::yosida_ln(p, tri_interp(st.theta, tr, q)) -
                          prox::yosida_ln(p, tri_interp(prev.theta, tr, q));
        const double w = inv_dt * dl * tr.area / 3.0;
        for (int k = 0; k < 3; ++k) bulk[tr.v[k]] += w * kTriLam[q][k];
      }
  }
  for (const auto& seg : sp.contact_segments)
    for (int q = 0; q < 2; ++q) {
      const double w = seg.length / 2.0;
      const double c = seg_interp(st.chi, seg.node, q);
      const double th = seg_interp(st.theta, seg.parent, q);
      const double ts = seg_interp(st.theta_s, seg.node, q);
      const double ex = w * mat.k(c) * (th - ts);
      double s = -ex;
      if (inv_dt != 0.0) {
        const double cp = seg_interp(prev.chi, seg.node, q);
        const double tsp = seg_interp(prev.theta_s, seg.node, q);
        s += w * inv_dt *
             ((prox::yosida_ln(p, ts) - prox::yosida_ln(p, tsp)) - (mat.lambda(c) - mat.lambda(cp)));
      }
      for (int a = 0; a < 2; ++a) {
        bulk[seg.parent[a]] += ex * seg_basis(q, a);
        surf[seg.node[a]] += s * seg_basis(q, a);
      }
    }
  return r;
}

SpMat entropy_jacobian(const State& st, double inv_dt, const Problem& pb) {
  const auto& sp = pb.sp();
  const auto& f = pb.forms;
  const auto& mat = pb.mat;
  const auto p = pb.rp.yosida();
  const double eps = pb.rp.eps;
  const int nv = sp.n_v;
  std::vector<Triplet> t;
  const auto push_block = [&t](const SpMat& m, double scale, int off) {
    for (int k = 0; k < m.outerSize(); ++k)
      for (SpMat::InnerIterator it(m, k); it; ++it)
        t.emplace_back(static_cast<int>(it.row()) + off, static_cast<int>(it.col()) + off,
                       scale * it.value());
  };
  push_block(f.stiff_v, 1.0 + eps * inv_dt, 0);
  push_block(f.stiff_s, 1.0 + eps * inv_dt, nv);
  if (inv_dt != 0.0) {
    push_block(f.mass_v, eps * inv_dt, 0);
    push_block(f.mass_s, eps * inv_dt, nv);
    for (const auto& tr : sp.triangles)
      for (int q = 0; q < 3; ++q) {
        const double d = inv_dt * prox::yosida_ln_deriv(p, tri_interp(st.theta, tr, q)) *
                         tr.area / 3.0;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            t.emplace_back(tr.v[i], tr.v[j], d * kTriLam[q][i] * kTriLam[q][j]);
      }
  }
  for (const auto& seg : sp.contact_segments)
    for (int q = 0; q < 2; ++q) {
      const double w = seg.length / 2.0;
      const double k = w * mat.k(seg_interp(st.chi, seg.node, q));
      const double dl =
          inv_dt != 0.0
              ? w * inv_dt * prox::yosida_ln_deriv(p, seg_interp(st.theta_s, seg.node, q))
              : 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const double bb = seg_basis(q, a) * seg_basis(q, b);
          const int va = seg.parent[a], vb = seg.parent[b];
          const int sa = nv + seg.node[a], sb = nv + seg.node[b];
          t.emplace_back(va, vb, k * bb);
          t.emplace_back(va, sb, -k * bb);
          t.emplace_back(sa, vb, -k * bb);
          t.emplace_back(sa, sb, (k + dl) * bb);
        }
    }
  return from_triplets(nv + sp.n_s, nv + sp.n_s, t);
}

// ---------------------------------------------------------------------------

Vec momentum_residual(const State& st, const State& prev, double dt, const Problem& pb,
                      double t) {
  return momentum_kernel(st.u, prev.u, st.chi, st.theta, 1.0 / dt, mechanical_load(pb, t), pb);
}

Vec damage_residual(const State& st, const State& prev, double dt, const Problem& pb) {
  return damage_kernel(st.chi, prev.chi, st.theta_s, st.u, 1.0 / dt, pb);
}

Vec bulk_entropy_residual(const State& st, const State& prev, double dt, const Problem& pb,
                          double t) {
  return entropy_kernel(st, prev, 1.0 / dt, entropy_load(pb, t), pb).head(pb.sp().n_v);
}

Vec surface_entropy_residual(const State& st, const State& prev, double dt, const Problem& pb) {
  return entropy_kernel(st, prev, 1.0 / dt, Vec::Zero(pb.sp().n_v), pb).tail(pb.sp().n_s);
}

// ---------------------------------------------------------------------------

EnergyBreakdown free_energy(const State& st, const Problem& pb) {
  const auto& sp = pb.sp();
  const auto& f = pb.forms;
  const auto& mat = pb.mat;
  const auto p = pb.rp.yosida();
  const prox::IMu imu(p);
  const double eps = pb.rp.eps;
  EnergyBreakdown e;
  e.mech = 0.5 * st.u.dot(f.a * st.u);
  e.adh = 0.5 * st.chi.dot(f.stiff_s * st.chi);
  double ith = 0.0;
  for (const auto& tr : sp.triangles)
    for (int q = 0; q < 3; ++q) {
      const double th = tri_interp(st.theta, tr, q);
      ith += imu(th) * tr.area / 3.0;
      e.mass_th += th * tr.area / 3.0;
    }
  for (const auto& seg : sp.contact_segments)
    for (int q = 0; q < 2; ++q) {
      const double w = seg.length / 2.0;
      const double c = seg_interp(st.chi, seg.node, q);
      const double ts = seg_interp(st.theta_s, seg.node, q);
      const Point uq = seg_disp(sp, st.u, seg, q);
      const double sg = mat.sigma(c);
      e.adh += w * (prox::beta_envelope(p, mat.constraint, c) + sg +
                    0.5 * prox::pos_part_mu(p, c) * dot(uq, uq));
      e.sigma_floor += w * sg;
      e.imp += w * prox::impen_envelope(p, dot(uq, seg.normal));
      ith += w * imu(ts);
      e.mass_th += w * ts;
    }
  e.th = ith + 0.5 * eps *
                   (st.theta.dot(f.mass_v * st.theta) + st.theta.dot(f.stiff_v * st.theta) +
                    st.theta_s.dot(f.mass_s * st.theta_s) + st.theta_s.dot(f.stiff_s * st.theta_s));
  e.total = e.mech + e.adh + e.imp + e.th;
  return e;
}

DissipationBreakdown dissipation_rate(const State& st, const State& prev, double dt,
                                      const Problem& pb) {
  const auto& sp = pb.sp();
  const auto& f = pb.forms;
  DissipationBreakdown d;
  const Vec ut = (st.u - prev.u) / dt;
  const Vec ct = (st.chi - prev.chi) / dt;
  d.grad_theta = st.theta.dot(f.stiff_v * st.theta);
  d.visc = ut.dot(f.b * ut);
  d.grad_theta_s = st.theta_s.dot(f.stiff_s * st.theta_s);
  d.chi_t = ct.dot(f.mass_s * ct);
  for (const auto& seg : sp.contact_segments)
    for (int q = 0; q < 2; ++q) {
      const double gap = seg_interp(st.theta, seg.parent, q) - seg_interp(st.theta_s, seg.node, q);
      d.exchange += seg.length / 2.0 * pb.mat.k(seg_interp(st.chi, seg.node, q)) * gap * gap;
    }
  d.total = d.grad_theta + d.visc + d.grad_theta_s + d.chi_t + d.exchange;
  return d;
}

ScalarDefects scalar_identity_defects(const State& st, const State& prev, double dt,
                                      const Problem& pb, double t) {
  const auto& sp = pb.sp();
  const auto& mat = pb.mat;
  const auto p = pb.rp.yosida();
  const double eps = pb.rp.eps;
  ScalarDefects out;
  const Vec du = st.u - prev.u;
  for (const auto& tr : sp.triangles) {
    double acc = -tri_div(sp, du, tr) * tr.area;
    for (int q = 0; q < 3; ++q) {
      const double th = tri_interp(st.theta, tr, q);
      const double thp = tri_interp(prev.theta, tr, q);
      acc += (eps * (th - thp) + prox::yosida_ln(p, th) - prox::yosida_ln(p, thp)) * tr.area / 3.0;
      acc -= dt * pb.src.h.eval(tri_point(sp, tr, q), t) * tr.area / 3.0;
    }
    out.bulk += acc;
  }
  for (const auto& seg : sp.contact_segments)
    for (int q = 0; q < 2; ++q) {
      const double w = seg.length / 2.0;
      const double c = seg_interp(st.chi, seg.node, q);
      const double cp = seg_interp(prev.chi, seg.node, q);
      const double th = seg_interp(st.theta, seg.parent, q);
      const double ts = seg_interp(st.theta_s, seg.node, q);
      const double tsp = seg_interp(prev.theta_s, seg.node, q);
      const double ex = dt * mat.k(c) * (th - ts);
      out.bulk += w * ex;
      out.surface += w * (eps * (ts - tsp) + prox::yosida_ln(p, ts) - prox::yosida_ln(p, tsp) -
                          (mat.lambda(c) - mat.lambda(cp)) - ex);
    }
  out.bulk /= dt;
  out.surface /= dt;
  return out;
}

double data_work(const State& st, const State& prev, double dt, const Problem& pb, double t) {
  return dt * entropy_load(pb, t).dot(st.theta) + mechanical_load(pb, t).dot(st.u - prev.u);
}

double surface_free_energy(const State& st, const Problem& pb) {
  const auto& sp = pb.sp();
  const auto& mat = pb.mat;
  const auto p = pb.rp.yosida();
  double g = 0.5 * st.chi.dot(pb.forms.stiff_s * st.chi);
  for (const auto& seg : sp.contact_segments)
    for (int q = 0; q < 2; ++q) {
      const double c = seg_interp(st.chi, seg.node, q);
      const double ts = seg_interp(st.theta_s, seg.node, q);
      const Point uq = seg_disp(sp, st.u, seg, q);
      g += seg.length / 2.0 *
           (prox::beta_envelope(p, mat.constraint, c) + mat.sigma(c) + mat.lambda(c) * ts +
            0.5 * prox::pos_part_mu(p, c) * dot(uq, uq));
    }
  return g;
}

// ---------------------------------------------------------------------------

double l2_norm_v(const Vec& v, const AssembledForms& f) { return std::sqrt(v.dot(f.mass_v * v)); }
double l2_norm_s(const Vec& s, const AssembledForms& f) { return std::sqrt(s.dot(f.mass_s * s)); }
double l2_norm_w(const Vec& w, const AssembledForms& f) { return std::sqrt(w.dot(f.mass_w * w)); }
double w_norm(const Vec& w, const AssembledForms& f) { return std::sqrt(w.dot(f.b * w)); }
double grad_norm_v(const Vec& v, const AssembledForms& f) {
  return std::sqrt(std::max(0.0, v.dot(f.stiff_v * v)));
}
double grad_norm_s(const Vec& s, const AssembledForms& f) {
  return std::sqrt(std::max(0.0, s.dot(f.stiff_s * s)));
}
double mean_v(const Vec& v, const AssembledForms& f) {
  return (f.mass_v * v).sum() / f.area;
}
double mean_s(const Vec& s, const AssembledForms& f) {
  return (f.mass_s * s).sum() / f.contact_length;
}

}  // namespace thermoadh::assembly
