#include "thermoadh/verification/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include <Eigen/Dense>

#include "thermoadh/error.hpp"

namespace thermoadh::verification {

namespace {

constexpr double kTri[3][3] = {{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
                               {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
                               {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}};

double gauss_xi(int q) { return 0.5 + (q == 0 ? -0.5 : 0.5) / std::sqrt(3.0); }

using Mat2 = Eigen::Matrix2d;

double ddot(const Mat2& a, const Mat2& b) { return (a.array() * b.array()).sum(); }
Mat2 sym(const Mat2& h) { return 0.5 * (h + h.transpose()); }

double pos_part(double mu, double x) {
  if (x <= 0.0) return 0.0;
  return x < mu ? x * x / (2.0 * mu) : x - 0.5 * mu;
}
double heaviside(double mu, double x) { return std::clamp(x / mu, 0.0, 1.0); }

double beta(const MaterialLaws& m, double mu, double x) {
  if (const auto* b = std::get_if<prox::BoxConstraint>(&m.constraint))
    return (x - std::clamp(x, b->lo, b->hi)) / mu;
  return prox::yosida_beta(prox::YosidaParam(mu), m.constraint, x);
}
double beta_hat(const MaterialLaws& m, double mu, double x) {
  if (const auto* b = std::get_if<prox::BoxConstraint>(&m.constraint)) {
    const double d = x - std::clamp(x, b->lo, b->hi);
    return d * d / (2.0 * mu);
  }
  return prox::beta_envelope(prox::YosidaParam(mu), m.constraint, x);
}

}  // namespace

double DenseOracle::log_resolvent(double mu, double x) {
  const auto g = [&](double z) { return std::exp(z) + mu * z - x; };
  double lo = -1.0, hi = 1.0;
  while (g(lo) > 0.0) lo *= 2.0;
  while (g(hi) < 0.0) hi *= 2.0;
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (g(mid) > 0.0 ? hi : lo) = mid;
  }
  return std::abs(g(lo)) < std::abs(g(hi)) ? lo : hi;
}

DenseOracle::DenseOracle(const assembly::Problem& pb) : pb_(&pb) {
  const auto& sp = pb.sp();
  const auto& body = *sp.body;
  const auto& surf = *sp.surface;
  x_ = body.vertices;
  nv_ = static_cast<int>(x_.size());
  ns_ = static_cast<int>(surf.nodes.size());

  for (const auto& t : body.triangles) {
    Eigen::Matrix3d a;
    for (int k = 0; k < 3; ++k) a.col(k) << x_[t[k]].x, x_[t[k]].y, 1.0;
    tris_.push_back({t, 0.5 * std::abs(a.determinant()), a.inverse()});
  }

  std::unordered_map<int, int> node_of;
  for (int s = 0; s < ns_; ++s) node_of[surf.parent[s]] = s;
  std::vector<char> clamped(nv_, 0);
  for (const auto& e : body.boundary_edges) {
    const Point d = x_[e.v[1]] - x_[e.v[0]];
    const double len = std::hypot(d.x, d.y);
    Seg s{e.v, {-1, -1}, {d.y / len, -d.x / len}, len};
    if (e.tag == mesh::BoundaryTag::Contact) {
      s.s = {node_of.at(e.v[0]), node_of.at(e.v[1])};
      contact_.push_back(s);
    } else if (e.tag == mesh::BoundaryTag::Traction) {
      traction_.push_back(s);
    } else {
      clamped[e.v[0]] = clamped[e.v[1]] = 1;
    }
  }
  dof_ = sp.w_dof;
  for (int v = 0; v < nv_; ++v)
    for (int c = 0; c < 2; ++c) {
      if ((dof_[2 * v + c] < 0) != static_cast<bool>(clamped[v]))
        throw Error("oracle: clamped set disagrees with the dof map");
      if (dof_[2 * v + c] >= 0) nw_ = std::max(nw_, dof_[2 * v + c] + 1);
    }
}

Eigen::Vector3d DenseOracle::bary(const Tri& t, Point p) const {
  return t.inv * Eigen::Vector3d(p.x, p.y, 1.0);
}

Point DenseOracle::tri_qp(const Tri& t, int q) const {
  Point p;
  for (int k = 0; k < 3; ++k) p = p + kTri[q][k] * x_[t.v[k]];
  return p;
}

Point DenseOracle::seg_qp(const Seg& s, int q) const {
  const double xi = gauss_xi(q);
  return (1.0 - xi) * x_[s.v[0]] + xi * x_[s.v[1]];
}

double DenseOracle::seg_coord(const Seg& s, Point p) const {
  const Point d = x_[s.v[1]] - x_[s.v[0]];
  return dot(p - x_[s.v[0]], d) / dot(d, d);
}

double DenseOracle::dofval(const Vec& u, int v, int c) const {
  const int d = dof_[2 * v + c];
  return d >= 0 ? u[d] : 0.0;
}

Vec DenseOracle::load(double t) const {
  const auto& src = pb_->src;
  Vec r = Vec::Zero(nw_);
  for (const auto& tr : tris_)
    for (int q = 0; q < 3; ++q) {
      const Point p = tri_qp(tr, q);
      const Eigen::Vector3d l = bary(tr, p);
      const Point f = src.f.eval(p, t);
      for (int k = 0; k < 3; ++k) {
        if (dof_[2 * tr.v[k]] >= 0) r[dof_[2 * tr.v[k]]] += tr.area / 3.0 * l[k] * f.x;
        if (dof_[2 * tr.v[k] + 1] >= 0) r[dof_[2 * tr.v[k] + 1]] += tr.area / 3.0 * l[k] * f.y;
      }
    }
  for (const auto& e : traction_)
    for (int q = 0; q < 2; ++q) {
      const Point p = seg_qp(e, q);
      const double xi = seg_coord(e, p);
      const Point g = src.g.eval(p, t);
      const double b[2] = {1.0 - xi, xi};
      for (int a = 0; a < 2; ++a) {
        if (dof_[2 * e.v[a]] >= 0) r[dof_[2 * e.v[a]]] += e.len / 2.0 * b[a] * g.x;
        if (dof_[2 * e.v[a] + 1] >= 0) r[dof_[2 * e.v[a] + 1]] += e.len / 2.0 * b[a] * g.y;
      }
    }
  if (pb_->load_offset.size() == nw_) r += pb_->load_offset;
  return r;
}

Vec DenseOracle::momentum_impl(const Vec& u, const Vec& u_prev, const Vec& chi,
                               const Vec& theta, double inv_dt, const Vec& load) const {
  const double lam = pb_->mat.lame_lambda, mu_e = pb_->mat.lame_mu;
  const double mu = pb_->rp.mu;
  Vec r = -load;
  for (const auto& tr : tris_)
    for (int q = 0; q < 3; ++q) {
      const Point p = tri_qp(tr, q);
      const Eigen::Vector3d l = bary(tr, p);
      Mat2 hu = Mat2::Zero(), hd = Mat2::Zero();
      double th = 0.0;
      for (int k = 0; k < 3; ++k) {
        const Eigen::Vector2d g(tr.inv(k, 0), tr.inv(k, 1));
        for (int c = 0; c < 2; ++c) {
          hu.row(c) += dofval(u, tr.v[k], c) * g.transpose();
          hd.row(c) += (dofval(u, tr.v[k], c) - dofval(u_prev, tr.v[k], c)) * g.transpose();
        }
        th += l[k] * theta[tr.v[k]];
      }
      const Mat2 eu = sym(hu), ed = sym(hd);
      for (int k = 0; k < 3; ++k)
        for (int c = 0; c < 2; ++c) {
          const int d = dof_[2 * tr.v[k] + c];
          if (d < 0) continue;
          Mat2 hp = Mat2::Zero();
          hp(c, 0) = tr.inv(k, 0);
          hp(c, 1) = tr.inv(k, 1);
          const Mat2 ep = sym(hp);
          const double divp = hp.trace();
          double v = lam * hu.trace() * divp + 2.0 * mu_e * ddot(eu, ep) + th * divp;
          if (inv_dt != 0.0) v += inv_dt * ddot(ed, ep);
          r[d] += tr.area / 3.0 * v;
        }
    }
  for (const auto& s : contact_)
    for (int q = 0; q < 2; ++q) {
      const double xi = seg_coord(s, seg_qp(s, q));
      const double b[2] = {1.0 - xi, xi};
      const double c = b[0] * chi[s.s[0]] + b[1] * chi[s.s[1]];
      Eigen::Vector2d uq = Eigen::Vector2d::Zero();
      for (int a = 0; a < 2; ++a)
        uq += b[a] * Eigen::Vector2d(dofval(u, s.v[a], 0), dofval(u, s.v[a], 1));
      const Eigen::Vector2d n(s.n.x, s.n.y);
      const Eigen::Vector2d force = pos_part(mu, c) * uq + std::max(uq.dot(n), 0.0) / mu * n;
      for (int a = 0; a < 2; ++a)
        for (int cc = 0; cc < 2; ++cc) {
          const int d = dof_[2 * s.v[a] + cc];
          if (d >= 0) r[d] += s.len / 2.0 * b[a] * force[cc];
        }
    }
  return r;
}

Vec DenseOracle::damage_impl(const Vec& chi, const Vec& chi_prev, const Vec& theta_s,
                             const Vec& u, double inv_dt) const {
  const auto& m = pb_->mat;
  const double mu = pb_->rp.mu;
  Vec r = Vec::Zero(ns_);
  for (const auto& s : contact_) {
    const double dchi = (chi[s.s[1]] - chi[s.s[0]]) / s.len;
    const double db[2] = {-1.0 / s.len, 1.0 / s.len};
    for (int q = 0; q < 2; ++q) {
      const double xi = seg_coord(s, seg_qp(s, q));
      const double b[2] = {1.0 - xi, xi};
      const double c = b[0] * chi[s.s[0]] + b[1] * chi[s.s[1]];
      const double cp = b[0] * chi_prev[s.s[0]] + b[1] * chi_prev[s.s[1]];
      const double ts = b[0] * theta_s[s.s[0]] + b[1] * theta_s[s.s[1]];
      double u2 = 0.0;
      for (int cc = 0; cc < 2; ++cc) {
        const double uc = b[0] * dofval(u, s.v[0], cc) + b[1] * dofval(u, s.v[1], cc);
        u2 += uc * uc;
      }
      double src = beta(m, mu, c) + m.sigma_d(c) + m.lambda_d(c) * ts + 0.5 * heaviside(mu, c) * u2;
      if (inv_dt != 0.0) src += inv_dt * (c - cp);
      for (int a = 0; a < 2; ++a) r[s.s[a]] += s.len / 2.0 * (src * b[a] + dchi * db[a]);
    }
  }
  return r;
}

Vec DenseOracle::momentum(const State& st, const State& prev, double dt, double t) const {
  return momentum_impl(st.u, prev.u, st.chi, st.theta, 1.0 / dt, load(t));
}

Vec DenseOracle::damage(const State& st, const State& prev, double dt) const {
  return damage_impl(st.chi, prev.chi, st.theta_s, st.u, 1.0 / dt);
}

Vec DenseOracle::bulk_entropy(const State& st, const State& prev, double dt, double t) const {
  const double mu = pb_->rp.mu, eps = pb_->rp.eps, inv_dt = 1.0 / dt;
  Vec r = Vec::Zero(nv_);
  for (const auto& tr : tris_)
    for (int q = 0; q < 3; ++q) {
      const Point p = tri_qp(tr, q);
      const Eigen::Vector3d l = bary(tr, p);
      double th = 0.0, thp = 0.0, divd = 0.0;
      Eigen::Vector2d gth = Eigen::Vector2d::Zero(), gdth = Eigen::Vector2d::Zero();
      for (int k = 0; k < 3; ++k) {
        const Eigen::Vector2d g(tr.inv(k, 0), tr.inv(k, 1));
        th += l[k] * st.theta[tr.v[k]];
        thp += l[k] * prev.theta[tr.v[k]];
        gth += st.theta[tr.v[k]] * g;
        gdth += (st.theta[tr.v[k]] - prev.theta[tr.v[k]]) * g;
        for (int c = 0; c < 2; ++c)
          divd += (dofval(st.u, tr.v[k], c) - dofval(prev.u, tr.v[k], c)) * g[c];
      }
      const double dln = log_resolvent(mu, th) - log_resolvent(mu, thp);
      const double h = pb_->src.h.eval(p, t);
      for (int k = 0; k < 3; ++k) {
        const Eigen::Vector2d g(tr.inv(k, 0), tr.inv(k, 1));
        const double v = eps * inv_dt * ((th - thp) * l[k] + gdth.dot(g)) +
                         inv_dt * dln * l[k] - inv_dt * divd * l[k] + gth.dot(g) - h * l[k];
        r[tr.v[k]] += tr.area / 3.0 * v;
      }
    }
  for (const auto& s : contact_)
    for (int q = 0; q < 2; ++q) {
      const double xi = seg_coord(s, seg_qp(s, q));
      const double b[2] = {1.0 - xi, xi};
      const double c = b[0] * st.chi[s.s[0]] + b[1] * st.chi[s.s[1]];
      const double th = b[0] * st.theta[s.v[0]] + b[1] * st.theta[s.v[1]];
      const double ts = b[0] * st.theta_s[s.s[0]] + b[1] * st.theta_s[s.s[1]];
      for (int a = 0; a < 2; ++a) r[s.v[a]] += s.len / 2.0 * pb_->mat.k(c) * (th - ts) * b[a];
    }
  return r;
}

Vec DenseOracle::surface_entropy(const State& st, const State& prev, double dt) const {
  const double mu = pb_->rp.mu, eps = pb_->rp.eps, inv_dt = 1.0 / dt;
  const auto& m = pb_->mat;
  Vec r = Vec::Zero(ns_);
  for (const auto& s : contact_) {
    const double db[2] = {-1.0 / s.len, 1.0 / s.len};
    const double gts = (st.theta_s[s.s[1]] - st.theta_s[s.s[0]]) / s.len;
    const double gdts = gts - (prev.theta_s[s.s[1]] - prev.theta_s[s.s[0]]) / s.len;
    for (int q = 0; q < 2; ++q) {
      const double xi = seg_coord(s, seg_qp(s, q));
      const double b[2] = {1.0 - xi, xi};
      const auto at = [&](const Vec& f) { return b[0] * f[s.s[0]] + b[1] * f[s.s[1]]; };
      const double c = at(st.chi), cp = at(prev.chi);
      const double ts = at(st.theta_s), tsp = at(prev.theta_s);
      const double th = b[0] * st.theta[s.v[0]] + b[1] * st.theta[s.v[1]];
      const double dln = log_resolvent(mu, ts) - log_resolvent(mu, tsp);
      for (int a = 0; a < 2; ++a) {
        const double v = eps * inv_dt * ((ts - tsp) * b[a] + gdts * db[a]) + inv_dt * dln * b[a] -
                         inv_dt * (m.lambda(c) - m.lambda(cp)) * b[a] + gts * db[a] -
                         m.k(c) * (th - ts) * b[a];
        r[s.s[a]] += s.len / 2.0 * v;
      }
    }
  }
  return r;
}

double DenseOracle::free_energy(const State& st) const {
  const double lam = pb_->mat.lame_lambda, mu_e = pb_->mat.lame_mu;
  const double mu = pb_->rp.mu, eps = pb_->rp.eps;
  const auto& m = pb_->mat;
  const double z0 = log_resolvent(mu, 0.0);
  const auto imu = [&](double x) {
    const double z = log_resolvent(mu, x);
    return std::exp(z) - std::exp(z0) + 0.5 * mu * (z * z - z0 * z0);
  };
  double e = 0.0;
  for (const auto& tr : tris_)
    for (int q = 0; q < 3; ++q) {
      const Eigen::Vector3d l = bary(tr, tri_qp(tr, q));
      Mat2 hu = Mat2::Zero();
      double th = 0.0;
      Eigen::Vector2d gth = Eigen::Vector2d::Zero();
      for (int k = 0; k < 3; ++k) {
        const Eigen::Vector2d g(tr.inv(k, 0), tr.inv(k, 1));
        for (int c = 0; c < 2; ++c) hu.row(c) += dofval(st.u, tr.v[k], c) * g.transpose();
        th += l[k] * st.theta[tr.v[k]];
        gth += st.theta[tr.v[k]] * g;
      }
      const Mat2 eu = sym(hu);
      const double w = tr.area / 3.0;
      e += w * (0.5 * (lam * hu.trace() * hu.trace() + 2.0 * mu_e * ddot(eu, eu)) + imu(th) +
                0.5 * eps * (th * th + gth.squaredNorm()));
    }
  for (const auto& s : contact_) {
    const double gc = (st.chi[s.s[1]] - st.chi[s.s[0]]) / s.len;
    const double gts = (st.theta_s[s.s[1]] - st.theta_s[s.s[0]]) / s.len;
    for (int q = 0; q < 2; ++q) {
      const double xi = seg_coord(s, seg_qp(s, q));
      const double b[2] = {1.0 - xi, xi};
      const double c = b[0] * st.chi[s.s[0]] + b[1] * st.chi[s.s[1]];
      const double ts = b[0] * st.theta_s[s.s[0]] + b[1] * st.theta_s[s.s[1]];
      Eigen::Vector2d uq = Eigen::Vector2d::Zero();
      for (int a = 0; a < 2; ++a)
        uq += b[a] * Eigen::Vector2d(dofval(st.u, s.v[a], 0), dofval(st.u, s.v[a], 1));
      const double un = std::max(uq.dot(Eigen::Vector2d(s.n.x, s.n.y)), 0.0);
      e += s.len / 2.0 *
           (0.5 * gc * gc + beta_hat(m, mu, c) + m.sigma(c) + 0.5 * pos_part(mu, c) * uq.squaredNorm() +
            un * un / (2.0 * mu) + imu(ts) + 0.5 * eps * (ts * ts + gts * gts));
    }
  }
  return e;
}

double DenseOracle::surface_free_energy(const State& st) const {
  const double mu = pb_->rp.mu;
  const auto& m = pb_->mat;
  double e = 0.0;
  for (const auto& s : contact_) {
    const double gc = (st.chi[s.s[1]] - st.chi[s.s[0]]) / s.len;
    for (int q = 0; q < 2; ++q) {
      const double xi = seg_coord(s, seg_qp(s, q));
      const double b[2] = {1.0 - xi, xi};
      const double c = b[0] * st.chi[s.s[0]] + b[1] * st.chi[s.s[1]];
      const double ts = b[0] * st.theta_s[s.s[0]] + b[1] * st.theta_s[s.s[1]];
      Eigen::Vector2d uq = Eigen::Vector2d::Zero();
      for (int a = 0; a < 2; ++a)
        uq += b[a] * Eigen::Vector2d(dofval(st.u, s.v[a], 0), dofval(st.u, s.v[a], 1));
      e += s.len / 2.0 *
           (0.5 * gc * gc + beta_hat(m, mu, c) + m.sigma(c) + m.lambda(c) * ts +
            0.5 * pos_part(mu, c) * uq.squaredNorm());
    }
  }
  return e;
}

double DenseOracle::dissipation(const State& st, const State& prev, double dt) const {
  const auto& m = pb_->mat;
  double d = 0.0;
  for (const auto& tr : tris_)
    for (int q = 0; q < 3; ++q) {
      Mat2 hd = Mat2::Zero();
      Eigen::Vector2d gth = Eigen::Vector2d::Zero();
      for (int k = 0; k < 3; ++k) {
        const Eigen::Vector2d g(tr.inv(k, 0), tr.inv(k, 1));
        for (int c = 0; c < 2; ++c)
          hd.row(c) += (dofval(st.u, tr.v[k], c) - dofval(prev.u, tr.v[k], c)) / dt * g.transpose();
        gth += st.theta[tr.v[k]] * g;
      }
      const Mat2 ed = sym(hd);
      d += tr.area / 3.0 * (gth.squaredNorm() + ddot(ed, ed));
    }
  for (const auto& s : contact_) {
    const double gts = (st.theta_s[s.s[1]] - st.theta_s[s.s[0]]) / s.len;
    for (int q = 0; q < 2; ++q) {
      const double xi = seg_coord(s, seg_qp(s, q));
      const double b[2] = {1.0 - xi, xi};
      const auto at = [&](const Vec& f) { return b[0] * f[s.s[0]] + b[1] * f[s.s[1]]; };
      const double ct = (at(st.chi) - at(prev.chi)) / dt;
      const double gap = b[0] * st.theta[s.v[0]] + b[1] * st.theta[s.v[1]] - at(st.theta_s);
      d += s.len / 2.0 * (gts * gts + ct * ct + m.k(at(st.chi)) * gap * gap);
    }
  }
  return d;
}

Vec DenseOracle::stationary(const Vec& u, const Vec& chi, double theta_bar,
                            const Vec& f_inf) const {
  Vec r(nw_ + ns_);
  r.head(nw_) = momentum_impl(u, u, chi, Vec::Constant(nv_, theta_bar), 0.0, f_inf);
  r.tail(ns_) = damage_impl(chi, chi, Vec::Constant(ns_, theta_bar), u, 0.0);
  return r;
}

// ---------------------------------------------------------------------------

namespace {

template <class F>
Eigen::MatrixXd fd_jacobian(const F& res, const Vec& x, int m) {
  Eigen::MatrixXd j(m, x.size());
  Vec xp = x;
  for (int i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
    xp[i] = x[i] + h;
    const Vec rp = res(xp);
    xp[i] = x[i] - h;
    const Vec rm = res(xp);
    xp[i] = x[i];
    j.col(i) = (rp - rm) / (2.0 * h);
  }
  return j;
}

// Damped Newton keeping the best iterate. Returns (residual, iterations).
template <class F>
std::pair<double, int> damped_newton(const F& res, Vec& x, double tol, int max_iters) {
  Vec r = res(x);
  double nr = r.lpNorm<Eigen::Infinity>();
  int it = 0;
  for (; it < max_iters && nr > tol; ++it) {
    const Eigen::MatrixXd j = fd_jacobian(res, x, static_cast<int>(r.size()));
    const Vec dx = j.fullPivLu().solve(-r);
    if (!dx.allFinite()) break;
    double alpha = 1.0;
    bool moved = false;
    for (int k = 0; k < 30; ++k, alpha *= 0.5) {
      const Vec xt = x + alpha * dx;
      const Vec rt = res(xt);
      if (rt.allFinite() && rt.norm() < r.norm()) {
        x = xt;
        r = rt;
        moved = true;
        break;
      }
    }
    if (!moved) break;
    nr = r.lpNorm<Eigen::Infinity>();
  }
  return {nr, it};
}

}  // namespace

OracleSolve monolithic_step(const DenseOracle& oracle, const State& prev, double dt,
                            const State& guess, double tol, int max_iters) {
  const int ns = static_cast<int>(prev.chi.size());
  const int nw = static_cast<int>(prev.u.size());
  const int nv = static_cast<int>(prev.theta.size());
  const double t = prev.t + dt;
  State st = prev;
  st.t = t;
  const auto unpack = [&](const Vec& x) {
    st.chi = x.segment(0, ns);
    st.u = x.segment(ns, nw);
    st.theta = x.segment(ns + nw, nv);
    st.theta_s = x.segment(ns + nw + nv, ns);
  };
  const auto res = [&](const Vec& x) {
    unpack(x);
    Vec r(x.size());
    r << oracle.damage(st, prev, dt), oracle.momentum(st, prev, dt, t),
        oracle.bulk_entropy(st, prev, dt, t), oracle.surface_entropy(st, prev, dt);
    return r;
  };
  Vec x(2 * ns + nw + nv);
  x << guess.chi, guess.u, guess.theta, guess.theta_s;
  const auto [nr, it] = damped_newton(res, x, tol, max_iters);
  unpack(x);
  OracleSolve out;
  out.state = st;
  refresh_aux(out.state, oracle.problem().sp(), oracle.problem().mat, oracle.problem().rp.yosida());
  out.residual = nr;
  out.iters = it;
  out.converged = nr <= tol;
  return out;
}

MultiStartResult multistart_stationary(const DenseOracle& oracle, const Vec& f_inf,
                                       double theta_bar, int starts, std::uint64_t seed,
                                       double u_amp, double chi_lo, double chi_hi, double tol) {
  const auto& pb = oracle.problem();
  const int nw = pb.sp().n_w, ns = pb.sp().n_s;
  const auto res = [&](const Vec& x) {
    return oracle.stationary(x.head(nw), x.tail(ns), theta_bar, f_inf);
  };
  MultiStartResult out;
  out.starts = starts;
  for (int k = 0; k < starts; ++k) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(k));
    std::uniform_real_distribution<double> du(-u_amp, u_amp), dc(chi_lo, chi_hi);
    Vec x(nw + ns);
    for (int i = 0; i < nw; ++i) x[i] = du(rng);
    for (int i = 0; i < ns; ++i) x[nw + i] = dc(rng);
    const auto [nr, it] = damped_newton(res, x, tol, 200);
    (void)it;
    if (nr > tol) continue;
    ++out.converged;
    const bool seen = std::any_of(out.solutions.begin(), out.solutions.end(), [&](const auto& s) {
      Vec y(nw + ns);
      y << s.u, s.chi;
      return (y - x).lpNorm<Eigen::Infinity>() < 1e-8;
    });
    if (seen) continue;
    stationary::StationaryState ss;
    ss.theta_bar = theta_bar;
    ss.u = x.head(nw);
    ss.chi = x.tail(ns);
    out.solutions.push_back(ss);
  }
  return out;
}

}  // namespace thermoadh::verification
