#include "thermoadh/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "thermoadh/error.hpp"

namespace thermoadh::diagnostics {

const std::vector<std::string>& ledger_columns() {
  static const std::vector<std::string> cols = {
      "t",           "dt",           "E_mech",         "E_adh",          "E_imp",
      "E_th",        "L_total",      "D_total",        "D_grad_theta",   "D_visc",
      "D_grad_theta_s", "D_chi_t",   "D_exchange",     "min_theta",      "newton_iters",
      "min_theta_s", "mass_th",      "work",           "bulk_identity",  "surface_identity",
      "ind_u_t",     "ind_chi_t",    "ind_grad_theta", "ind_grad_theta_s", "ind_exchange",
      "mean_gap",    "sigma_floor"};
  return cols;
}

std::vector<double> ledger_values(const LedgerRow& r) {
  return {r.t,           r.dt,          r.E_mech,         r.E_adh,         r.E_imp,
          r.E_th,        r.L_total,     r.D_total,        r.D_grad_theta,  r.D_visc,
          r.D_grad_theta_s, r.D_chi_t,  r.D_exchange,     r.min_theta,
          static_cast<double>(r.newton_iters),
          r.min_theta_s, r.mass_th,     r.work,           r.bulk_identity, r.surface_identity,
          r.ind_u_t,     r.ind_chi_t,   r.ind_grad_theta, r.ind_grad_theta_s, r.ind_exchange,
          r.mean_gap,    r.sigma_floor};
}

const std::array<std::string, kIndicatorCount>& indicator_names() {
  static const std::array<std::string, kIndicatorCount> n = {
      "u_t", "chi_t", "grad_theta", "grad_theta_s", "theta_minus_theta_s"};
  return n;
}

std::array<double, kIndicatorCount> indicators(const LedgerRow& r) {
  return {r.ind_u_t, r.ind_chi_t, r.ind_grad_theta, r.ind_grad_theta_s, r.ind_exchange};
}

void EnergyLedger::append(const LedgerRow& row) {
  if (!rows_.empty() && !(row.t > rows_.back().t))
    throw Error("ledger times must be strictly increasing");
  rows_.push_back(row);
}

assembly::DissipationBreakdown recompute_dissipation(const State& st, const State& prev,
                                                     double dt, const assembly::Problem& pb) {
  const auto& sp = pb.sp();
  assembly::DissipationBreakdown d;
  const auto disp = [&](const Vec& u, int v, int c) {
    const int k = sp.w_dof[2 * v + c];
    return k >= 0 ? u[k] : 0.0;
  };
  for (const auto& tr : sp.triangles) {
    double gx = 0.0, gy = 0.0, exx = 0.0, eyy = 0.0, gam = 0.0;
    for (int k = 0; k < 3; ++k) {
      const int v = tr.v[k];
      gx += st.theta[v] * tr.grad[k].x;
      gy += st.theta[v] * tr.grad[k].y;
      const double rx = (disp(st.u, v, 0) - disp(prev.u, v, 0)) / dt;
      const double ry = (disp(st.u, v, 1) - disp(prev.u, v, 1)) / dt;
      exx += rx * tr.grad[k].x;
      eyy += ry * tr.grad[k].y;
      gam += rx * tr.grad[k].y + ry * tr.grad[k].x;
    }
    d.grad_theta += tr.area * (gx * gx + gy * gy);
    d.visc += tr.area * (exx * exx + eyy * eyy + 0.5 * gam * gam);
  }
  const double g = 0.5 / std::sqrt(3.0);
  for (const auto& seg : sp.contact_segments) {
    const int a = seg.node[0], b = seg.node[1];
    const double slope = (st.theta_s[b] - st.theta_s[a]) / seg.length;
    d.grad_theta_s += seg.length * slope * slope;
    const double ca = (st.chi[a] - prev.chi[a]) / dt;
    const double cb = (st.chi[b] - prev.chi[b]) / dt;
    d.chi_t += seg.length * (ca * ca + ca * cb + cb * cb) / 3.0;
    for (const double s : {0.5 - g, 0.5 + g}) {
      const double gap = (1.0 - s) * (st.theta[seg.parent[0]] - st.theta_s[a]) +
                         s * (st.theta[seg.parent[1]] - st.theta_s[b]);
      const double chi = (1.0 - s) * st.chi[a] + s * st.chi[b];
      d.exchange += 0.5 * seg.length * pb.mat.k(chi) * gap * gap;
    }
  }
  d.total = d.grad_theta + d.visc + d.grad_theta_s + d.chi_t + d.exchange;
  return d;
}

namespace {

void fill_state_terms(LedgerRow& row, const State& st, const assembly::Problem& pb) {
  const auto e = assembly::free_energy(st, pb);
  row.t = st.t;
  row.E_mech = e.mech;
  row.E_adh = e.adh;
  row.E_imp = e.imp;
  row.E_th = e.th;
  row.L_total = e.total;
  row.mass_th = e.mass_th;
  row.sigma_floor = e.sigma_floor;
  row.min_theta = st.theta.minCoeff();
  row.min_theta_s = st.theta_s.minCoeff();
  const auto& f = pb.forms;
  // Element-wise gradients: the quadratic form theta^T K theta loses all
  // digits to cancellation once theta is nearly constant.
  const auto d = recompute_dissipation(st, st, 1.0, pb);
  row.ind_grad_theta = std::sqrt(d.grad_theta);
  row.ind_grad_theta_s = std::sqrt(d.grad_theta_s);
  row.ind_exchange =
      assembly::l2_norm_s(Vec(pb.sp().trace_v * st.theta) - st.theta_s, f);
  row.mean_gap = std::abs(assembly::mean_v(st.theta, f) - assembly::mean_s(st.theta_s, f));
}

}  // namespace

void ledger_start(EnergyLedger& ledger, const State& st, const assembly::Problem& pb) {
  LedgerRow row;
  fill_state_terms(row, st, pb);
  ledger.append(row);
}

void ledger_append(EnergyLedger& ledger, const State& st, const State& prev, double dt,
                   const assembly::Problem& pb, const stepper::StepReport& rep) {
  LedgerRow row;
  fill_state_terms(row, st, pb);
  row.dt = dt;
  const auto d = recompute_dissipation(st, prev, dt, pb);
  row.D_total = d.total;
  row.D_grad_theta = d.grad_theta;
  row.D_visc = d.visc;
  row.D_grad_theta_s = d.grad_theta_s;
  row.D_chi_t = d.chi_t;
  row.D_exchange = d.exchange;
  row.newton_iters = rep.newton_iters();
  row.work = assembly::data_work(st, prev, dt, pb, st.t);
  row.bulk_identity = rep.defects.bulk;
  row.surface_identity = rep.defects.surface;
  row.ind_u_t = std::sqrt(d.visc);
  row.ind_chi_t = std::sqrt(d.chi_t);
  ledger.append(row);
}

double data_norm(const assembly::Problem& pb, double t_end, int samples) {
  if (samples < 1 || !(t_end > 0.0)) return 0.0;
  const auto at = [&](double t) {
    const Vec h = assembly::entropy_load(pb, t);
    const Vec f = assembly::mechanical_load(pb, t);
    return std::sqrt(std::max(0.0, h.dot(h))) + f.norm();
  };
  double acc = 0.0;
  double prev = at(0.0);
  for (int i = 1; i <= samples; ++i) {
    const double t = t_end * i / samples;
    const double cur = at(t);
    acc += 0.5 * (prev + cur) * (t_end / samples);
    prev = cur;
  }
  return acc;
}

OmegaLimitReport detect_equilibrium(const EnergyLedger& ledger, double window, double tol) {
  if (!(window > 0.0)) throw Error("detect_equilibrium: window must be > 0");
  const auto& rows = ledger.rows();
  if (rows.size() < 2 || rows.back().t - rows.front().t < window)
    throw InsufficientHistory("ledger spans " +
                              std::to_string(rows.empty() ? 0.0
                                                          : rows.back().t - rows.front().t) +
                              ", window needs " + std::to_string(window));
  OmegaLimitReport rep;
  rep.window = window;
  rep.t_end = rows.back().t;
  rep.mean_gap = rows.back().mean_gap;
  const double t0 = rows.back().t - window;
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    // The first row has no rates; it only counts through its state terms.
    if (it->t < t0) break;
    const auto ind = indicators(*it);
    for (int k = 0; k < kIndicatorCount; ++k) rep.sup[k] = std::max(rep.sup[k], ind[k]);
  }
  rep.equilibrium = std::all_of(rep.sup.begin(), rep.sup.end(), [tol](double v) { return v < tol; });
  return rep;
}

DistanceRecord compare_to_stationary(const State& terminal, const stationary::StationaryState& ss,
                                     const assembly::Problem& pb) {
  const auto& sp = pb.sp();
  if (terminal.theta.size() != sp.n_v || terminal.theta_s.size() != sp.n_s ||
      terminal.u.size() != ss.u.size() || terminal.chi.size() != ss.chi.size() ||
      ss.u.size() != sp.n_w || ss.chi.size() != sp.n_s)
    throw Error("compare_to_stationary: mesh mismatch");
  const auto& f = pb.forms;
  const auto maxabs = [](const Vec& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; };
  DistanceRecord d;
  const Vec dth = terminal.theta.array() - ss.theta_bar;
  const Vec dts = terminal.theta_s.array() - ss.theta_bar;
  const Vec du = terminal.u - ss.u;
  const Vec dc = terminal.chi - ss.chi;
  d.theta_l2 = assembly::l2_norm_v(dth, f);
  d.theta_max = maxabs(dth);
  d.theta_s_l2 = assembly::l2_norm_s(dts, f);
  d.theta_s_max = maxabs(dts);
  d.u_l2 = assembly::l2_norm_w(du, f);
  d.u_max = maxabs(du);
  d.chi_l2 = assembly::l2_norm_s(dc, f);
  d.chi_max = maxabs(dc);
  return d;
}

EnergyLawCheck check_energy_law(const EnergyLedger& ledger) {
  EnergyLawCheck c;
  const auto& rows = ledger.rows();
  if (rows.empty()) return c;
  double work = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double prev = rows[i - 1].L_total;
    const double scale = std::max(std::abs(prev), std::numeric_limits<double>::min());
    c.max_rel_uptick = std::max(c.max_rel_uptick, (rows[i].L_total - prev) / scale);
    c.dissipated += rows[i].dt * rows[i].D_total;
    work += rows[i].work;
  }
  c.drop = rows.front().L_total - rows.back().L_total + work;
  c.balance_ratio = c.dissipated > 0.0 ? c.drop / c.dissipated : 1.0;
  return c;
}

std::array<double, kIndicatorCount> indicator_slopes(const EnergyLedger& ledger, double fraction) {
  std::array<double, kIndicatorCount> slope{};
  const auto& rows = ledger.rows();
  if (rows.size() < 3) return slope;
  const double t1 = rows.back().t;
  const double t0 = t1 - fraction * (t1 - rows.front().t);
  for (int k = 0; k < kIndicatorCount; ++k) {
    double n = 0, st = 0, sv = 0, stt = 0, stv = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i].t < t0) continue;
      const double t = rows[i].t, v = indicators(rows[i])[k];
      n += 1;
      st += t;
      sv += v;
      stt += t * t;
      stv += t * v;
    }
    const double den = n * stt - st * st;
    slope[k] = (n >= 2 && den > 0.0) ? (n * stv - st * sv) / den : 0.0;
  }
  return slope;
}

}  // namespace thermoadh::diagnostics
