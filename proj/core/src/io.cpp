#include "thermoadh/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "thermoadh/error.hpp"

namespace thermoadh::io {

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw Error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot rename onto " + path.string());
  }
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string ledger_csv(const diagnostics::EnergyLedger& ledger) {
  std::ostringstream os;
  const auto& cols = diagnostics::ledger_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& row : ledger.rows()) {
    const auto vals = diagnostics::ledger_values(row);
    for (std::size_t i = 0; i < vals.size(); ++i) os << (i ? "," : "") << fmt(vals[i]);
    os << '\n';
  }
  return os.str();
}

namespace {

std::string snapshot_body(const Vec& theta, const Vec& theta_s, const Vec& u, const Vec& chi,
                          const assembly::Problem& pb) {
  const auto& sp = pb.sp();
  const Vec full = mesh::expand_displacement(sp, u);
  std::ostringstream os;
  const auto& verts = sp.body->vertices;
  for (std::size_t v = 0; v < verts.size(); ++v)
    os << "B " << v << ' ' << fmt(verts[v].x) << ' ' << fmt(verts[v].y) << ' ' << fmt(theta[v])
       << ' ' << fmt(full[2 * v]) << ' ' << fmt(full[2 * v + 1]) << '\n';
  const auto& s = *sp.surface;
  for (std::size_t k = 0; k < s.nodes.size(); ++k)
    os << "S " << k << ' ' << fmt(s.arclength[k]) << ' ' << fmt(s.nodes[k].x) << ' '
       << fmt(s.nodes[k].y) << ' ' << fmt(theta_s[k]) << ' ' << fmt(chi[k]) << '\n';
  return os.str();
}

}  // namespace

std::string snapshot_text(const State& st, const assembly::Problem& pb, double dt,
                          const std::string& time_token) {
  std::ostringstream os;
  os << "# time " << (time_token.empty() ? fmt(st.t) : time_token) << '\n'
     << "# dt " << fmt(dt) << '\n'
     << "# mu " << fmt(pb.rp.mu) << '\n'
     << "# eps " << fmt(pb.rp.eps) << '\n'
     << snapshot_body(st.theta, st.theta_s, st.u, st.chi, pb);
  return os.str();
}

std::string stationary_snapshot(const stationary::StationaryState& ss,
                                const assembly::Problem& pb) {
  const Vec th = Vec::Constant(pb.sp().n_v, ss.theta_bar);
  const Vec ts = Vec::Constant(pb.sp().n_s, ss.theta_bar);
  std::ostringstream os;
  os << "# time inf\n# dt 0\n# mu " << fmt(pb.rp.mu) << "\n# eps " << fmt(pb.rp.eps) << '\n'
     << snapshot_body(th, ts, ss.u, ss.chi, pb);
  return os.str();
}

std::string summary_json(const RunSummary& s) {
  using nlohmann::json;
  const auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json norms = json::object();
  for (const auto& [k, v] : s.final_norms) norms[k] = num(v);
  json extra = json::object();
  for (const auto& [k, v] : s.extra) extra[k] = num(v);
  json j = {{"run_id", s.run_id},
            {"params", {{"eps", s.eps}, {"mu", s.mu}}},
            {"equilibrium", s.equilibrium},
            {"theta_bar_estimate", num(s.theta_bar_estimate)},
            {"final_norms", norms},
            {"stationary_residual",
             s.stationary_residual ? num(*s.stationary_residual) : json(nullptr)},
            {"wall_time_s", s.wall_time_s},
            {"details", extra}};
  return j.dump(2) + "\n";
}

std::string plot_script(const std::string& ledger_name) {
  return R"(#!/usr/bin/env python3
"""Plot energy, dissipation and equilibrium indicators from a run ledger."""
import csv
import os
import sys

import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
path = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, ")" +
         ledger_name + R"(")
with open(path) as fh:
    rows = list(csv.DictReader(fh))
t = [float(r["t"]) for r in rows]


def col(name):
    return [float(r[name]) for r in rows]


fig, ax = plt.subplots(3, 1, figsize=(7, 9), sharex=True)
for name in ("L_total", "E_mech", "E_adh", "E_imp", "E_th"):
    ax[0].plot(t, col(name), label=name)
ax[0].set_ylabel("energy")
ax[0].legend()
ax[1].semilogy(t[1:], [max(v, 1e-300) for v in col("D_total")[1:]])
ax[1].set_ylabel("dissipation")
for name in ("ind_u_t", "ind_chi_t", "ind_grad_theta", "ind_grad_theta_s", "ind_exchange"):
    ax[2].semilogy(t[1:], [max(v, 1e-300) for v in col(name)[1:]], label=name)
ax[2].set_ylabel("indicators")
ax[2].set_xlabel("t")
ax[2].legend()
fig.tight_layout()
fig.savefig(os.path.join(os.path.dirname(path), "ledger.png"), dpi=120)
)";
}

}  // namespace thermoadh::io
