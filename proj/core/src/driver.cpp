#include "thermoadh/driver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "thermoadh/error.hpp"

namespace thermoadh::driver {

namespace fs = std::filesystem;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string step_name(int k) {
  std::ostringstream os;
  os << "snap_" << std::setw(6) << std::setfill('0') << k << ".txt";
  return os.str();
}

}  // namespace

assembly::Problem build_problem(const RunConfig& cfg) {
  std::shared_ptr<const mesh::Spaces> sp;
  try {
    sp = std::make_shared<const mesh::Spaces>(
        mesh::build_rect_spaces(cfg.geometry.nx, cfg.geometry.ny, cfg.geometry.rect));
  } catch (const MeshError& e) {
    throw ConfigError("geometry", e.what());
  }
  return assembly::make_problem(sp, cfg.material, cfg.sources, cfg.regularization);
}

State initial_state(const RunConfig& cfg, const assembly::Problem& pb, bool mollify) {
  const auto& sp = pb.sp();
  State st = zero_state(sp);
  const auto& verts = sp.body->vertices;
  for (int v = 0; v < sp.n_v; ++v) {
    st.theta[v] = cfg.initial.theta.eval(verts[v], 0.0);
    if (!(st.theta[v] > 0.0))
      throw ConfigError("initial.theta", "nodal value " + io::fmt(st.theta[v]) + " at vertex " +
                                             std::to_string(v) + " is not positive");
    const Point u = cfg.initial.u.eval(verts[v], 0.0);
    if (sp.w_dof[2 * v] >= 0) st.u[sp.w_dof[2 * v]] = u.x;
    if (sp.w_dof[2 * v + 1] >= 0) st.u[sp.w_dof[2 * v + 1]] = u.y;
  }
  const auto* box = std::get_if<prox::BoxConstraint>(&pb.mat.constraint);
  for (int s = 0; s < sp.n_s; ++s) {
    const Point p = sp.surface->nodes[s];
    st.theta_s[s] = cfg.initial.theta_s.eval(p, 0.0);
    if (!(st.theta_s[s] > 0.0))
      throw ConfigError("initial.theta_s", "nodal value " + io::fmt(st.theta_s[s]) +
                                               " at surface node " + std::to_string(s) +
                                               " is not positive");
    st.chi[s] = cfg.initial.chi.eval(p, 0.0);
    if (box && (st.chi[s] < box->lo || st.chi[s] > box->hi))
      throw ConfigError("initial.chi", "nodal value " + io::fmt(st.chi[s]) +
                                           " leaves the constraint box");
  }
  refresh_aux(st, sp, pb.mat, pb.rp.yosida());
  return mollify ? stepper::mollify_initial(st, pb) : st;
}

SimulationResult simulate(const RunConfig& cfg, const SimulationOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const assembly::Problem pb = build_problem(cfg);
  const State init = initial_state(cfg, pb);
  const auto& sched = cfg.schedule.schedule;
  const double window = cfg.diagnostics.effective_window(sched);
  const int snap_every = opt.snapshot_every >= 0 ? opt.snapshot_every : cfg.schedule.snapshot_every;

  SimulationResult res;
  res.ledger.data_norm = diagnostics::data_norm(pb, sched.t_end);
  diagnostics::ledger_start(res.ledger, init, pb);

  if (opt.out_dir) {
    std::ostringstream mesh_txt;
    mesh::write_mesh(mesh_txt, *pb.sp().body, pb.sp().surface.get());
    io::write_atomic(*opt.out_dir / "mesh.txt", mesh_txt.str());
    io::write_atomic(*opt.out_dir / "config.json", dump_config(cfg));
    if (snap_every > 0)
      io::write_atomic(*opt.out_dir / "snapshots" / step_name(0), io::snapshot_text(init, pb, 0.0));
  }

  int steps = 0;
  const auto sink = [&](const State& st, const State& prev, const stepper::StepReport& rep) {
    diagnostics::ledger_append(res.ledger, st, prev, rep.dt, pb, rep);
    ++steps;
    if (opt.out_dir && snap_every > 0 && steps % snap_every == 0)
      io::write_atomic(*opt.out_dir / "snapshots" / step_name(steps),
                       io::snapshot_text(st, pb, rep.dt));
    if (cfg.schedule.stop_on_equilibrium &&
        res.ledger.back().t - res.ledger.rows().front().t >= window) {
      const auto r = diagnostics::detect_equilibrium(res.ledger, window, cfg.diagnostics.tol);
      if (r.equilibrium) return false;
    }
    return true;
  };
  res.run = stepper::run(init, sched, pb, cfg.solver, sink);
  res.final_state = res.run.final_state;
  res.theta_bar = assembly::mean_v(res.final_state.theta, pb.forms);

  try {
    res.report = diagnostics::detect_equilibrium(res.ledger, window, cfg.diagnostics.tol);
  } catch (const InsufficientHistory&) {
  }
  try {
    const Vec f_inf = assembly::mechanical_load_limit(pb);
    res.stationary_residual =
        stationary::residual_of_state(res.final_state, res.theta_bar, pb, f_inf);
    if (res.report) res.report->stationary_residual = *res.stationary_residual;
  } catch (const Error&) {
  }

  auto& s = res.summary;
  s.run_id = cfg.run_id;
  s.eps = pb.rp.eps;
  s.mu = pb.rp.mu;
  s.equilibrium = res.report && res.report->equilibrium;
  s.theta_bar_estimate = res.theta_bar;
  const auto& last = res.ledger.back();
  const auto ind = diagnostics::indicators(last);
  for (int k = 0; k < diagnostics::kIndicatorCount; ++k)
    s.final_norms[diagnostics::indicator_names()[k]] = ind[k];
  s.final_norms["mean_gap"] = last.mean_gap;
  s.stationary_residual = res.stationary_residual;
  const auto law = diagnostics::check_energy_law(res.ledger);
  s.extra["t_final"] = res.final_state.t;
  s.extra["accepted_steps"] = res.run.accepted;
  s.extra["rejected_steps"] = res.run.rejected;
  s.extra["data_norm"] = res.ledger.data_norm;
  s.extra["max_rel_uptick"] = law.max_rel_uptick;
  s.extra["balance_ratio"] = law.balance_ratio;
  s.extra["window"] = window;
  s.extra["min_theta"] = res.final_state.theta.minCoeff();
  s.extra["min_theta_s"] = res.final_state.theta_s.minCoeff();
  s.wall_time_s = seconds_since(t0);

  if (opt.out_dir) {
    io::write_atomic(*opt.out_dir / "ledger.csv", io::ledger_csv(res.ledger));
    io::write_atomic(*opt.out_dir / "final.txt",
                     io::snapshot_text(res.final_state, pb, res.ledger.back().dt));
    io::write_atomic(*opt.out_dir / "plot_ledger.py", io::plot_script());
    io::write_atomic(*opt.out_dir / "summary.json", io::summary_json(s));
  }
  return res;
}

double state_distance(const State& a, const State& b, const assembly::AssembledForms& f) {
  const double t = assembly::l2_norm_v(a.theta - b.theta, f);
  const double ts = assembly::l2_norm_s(a.theta_s - b.theta_s, f);
  const double u = assembly::l2_norm_w(a.u - b.u, f);
  const double c = assembly::l2_norm_s(a.chi - b.chi, f);
  return std::sqrt(t * t + ts * ts + u * u + c * c);
}

SweepResult run_sweep(const RunConfig& cfg, int jobs, const std::optional<fs::path>& out_dir) {
  std::vector<double> eps = cfg.eps_sweep.empty() ? std::vector{cfg.regularization.eps}
                                                  : cfg.eps_sweep;
  std::vector<double> mus = cfg.mu_sweep.empty() ? std::vector{cfg.regularization.mu}
                                                 : cfg.mu_sweep;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  std::sort(mus.begin(), mus.end(), std::greater<>());
  SweepResult res;
  for (double m : mus)
    for (double e : eps) res.entries.push_back({e, m, false, {}, {}, 0.0});

  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (std::size_t i = next++; i < res.entries.size(); i = next++) {
      auto& en = res.entries[i];
      RunConfig c = cfg;
      c.regularization.eps = en.eps;
      c.regularization.mu = en.mu;
      std::ostringstream id;
      id << "eps_" << io::fmt(en.eps) << "_mu_" << io::fmt(en.mu);
      c.run_id = cfg.run_id + "/" + id.str();
      SimulationOptions o;
      if (out_dir) o.out_dir = *out_dir / id.str();
      const auto t0 = std::chrono::steady_clock::now();
      try {
        auto r = simulate(c, o);
        en.final_state = std::move(r.final_state);
        en.ok = true;
      } catch (const std::exception& e) {
        en.error = e.what();
      }
      en.wall_time_s = seconds_since(t0);
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(res.entries.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < n; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  const assembly::Problem pb = build_problem(cfg);
  const auto find = [&](double e, double m) -> const SweepEntry* {
    for (const auto& en : res.entries)
      if (en.eps == e && en.mu == m) return &en;
    return nullptr;
  };
  const auto link = [&](const char* chain, double fixed, double a, double b, const SweepEntry* x,
                        const SweepEntry* y) {
    if (!x || !y || !x->ok || !y->ok) return;
    res.table.push_back({chain, fixed, a, b, state_distance(x->final_state, y->final_state, pb.forms)});
  };
  for (double m : mus)
    for (std::size_t i = 0; i + 1 < eps.size(); ++i)
      link("eps", m, eps[i], eps[i + 1], find(eps[i], m), find(eps[i + 1], m));
  for (double e : eps)
    for (std::size_t i = 0; i + 1 < mus.size(); ++i)
      link("mu", e, mus[i], mus[i + 1], find(e, mus[i]), find(e, mus[i + 1]));
  for (const auto& en : res.entries) res.all_ok = res.all_ok && en.ok;
  return res;
}

std::string sweep_table_csv(const SweepResult& r) {
  std::ostringstream os;
  os << "chain,fixed,from,to,distance\n";
  for (const auto& row : r.table)
    os << row.chain << ',' << io::fmt(row.fixed) << ',' << io::fmt(row.from) << ','
       << io::fmt(row.to) << ',' << io::fmt(row.distance) << '\n';
  return os.str();
}

StationaryOutcome stationary_from_config(const RunConfig& cfg, std::uint64_t seed) {
  const assembly::Problem pb = build_problem(cfg);
  StationaryOutcome out;
  if (cfg.stationary.theta_bar) {
    out.theta_bar = *cfg.stationary.theta_bar;
  } else {
    out.theta_bar = simulate(cfg).theta_bar;
  }
  const State init = initial_state(cfg, pb, false);
  const Vec f_inf = assembly::mechanical_load_limit(pb);
  stationary::StationaryOptions so;
  so.max_outer = cfg.stationary.max_outer;
  so.tol = cfg.stationary.tol;
  so.mu_continuation = cfg.stationary.mu_continuation;

  stationary::StationaryState guess = stationary::from_state(init, out.theta_bar);
  double lo = init.chi.minCoeff() - 0.5, hi = init.chi.maxCoeff() + 0.5;
  if (const auto* box = std::get_if<prox::BoxConstraint>(&pb.mat.constraint)) {
    lo = box->lo;
    hi = box->hi;
  }
  for (int attempt = 0;; ++attempt) {
    ++out.attempts;
    try {
      out.state = stationary::solve_stationary(pb, f_inf, out.theta_bar, guess, so, &out.report);
      return out;
    } catch (const NoConvergence&) {
      if (attempt >= cfg.stationary.restarts) throw;
    }
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt));
    std::uniform_real_distribution<double> uc(lo, hi);
    std::normal_distribution<double> uu(0.0, 0.1);
    guess = stationary::from_state(init, out.theta_bar);
    for (int s = 0; s < guess.chi.size(); ++s) guess.chi[s] = uc(rng);
    for (int k = 0; k < guess.u.size(); ++k) guess.u[k] = uu(rng);
  }
}

// ---------------------------------------------------------------------------

namespace {

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const StepTooSmall& e) {
    err << "step too small: " << e.what() << '\n';
    return 2;
  } catch (const NoConvergence& e) {
    err << "no convergence: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 4;
  }
}

fs::path output_dir(const RunConfig& cfg, const std::optional<std::string>& out) {
  return out ? fs::path(*out) : fs::path(cfg.output_dir);
}

}  // namespace

int cmd_run(const std::string& config_path, const std::optional<std::string>& out,
            int snapshot_every, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_config(config_path);
    SimulationOptions o;
    o.out_dir = output_dir(cfg, out);
    o.snapshot_every = snapshot_every;
    const auto r = simulate(cfg, o);
    log << "run " << cfg.run_id << ": t=" << r.final_state.t << ", " << r.run.accepted
        << " steps (" << r.run.rejected << " rejected), equilibrium="
        << (r.summary.equilibrium ? "true" : "false") << ", wall " << r.summary.wall_time_s
        << " s\n"
        << "outputs in " << o.out_dir->string() << '\n';
    return 0;
  });
}

int cmd_sweep(const std::string& config_path, const std::optional<std::string>& out, int jobs,
              std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_config(config_path);
    const fs::path dir = output_dir(cfg, out);
    const auto r = run_sweep(cfg, jobs, dir);
    io::write_atomic(dir / "sweep_table.csv", sweep_table_csv(r));
    for (const auto& en : r.entries)
      if (!en.ok) err << "run eps=" << en.eps << " mu=" << en.mu << " failed: " << en.error << '\n';
    log << sweep_table_csv(r);
    return r.all_ok ? 0 : 2;
  });
}

int cmd_stationary(const std::string& config_path, const std::optional<std::string>& out,
                   std::uint64_t seed, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_config(config_path);
    const fs::path dir = output_dir(cfg, out);
    const auto o = stationary_from_config(cfg, seed);
    const assembly::Problem pb = build_problem(cfg);
    io::write_atomic(dir / "stationary.txt", io::stationary_snapshot(o.state, pb));
    double dist = 0.0;
    if (const auto* box = std::get_if<prox::BoxConstraint>(&pb.mat.constraint))
      for (int s = 0; s < o.state.chi.size(); ++s)
        dist = std::max({dist, box->lo - o.state.chi[s], o.state.chi[s] - box->hi});
    nlohmann::json j = {{"run_id", cfg.run_id},
                        {"theta_bar", o.theta_bar},
                        {"residual", o.report.residual},
                        {"outer_iters", o.report.outer_iters},
                        {"joint_iters", o.report.joint_iters},
                        {"attempts", o.attempts},
                        {"chi_min", o.state.chi.minCoeff()},
                        {"chi_max", o.state.chi.maxCoeff()},
                        {"dist_chi_to_box", dist},
                        {"xi_max_abs", o.state.aux.xi.lpNorm<Eigen::Infinity>()}};
    io::write_atomic(dir / "stationary.json", j.dump(2) + "\n");
    log << "stationary solve: theta_bar=" << o.theta_bar << ", residual=" << o.report.residual
        << ", chi in [" << o.state.chi.minCoeff() << ", " << o.state.chi.maxCoeff() << "]\n";
    return 0;
  });
}

}  // namespace thermoadh::driver
