#include "thermoadh/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "thermoadh/error.hpp"

namespace thermoadh {

using nlohmann::json;

namespace {

std::string join(const std::string& a, const std::string& b) { return a.empty() ? b : a + "." + b; }

// Walks one JSON object, remembering which keys were read so that the
// leftovers can be reported as unknown.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  std::string path(const std::string& key) const { return join(path_, key); }

  const json* raw(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  double num(const std::string& key, double def) {
    const json* v = raw(key);
    if (!v) return def;
    if (!v->is_number()) throw ConfigError(path(key), "expected a number");
    const double x = v->get<double>();
    if (!std::isfinite(x)) throw ConfigError(path(key), "must be finite");
    return x;
  }

  int integer(const std::string& key, int def) {
    const json* v = raw(key);
    if (!v) return def;
    if (!v->is_number_integer()) throw ConfigError(path(key), "expected an integer");
    return v->get<int>();
  }

  bool boolean(const std::string& key, bool def) {
    const json* v = raw(key);
    if (!v) return def;
    if (!v->is_boolean()) throw ConfigError(path(key), "expected true or false");
    return v->get<bool>();
  }

  std::string str(const std::string& key, const std::string& def) {
    const json* v = raw(key);
    if (!v) return def;
    if (!v->is_string()) throw ConfigError(path(key), "expected a string");
    return v->get<std::string>();
  }

  std::vector<double> nums(const std::string& key) {
    const json* v = raw(key);
    std::vector<double> out;
    if (!v) return out;
    if (!v->is_array()) throw ConfigError(path(key), "expected an array of numbers");
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_number())
        throw ConfigError(path(key) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back((*v)[i].get<double>());
    }
    return out;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(path(it.key()), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

ExprTerm parse_term(const json& j, const std::string& path) {
  Reader r(j, path);
  ExprTerm k;
  k.c = r.num("c", 0.0);
  k.px = r.integer("px", 0);
  k.py = r.integer("py", 0);
  if (k.px < 0 || k.py < 0) throw ConfigError(path, "monomial powers must be >= 0");
  k.kx = r.num("kx", 0.0);
  k.phx = r.num("phx", 0.0);
  k.ky = r.num("ky", 0.0);
  k.phy = r.num("phy", 0.0);
  k.decay = r.num("decay", 0.0);
  k.omega = r.num("omega", 0.0);
  k.pht = r.num("pht", 0.0);
  for (const char* key : {"t_on", "t_off"}) {
    const json* v = r.raw(key);
    if (!v || v->is_null()) continue;
    if (!v->is_number()) throw ConfigError(r.path(key), "expected a number or null");
    (std::string(key) == "t_on" ? k.t_on : k.t_off) = v->get<double>();
  }
  if (!(k.t_on < k.t_off)) throw ConfigError(path, "t_on must be < t_off");
  r.finish();
  return k;
}

ScalarExpr parse_expr(const json* j, const std::string& path, const ScalarExpr& def) {
  if (!j) return def;
  if (j->is_number()) return ScalarExpr::constant(j->get<double>());
  const json* list = j;
  if (j->is_object()) {
    Reader r(*j, path);
    list = r.raw("terms");
    r.finish();
    if (!list) throw ConfigError(join(path, "terms"), "missing");
  }
  if (!list->is_array()) throw ConfigError(path, "expected a number or {\"terms\": [...]}");
  std::vector<ExprTerm> terms;
  for (std::size_t i = 0; i < list->size(); ++i)
    terms.push_back(parse_term((*list)[i], path + ".terms[" + std::to_string(i) + "]"));
  return ScalarExpr(std::move(terms));
}

VectorExpr parse_vexpr(const json* j, const std::string& path) {
  VectorExpr v;
  if (!j) return v;
  Reader r(*j, path);
  v.x = parse_expr(r.raw("x"), r.path("x"), {});
  v.y = parse_expr(r.raw("y"), r.path("y"), {});
  r.finish();
  return v;
}

json dump_expr(const ScalarExpr& e) {
  json terms = json::array();
  const ExprTerm d;
  for (const auto& k : e.terms()) {
    json t = json::object();
    t["c"] = k.c;
    if (k.px) t["px"] = k.px;
    if (k.py) t["py"] = k.py;
    if (k.kx != d.kx) t["kx"] = k.kx;
    if (k.phx != d.phx) t["phx"] = k.phx;
    if (k.ky != d.ky) t["ky"] = k.ky;
    if (k.phy != d.phy) t["phy"] = k.phy;
    if (k.decay != d.decay) t["decay"] = k.decay;
    if (k.omega != d.omega) t["omega"] = k.omega;
    if (k.pht != d.pht) t["pht"] = k.pht;
    if (std::isfinite(k.t_on)) t["t_on"] = k.t_on;
    if (std::isfinite(k.t_off)) t["t_off"] = k.t_off;
    terms.push_back(t);
  }
  return json{{"terms", terms}};
}

mesh::BoundaryTag tag_at(const std::string& name, const std::string& path) {
  try {
    return mesh::parse_tag(name);
  } catch (const MeshError& e) {
    throw ConfigError(path, e.what());
  }
}

mesh::Side side_at(const std::string& name, const std::string& path) {
  try {
    return mesh::parse_side(name);
  } catch (const MeshError& e) {
    throw ConfigError(path, e.what());
  }
}

template <class F>
void section(Reader& root, const std::string& key, F&& body) {
  const json* j = root.raw(key);
  if (!j) return;
  Reader r(*j, key);
  body(r);
  r.finish();
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }
  RunConfig c;
  Reader root(j, "");
  c.run_id = root.str("run_id", c.run_id);

  section(root, "geometry", [&](Reader& r) {
    auto& g = c.geometry;
    g.rect.x0 = r.num("x0", g.rect.x0);
    g.rect.x1 = r.num("x1", g.rect.x1);
    g.rect.y0 = r.num("y0", g.rect.y0);
    g.rect.y1 = r.num("y1", g.rect.y1);
    g.nx = r.integer("nx", g.nx);
    g.ny = r.integer("ny", g.ny);
    if (const json* t = r.raw("tags")) {
      Reader tr(*t, r.path("tags"));
      for (int s = 0; s < 4; ++s) {
        const std::string key(mesh::to_string(static_cast<mesh::Side>(s)));
        if (tr.has(key))
          g.rect.side_tags[s] = tag_at(tr.str(key, ""), tr.path(key));
      }
      tr.finish();
    }
    if (const json* o = r.raw("overrides")) {
      if (!o->is_array()) throw ConfigError(r.path("overrides"), "expected an array");
      for (std::size_t i = 0; i < o->size(); ++i) {
        const std::string p = r.path("overrides") + "[" + std::to_string(i) + "]";
        Reader orr((*o)[i], p);
        mesh::TagOverride ov{};
        ov.side = side_at(orr.str("side", ""), orr.path("side"));
        ov.from = orr.num("from", 0.0);
        ov.to = orr.num("to", 1.0);
        ov.tag = tag_at(orr.str("tag", ""), orr.path("tag"));
        orr.finish();
        g.rect.overrides.push_back(ov);
      }
    }
  });

  section(root, "material", [&](Reader& r) {
    auto& m = c.material;
    m.lame_lambda = r.num("lame_lambda", m.lame_lambda);
    m.lame_mu = r.num("lame_mu", m.lame_mu);
    m.theta_eq = r.num("theta_eq", m.theta_eq);
    if (const json* l = r.raw("latent")) {
      Reader lr(*l, r.path("latent"));
      m.latent.l0 = lr.num("l0", m.latent.l0);
      m.latent.l2 = lr.num("l2", m.latent.l2);
      lr.finish();
    }
    if (const json* s = r.raw("cohesion")) {
      Reader sr(*s, r.path("cohesion"));
      m.cohesion.w = sr.num("w", m.cohesion.w);
      m.cohesion.s0 = sr.num("s0", m.cohesion.s0);
      sr.finish();
    }
    if (const json* e = r.raw("exchange")) {
      Reader er(*e, r.path("exchange"));
      m.exchange.k0 = er.num("k0", m.exchange.k0);
      m.exchange.k1 = er.num("k1", m.exchange.k1);
      m.exchange.floor = er.num("floor", m.exchange.floor);
      er.finish();
    }
    if (const json* k = r.raw("constraint")) {
      Reader kr(*k, r.path("constraint"));
      const std::string type = kr.str("type", "box");
      if (type == "box") {
        m.constraint = prox::BoxConstraint{kr.num("lo", 0.0), kr.num("hi", 1.0)};
      } else if (type == "power") {
        m.constraint = prox::PowerConstraint{kr.num("c", 1.0), kr.num("q", 4.0)};
      } else {
        throw ConfigError(kr.path("type"), "expected \"box\" or \"power\"");
      }
      kr.finish();
    }
  });

  section(root, "regularization", [&](Reader& r) {
    c.regularization.eps = r.num("eps", c.regularization.eps);
    c.regularization.mu = r.num("mu", c.regularization.mu);
    c.eps_sweep = r.nums("eps_sweep");
    c.mu_sweep = r.nums("mu_sweep");
  });

  section(root, "sources", [&](Reader& r) {
    c.sources.h = parse_expr(r.raw("h"), r.path("h"), {});
    c.sources.f = parse_vexpr(r.raw("f"), r.path("f"));
    c.sources.g = parse_vexpr(r.raw("g"), r.path("g"));
  });

  section(root, "initial", [&](Reader& r) {
    auto& i = c.initial;
    i.theta = parse_expr(r.raw("theta"), r.path("theta"), i.theta);
    i.theta_s = parse_expr(r.raw("theta_s"), r.path("theta_s"), i.theta_s);
    i.u = parse_vexpr(r.raw("u"), r.path("u"));
    i.chi = parse_expr(r.raw("chi"), r.path("chi"), i.chi);
  });

  section(root, "schedule", [&](Reader& r) {
    auto& s = c.schedule.schedule;
    s.t_end = r.num("t_end", s.t_end);
    s.dt0 = r.num("dt0", s.dt0);
    s.dt_min = r.num("dt_min", s.dt_min);
    s.dt_max = r.num("dt_max", s.dt_max);
    s.adaptive = r.boolean("adaptive", s.adaptive);
    s.grow_after = r.integer("grow_after", s.grow_after);
    c.schedule.snapshot_every = r.integer("snapshot_every", c.schedule.snapshot_every);
    c.schedule.stop_on_equilibrium =
        r.boolean("stop_on_equilibrium", c.schedule.stop_on_equilibrium);
  });

  section(root, "solver", [&](Reader& r) {
    c.solver.tol_newton = r.num("tol_newton", c.solver.tol_newton);
    c.solver.max_iters = r.integer("max_iters", c.solver.max_iters);
  });

  section(root, "diagnostics", [&](Reader& r) {
    c.diagnostics.tol = r.num("tol", c.diagnostics.tol);
    c.diagnostics.window = r.num("window", c.diagnostics.window);
  });

  section(root, "stationary", [&](Reader& r) {
    auto& s = c.stationary;
    if (const json* tb = r.raw("theta_bar")) {
      if (tb->is_number()) s.theta_bar = tb->get<double>();
      else if (!tb->is_null()) throw ConfigError(r.path("theta_bar"), "expected a number or null");
    }
    s.max_outer = r.integer("max_outer", s.max_outer);
    s.tol = r.num("tol", s.tol);
    s.mu_continuation = r.nums("mu_continuation");
    s.restarts = r.integer("restarts", s.restarts);
  });

  section(root, "output", [&](Reader& r) { c.output_dir = r.str("dir", c.output_dir); });

  root.finish();
  validate_config(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate_config(const RunConfig& c) {
  const auto& g = c.geometry;
  if (g.nx < 2) throw ConfigError("geometry.nx", "must be >= 2");
  if (g.ny < 2) throw ConfigError("geometry.ny", "must be >= 2");
  if (!(g.rect.x0 < g.rect.x1)) throw ConfigError("geometry.x1", "must exceed x0");
  if (!(g.rect.y0 < g.rect.y1)) throw ConfigError("geometry.y1", "must exceed y0");
  for (std::size_t i = 0; i < g.rect.overrides.size(); ++i) {
    const auto& o = g.rect.overrides[i];
    if (!(0.0 <= o.from && o.from < o.to && o.to <= 1.0))
      throw ConfigError("geometry.overrides[" + std::to_string(i) + "]",
                        "needs 0 <= from < to <= 1");
  }
  c.material.validate();
  if (!(c.regularization.eps > 0.0)) throw ConfigError("regularization.eps", "must be > 0");
  if (!(c.regularization.mu > 0.0)) throw ConfigError("regularization.mu", "must be > 0");
  for (std::size_t i = 0; i < c.eps_sweep.size(); ++i)
    if (!(c.eps_sweep[i] > 0.0))
      throw ConfigError("regularization.eps_sweep[" + std::to_string(i) + "]", "must be > 0");
  for (std::size_t i = 0; i < c.mu_sweep.size(); ++i)
    if (!(c.mu_sweep[i] > 0.0))
      throw ConfigError("regularization.mu_sweep[" + std::to_string(i) + "]", "must be > 0");
  const auto& s = c.schedule.schedule;
  if (!(s.t_end > 0.0)) throw ConfigError("schedule.t_end", "must be > 0");
  if (!(s.dt0 > 0.0)) throw ConfigError("schedule.dt0", "must be > 0");
  if (!(s.dt_min > 0.0)) throw ConfigError("schedule.dt_min", "must be > 0");
  if (!(s.dt_max >= s.dt_min)) throw ConfigError("schedule.dt_max", "must be >= dt_min");
  if (s.grow_after < 1) throw ConfigError("schedule.grow_after", "must be >= 1");
  if (c.schedule.snapshot_every < 0)
    throw ConfigError("schedule.snapshot_every", "must be >= 0");
  if (!(c.solver.tol_newton > 0.0)) throw ConfigError("solver.tol_newton", "must be > 0");
  if (c.solver.max_iters < 1) throw ConfigError("solver.max_iters", "must be >= 1");
  if (!(c.diagnostics.tol > 0.0)) throw ConfigError("diagnostics.tol", "must be > 0");
  if (c.stationary.theta_bar && !(*c.stationary.theta_bar >= 0.0))
    throw ConfigError("stationary.theta_bar", "must be >= 0");
  if (c.stationary.max_outer < 1) throw ConfigError("stationary.max_outer", "must be >= 1");
  if (!(c.stationary.tol > 0.0)) throw ConfigError("stationary.tol", "must be > 0");
  if (c.stationary.restarts < 0) throw ConfigError("stationary.restarts", "must be >= 0");
  if (c.output_dir.empty()) throw ConfigError("output.dir", "must not be empty");
}

std::string dump_config(const RunConfig& c) {
  json j;
  j["run_id"] = c.run_id;
  const auto& g = c.geometry;
  json tags = json::object();
  for (int s = 0; s < 4; ++s)
    tags[std::string(mesh::to_string(static_cast<mesh::Side>(s)))] =
        std::string(mesh::to_string(g.rect.side_tags[s]));
  json ovs = json::array();
  for (const auto& o : g.rect.overrides)
    ovs.push_back({{"side", std::string(mesh::to_string(o.side))},
                   {"from", o.from},
                   {"to", o.to},
                   {"tag", std::string(mesh::to_string(o.tag))}});
  j["geometry"] = {{"x0", g.rect.x0}, {"x1", g.rect.x1}, {"y0", g.rect.y0}, {"y1", g.rect.y1},
                   {"nx", g.nx},      {"ny", g.ny},      {"tags", tags},    {"overrides", ovs}};
  const auto& m = c.material;
  json cons;
  if (const auto* b = std::get_if<prox::BoxConstraint>(&m.constraint))
    cons = {{"type", "box"}, {"lo", b->lo}, {"hi", b->hi}};
  else {
    const auto& p = std::get<prox::PowerConstraint>(m.constraint);
    cons = {{"type", "power"}, {"c", p.c}, {"q", p.q}};
  }
  j["material"] = {{"lame_lambda", m.lame_lambda},
                   {"lame_mu", m.lame_mu},
                   {"latent", {{"l0", m.latent.l0}, {"l2", m.latent.l2}}},
                   {"cohesion", {{"w", m.cohesion.w}, {"s0", m.cohesion.s0}}},
                   {"exchange",
                    {{"k0", m.exchange.k0}, {"k1", m.exchange.k1}, {"floor", m.exchange.floor}}},
                   {"constraint", cons},
                   {"theta_eq", m.theta_eq}};
  j["regularization"] = {{"eps", c.regularization.eps},
                         {"mu", c.regularization.mu},
                         {"eps_sweep", c.eps_sweep},
                         {"mu_sweep", c.mu_sweep}};
  j["sources"] = {{"h", dump_expr(c.sources.h)},
                  {"f", {{"x", dump_expr(c.sources.f.x)}, {"y", dump_expr(c.sources.f.y)}}},
                  {"g", {{"x", dump_expr(c.sources.g.x)}, {"y", dump_expr(c.sources.g.y)}}}};
  j["initial"] = {{"theta", dump_expr(c.initial.theta)},
                  {"theta_s", dump_expr(c.initial.theta_s)},
                  {"u", {{"x", dump_expr(c.initial.u.x)}, {"y", dump_expr(c.initial.u.y)}}},
                  {"chi", dump_expr(c.initial.chi)}};
  const auto& s = c.schedule.schedule;
  j["schedule"] = {{"t_end", s.t_end},
                   {"dt0", s.dt0},
                   {"dt_min", s.dt_min},
                   {"dt_max", s.dt_max},
                   {"adaptive", s.adaptive},
                   {"grow_after", s.grow_after},
                   {"snapshot_every", c.schedule.snapshot_every},
                   {"stop_on_equilibrium", c.schedule.stop_on_equilibrium}};
  j["solver"] = {{"tol_newton", c.solver.tol_newton}, {"max_iters", c.solver.max_iters}};
  j["diagnostics"] = {{"tol", c.diagnostics.tol}, {"window", c.diagnostics.window}};
  j["stationary"] = {{"theta_bar", c.stationary.theta_bar ? json(*c.stationary.theta_bar)
                                                          : json(nullptr)},
                     {"max_outer", c.stationary.max_outer},
                     {"tol", c.stationary.tol},
                     {"mu_continuation", c.stationary.mu_continuation},
                     {"restarts", c.stationary.restarts}};
  j["output"] = {{"dir", c.output_dir}};
  return j.dump(2) + "\n";
}

}  // namespace thermoadh
