#include <gtest/gtest.h>

#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>

#include "common.hpp"
#include "thermoadh/config.hpp"
#include "thermoadh/driver.hpp"
#include "thermoadh/error.hpp"
#include "thermoadh/io.hpp"

using namespace thermoadh;
using nlohmann::json;

namespace {

std::string error_path(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<none>";
}

}  // namespace

TEST(Config, DefaultsParseFromEmptyObject) {
  const RunConfig c = parse_config("{}");
  EXPECT_EQ(c.geometry.nx, 16);
  EXPECT_EQ(c.regularization.mu, 1e-2);
  EXPECT_EQ(c.regularization.eps, 1e-3);
  EXPECT_EQ(c.solver.tol_newton, 1e-10);
  EXPECT_FALSE(c.stationary.theta_bar.has_value());
}

TEST(Config, DumpIsAFixedPoint) {
  for (const char* name : {"demo.json", "equilibrium.json", "corollary.json"}) {
    const RunConfig c = load_config(testing_util::config_path(name));
    const std::string once = dump_config(c);
    EXPECT_EQ(dump_config(parse_config(once)), once) << name;
  }
  const std::string d = dump_config(parse_config("{}"));
  EXPECT_EQ(dump_config(parse_config(d)), d);
}

TEST(Config, ExpressionsAndFields) {
  const RunConfig c = parse_config(R"({
    "geometry": {"nx": 5, "ny": 3, "tags": {"right": "contact", "bottom": "contact"}},
    "material": {"constraint": {"type": "power", "c": 2.0, "q": 3.0}},
    "sources": {"h": 0.25, "g": {"x": {"terms": [{"c": 1.0, "omega": 2.0, "t_off": 4.0}]}}},
    "stationary": {"theta_bar": 0.7, "mu_continuation": [0.1, 0.05]}
  })");
  EXPECT_EQ(c.geometry.nx, 5);
  EXPECT_EQ(c.geometry.rect.side_tags[static_cast<int>(mesh::Side::Right)],
            mesh::BoundaryTag::Contact);
  const auto* pw = std::get_if<prox::PowerConstraint>(&c.material.constraint);
  ASSERT_NE(pw, nullptr);
  EXPECT_EQ(pw->q, 3.0);
  EXPECT_EQ(c.sources.h.eval({0.3, 0.2}, 5.0), 0.25);
  EXPECT_NEAR(c.sources.g.x.eval({0, 0}, 1.0), std::cos(2.0), 1e-15);
  EXPECT_EQ(c.sources.g.x.eval({0, 0}, 4.0), 0.0);
  EXPECT_TRUE(c.sources.g.settles());
  EXPECT_FALSE(c.sources.h.integrable_in_time());
  EXPECT_EQ(*c.stationary.theta_bar, 0.7);
  EXPECT_EQ(c.stationary.mu_continuation.size(), 2u);
}

TEST(Config, ErrorsNameTheOffendingPath) {
  EXPECT_EQ(error_path(R"({"regularization": {"mu": -1}})"), "regularization.mu");
  EXPECT_EQ(error_path(R"({"schedule": {"bogus": 1}})"), "schedule.bogus");
  EXPECT_EQ(error_path(R"({"bogus": 1})"), "bogus");
  EXPECT_EQ(error_path(R"({"geometry": {"nx": 1}})"), "geometry.nx");
  EXPECT_EQ(error_path(R"({"regularization": {"mu_sweep": [0.1, 0]}})"),
            "regularization.mu_sweep[1]");
  EXPECT_EQ(error_path(R"({"solver": {"tol_newton": "small"}})"), "solver.tol_newton");
  EXPECT_EQ(error_path("{not json"), "<root>");
  EXPECT_EQ(error_path(R"({"material": {"constraint": {"type": "cone"}}})"),
            "material.constraint.type");
  EXPECT_EQ(error_path(R"({"material": {"constraint": {"lo": 1, "hi": 0}}})").rfind("material", 0),
            0u);
  EXPECT_EQ(error_path(R"({"material": {"exchange": {"floor": 0}}})").rfind("material", 0), 0u);
  EXPECT_EQ(error_path(R"({"sources": {"h": {"terms": [{"c": 1, "t_on": 2, "t_off": 1}]}}})")
                .rfind("sources.h", 0),
            0u);
}

TEST(Config, MissingFileIsAConfigError) {
  EXPECT_THROW(load_config("/nonexistent/thermoadh.json"), ConfigError);
}

TEST(Config, NonPositiveInitialTemperatureIsRejected) {
  const RunConfig c = parse_config(R"({"geometry": {"nx": 3, "ny": 3},
    "initial": {"theta": {"terms": [{"c": 1.0}, {"c": -1.5, "px": 1}]}}})");
  const auto pb = driver::build_problem(c);
  try {
    driver::initial_state(c, pb);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.path(), "initial.theta");
  }
}

TEST(Expr, Terms) {
  ExprTerm t{.c = 2.0, .px = 2, .py = 1, .decay = 0.5};
  EXPECT_DOUBLE_EQ(t.eval({3.0, 2.0}, 2.0), 2.0 * 9.0 * 2.0 * std::exp(-1.0));
  ExprTerm w{.c = 1.0, .kx = 1.0, .phx = 0.5, .t_on = 1.0, .t_off = 2.0};
  EXPECT_EQ(w.eval({0.0, 0.0}, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(w.eval({0.0, 0.0}, 1.5), std::cos(0.5));
  EXPECT_EQ(w.eval({0.0, 0.0}, 2.0), 0.0);
  const ScalarExpr e({t, w});
  EXPECT_TRUE(e.integrable_in_time());
  EXPECT_EQ(e.eval_limit({1.0, 1.0}), 0.0);
  const ScalarExpr osc({ExprTerm{.c = 1.0, .omega = 1.0}});
  EXPECT_FALSE(osc.settles());
  EXPECT_THROW(osc.eval_limit({0, 0}), Error);
  EXPECT_TRUE(ScalarExpr().is_zero());
  EXPECT_EQ(ScalarExpr::constant(3.0).eval_limit({0, 0}), 3.0);
}

TEST(Io, AtomicWriteLeavesNoTemporary) {
  testing_util::TempDir d;
  const auto p = d.path() / "nested" / "file.txt";
  io::write_atomic(p, "hello\n");
  io::write_atomic(p, "again\n");
  EXPECT_EQ(testing_util::slurp(p), "again\n");
  int files = 0;
  for (const auto& e : std::filesystem::recursive_directory_iterator(d.path()))
    if (e.is_regular_file()) ++files;
  EXPECT_EQ(files, 1);
}

TEST(Io, NumbersRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0})
    EXPECT_EQ(std::stod(io::fmt(v)), v);
}

TEST(Io, SnapshotFormat) {
  const auto pb = testing_util::problem(2, 2);
  const State st = testing_util::constant_state(pb, 1.0, 0.5);
  const std::string s = io::snapshot_text(st, pb, 0.1);
  std::istringstream is(s);
  std::string line;
  int b = 0, sn = 0;
  std::getline(is, line);
  EXPECT_EQ(line, "# time 0");
  while (std::getline(is, line)) {
    if (line.rfind("B ", 0) == 0) ++b;
    if (line.rfind("S ", 0) == 0) ++sn;
  }
  EXPECT_EQ(b, 9);
  EXPECT_EQ(sn, 3);
  stationary::StationaryState ss = stationary::from_state(st, 1.0);
  EXPECT_EQ(io::stationary_snapshot(ss, pb).rfind("# time inf\n", 0), 0u);
}

TEST(Io, SummaryAndLedgerHeaders) {
  io::RunSummary s;
  s.run_id = "x";
  s.eps = 1e-3;
  s.mu = 1e-2;
  s.final_norms["theta_l2"] = 1.5;
  const json j = json::parse(io::summary_json(s));
  for (const char* k : {"run_id", "params", "equilibrium", "theta_bar_estimate", "final_norms",
                        "stationary_residual", "wall_time_s"})
    EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j["params"]["mu"], 1e-2);
  EXPECT_TRUE(j["stationary_residual"].is_null());

  diagnostics::EnergyLedger l;
  l.append({});
  const std::string csv = io::ledger_csv(l);
  std::string header = csv.substr(0, csv.find('\n'));
  std::string expect;
  for (const auto& c : diagnostics::ledger_columns()) expect += (expect.empty() ? "" : ",") + c;
  EXPECT_EQ(header, expect);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
}
