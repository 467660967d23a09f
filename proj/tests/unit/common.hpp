#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>

#include "thermoadh/assembly.hpp"
#include "thermoadh/mesh.hpp"
#include "thermoadh/state.hpp"

namespace testing_util {

using namespace thermoadh;

inline assembly::Problem problem(int nx, int ny, MaterialLaws mat = {}, SourceData src = {},
                                 RegularizationParams rp = {}, mesh::RectGeometry g = {}) {
  auto sp = std::make_shared<const mesh::Spaces>(mesh::build_rect_spaces(nx, ny, g));
  return assembly::make_problem(sp, std::move(mat), std::move(src), rp);
}

/// W_h coefficients of the nodal interpolant of (fx, fy).
inline Vec interp_w(const mesh::Spaces& sp, const std::function<Point(Point)>& f) {
  Vec u = Vec::Zero(sp.n_w);
  for (int v = 0; v < sp.n_v; ++v) {
    const Point val = f(sp.body->vertices[v]);
    if (sp.w_dof[2 * v] >= 0) u[sp.w_dof[2 * v]] = val.x;
    if (sp.w_dof[2 * v + 1] >= 0) u[sp.w_dof[2 * v + 1]] = val.y;
  }
  return u;
}

inline Vec interp_v(const mesh::Spaces& sp, const std::function<double(Point)>& f) {
  Vec v(sp.n_v);
  for (int i = 0; i < sp.n_v; ++i) v[i] = f(sp.body->vertices[i]);
  return v;
}

inline State constant_state(const assembly::Problem& pb, double theta, double chi) {
  State st = zero_state(pb.sp());
  st.theta.setConstant(theta);
  st.theta_s.setConstant(theta);
  st.chi.setConstant(chi);
  refresh_aux(st, pb.sp(), pb.mat, pb.rp.yosida());
  return st;
}

inline State random_state(const assembly::Problem& pb, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> th(0.5, 1.5), u(-0.1, 0.1), c(-0.2, 1.2);
  State st = zero_state(pb.sp());
  for (auto& x : st.theta) x = th(rng);
  for (auto& x : st.theta_s) x = th(rng);
  for (auto& x : st.u) x = u(rng);
  for (auto& x : st.chi) x = c(rng);
  refresh_aux(st, pb.sp(), pb.mat, pb.rp.yosida());
  return st;
}

inline Eigen::MatrixXd fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x,
                                   double h = 1e-7) {
  const Vec f0 = f(x);
  Eigen::MatrixXd J(f0.size(), x.size());
  for (int j = 0; j < x.size(); ++j) {
    Vec xp = x, xm = x;
    const double hj = h * std::max(1.0, std::abs(x[j]));
    xp[j] += hj;
    xm[j] -= hj;
    J.col(j) = (f(xp) - f(xm)) / (2 * hj);
  }
  return J;
}

inline std::string config_path(const std::string& name) {
  return std::string(THERMOADH_CONFIG_DIR) + "/" + name;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("thermoadh_test_" + std::to_string(stamp) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::string str() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace testing_util
