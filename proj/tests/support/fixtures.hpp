#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <unistd.h>

#include "spillover/bvar.hpp"
#include "spillover/ingest.hpp"

namespace fixtures {

// Restricted VAR(2): two white-noise surprises (rate, stocks) and two macro
// series. Spectral radius is about 0.73.
inline spillover::bvar::PosteriorDraw restricted_var2() {
  spillover::bvar::PosteriorDraw d;
  d.n_surprise = 2;
  d.lags = 2;
  d.lag_coef = Eigen::MatrixXd::Zero(4, 8);
  d.lag_coef.row(2) << 0.30, -0.20, 0.50, 0.10, 0.15, 0.05, 0.10, 0.00;
  d.lag_coef.row(3) << -0.10, 0.25, 0.20, 0.40, 0.00, -0.10, -0.05, 0.15;
  d.constant = Eigen::VectorXd::Zero(4);
  d.constant << 0.0, 0.0, 0.2, -0.1;
  d.sigma.resize(4, 4);
  d.sigma << 1.00, -0.40, 0.20, 0.10,
            -0.40, 1.50, -0.10, 0.30,
             0.20, -0.10, 0.80, 0.20,
             0.10, 0.30, 0.20, 0.90;
  return d;
}

inline spillover::MonthlyPanel as_panel(const Eigen::MatrixXd& y, int n_surprise) {
  spillover::MonthlyPanel p;
  p.start = spillover::parse_month("1990-01");
  p.values = y;
  for (int j = 0; j < y.cols(); ++j) {
    const bool s = j < n_surprise;
    p.columns.push_back({(s ? "m" : "y") + std::to_string(j), s ? spillover::Role::surprise
                                                                : spillover::Role::em_macro,
                         spillover::Transform::level});
  }
  return p;
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("spillover_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace fixtures
