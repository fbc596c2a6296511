#pragma once

// Monthly VAR with a block of high-frequency surprises that do not depend on
// lags or a constant:
//
//   m_t = u^m_t
//   y_t = C_Y + sum_p (B_YM,p m_{t-p} + B_YY,p y_{t-p}) + u^y_t,   (u^m, u^y) ~ N(0, Sigma)
//
// The joint likelihood factors into p(m_t) p(y_t | m_t). The marginal block is
// a zero-mean Gaussian with covariance Sigma_mm; the conditional block is a
// regression of y_t on its lags, a constant and the contemporaneous surprises
// with covariance Sigma_y|m. Independent conjugate priors on the two blocks
// give a closed-form Normal-inverse-Wishart posterior, and every draw maps back
// to (B, C_Y, Sigma) with the surprise rows identically zero.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "spillover/core/parallel.hpp"
#include "spillover/core/rng.hpp"
#include "spillover/error.hpp"
#include "spillover/ingest.hpp"

namespace spillover::bvar {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Minnesota-style hyperparameters.
///
/// The conjugate prior ties the coefficient covariance to the error covariance
/// (Sigma kron V0), so a weight cannot differ between own and cross lags of the
/// same variable. `cross_weight` therefore scales the lags of the surprise
/// block, which are cross-variable lags in every macro equation.
struct MinnesotaPrior {
  double overall_tightness = 0.2;
  double cross_weight = 0.5;
  double lag_decay = 1.0;
  double constant_looseness = 100.0;
  /// Prior mean of each macro variable's own first lag; empty means 1 (random walk).
  std::vector<double> own_lag_mean;
};

struct VarConfig {
  int lags = 12;
  int n_surprise = 2;
  MinnesotaPrior prior;
  int draws = 1000;
  std::uint64_t seed = 1;

  void validate() const {
    if (lags < 1) throw DataError("VAR lag order must be >= 1");
    if (n_surprise < 1) throw DataError("VAR needs at least one surprise variable");
    if (draws < 1) throw DataError("draw count must be >= 1");
    const auto& p = prior;
    if (!(p.overall_tightness > 0 && p.cross_weight > 0 && p.lag_decay > 0 && p.constant_looseness > 0))
      throw DataError("prior hyperparameters must be positive");
  }
};

/// Reduced-form parameters of one posterior draw. `lag_coef` is N x (N P) with
/// lag p in columns [(p-1) N, p N); rows of surprise equations are zero.
struct PosteriorDraw {
  int n_surprise = 0;
  int lags = 0;
  MatrixXd lag_coef;
  VectorXd constant;
  MatrixXd sigma;

  int n() const { return static_cast<int>(sigma.rows()); }
  auto lag(int p) const { return lag_coef.middleCols((p - 1) * n(), n()); }
};

namespace detail {

/// Sigma ~ inverse-Wishart(scale, dof) through the Bartlett decomposition of
/// Sigma^{-1} ~ Wishart(scale^{-1}, dof).
inline MatrixXd draw_inverse_wishart(const MatrixXd& scale, double dof, Rng& rng) {
  const Eigen::Index n = scale.rows();
  const MatrixXd scale_inv = scale.llt().solve(MatrixXd::Identity(n, n));
  Eigen::LLT<MatrixXd> llt(0.5 * (scale_inv + scale_inv.transpose()));
  if (llt.info() != Eigen::Success) throw NumericalError("inverse-Wishart scale is not positive definite");
  const MatrixXd L = llt.matrixL();
  std::normal_distribution<double> normal;
  MatrixXd A = MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::chi_squared_distribution<double> chi2(dof - static_cast<double>(i));
    A(i, i) = std::sqrt(chi2(rng));
    for (Eigen::Index j = 0; j < i; ++j) A(i, j) = normal(rng);
  }
  const MatrixXd B = L * A;  // lower triangular, W = B B'
  const MatrixXd B_inv = B.triangularView<Eigen::Lower>().solve(MatrixXd::Identity(n, n));
  MatrixXd sigma = B_inv.transpose() * B_inv;
  return 0.5 * (sigma + sigma.transpose());
}

}  // namespace detail

/// Closed-form posterior of the restricted VAR; draws are generated on demand.
class Posterior {
 public:
  Posterior(const MonthlyPanel& panel, const VarConfig& cfg) : cfg_(cfg) {
    cfg.validate();
    const int N = panel.variables();
    nm_ = cfg.n_surprise;
    ny_ = N - nm_;
    n_ = N;
    if (ny_ < 1) throw DataError("VAR needs at least one macro variable after the surprise block");
    for (int j = 0; j < N; ++j) {
      const bool is_surprise = panel.columns[j].role == Role::surprise;
      if (is_surprise != (j < nm_))
        throw DataError("surprise variables must be ordered first (column '" + panel.columns[j].name + "')");
    }
    const int P = cfg.lags;
    const int T = panel.periods() - P;
    if (T <= N * P + 20)
      throw DataError("insufficient sample: " + std::to_string(T) + " effective observations, need more than " +
                      std::to_string(N * P + 20));
    const auto& data = panel.values;

    // Regressors: [1, y_{t-1}, ..., y_{t-P}, m_t]
    k_ = 1 + N * P + nm_;
    MatrixXd X(T, k_);
    MatrixXd Y = data.block(P, nm_, T, ny_);
    MatrixXd M = data.block(P, 0, T, nm_);
    for (int t = 0; t < T; ++t) {
      X(t, 0) = 1.0;
      for (int p = 1; p <= P; ++p) X.block(t, 1 + (p - 1) * N, 1, N) = data.row(P + t - p);
      X.block(t, 1 + N * P, 1, nm_) = M.row(t);
    }

    // Scale of each variable: AR(1) residual variance for macro series,
    // raw second moment for surprises.
    VectorXd scale2(N);
    for (int j = 0; j < N; ++j) {
      if (j < nm_) {
        scale2(j) = data.col(j).squaredNorm() / static_cast<double>(data.rows());
      } else {
        const Eigen::Index Ta = data.rows() - 1;
        MatrixXd Z(Ta, 2);
        Z.col(0).setOnes();
        Z.col(1) = data.col(j).head(Ta);
        const VectorXd yj = data.col(j).tail(Ta);
        const VectorXd beta = Z.colPivHouseholderQr().solve(yj);
        scale2(j) = (yj - Z * beta).squaredNorm() / static_cast<double>(Ta - 2);
      }
      if (!(scale2(j) > 0.0) || !std::isfinite(scale2(j)))
        throw DataError("variable '" + panel.columns[j].name + "' has zero variance");
    }

    const auto& pr = cfg.prior;
    VectorXd v0(k_);
    v0(0) = pr.constant_looseness * pr.constant_looseness;
    for (int p = 1; p <= P; ++p) {
      const double lag_scale = pr.overall_tightness / std::pow(static_cast<double>(p), pr.lag_decay);
      for (int j = 0; j < N; ++j) {
        const double w = j < nm_ ? pr.cross_weight : 1.0;
        v0(1 + (p - 1) * N + j) = (lag_scale * w) * (lag_scale * w) / scale2(j);
      }
    }
    for (int j = 0; j < nm_; ++j)
      v0(1 + N * P + j) = pr.constant_looseness * pr.constant_looseness / scale2(j);

    MatrixXd G0 = MatrixXd::Zero(k_, ny_);
    for (int i = 0; i < ny_; ++i) {
      const double mean = pr.own_lag_mean.empty() ? 1.0 : pr.own_lag_mean.at(static_cast<std::size_t>(i));
      G0(1 + nm_ + i, i) = mean;
    }

    const VectorXd v0_inv = v0.cwiseInverse();
    MatrixXd precision = X.transpose() * X;
    precision.diagonal() += v0_inv;
    Eigen::LLT<MatrixXd> llt(precision);
    if (llt.info() != Eigen::Success) throw NumericalError("posterior precision is not positive definite");
    coef_mean_ = llt.solve(v0_inv.asDiagonal() * G0 + X.transpose() * Y);
    coef_factor_ = llt.matrixU();  // precision = U'U, so U^{-1} U^{-T} is the coefficient covariance

    const MatrixXd resid = Y - X * coef_mean_;
    const MatrixXd dev = coef_mean_ - G0;
    const double nu0 = ny_ + 2.0;
    MatrixXd S0 = scale2.tail(ny_).asDiagonal();
    S0 *= nu0 - ny_ - 1.0;
    scale_y_ = S0 + resid.transpose() * resid + dev.transpose() * v0_inv.asDiagonal() * dev;
    scale_y_ = 0.5 * (scale_y_ + scale_y_.transpose());
    dof_y_ = nu0 + T;
    if (Eigen::LLT<MatrixXd>(scale_y_).info() != Eigen::Success)
      throw NumericalError("posterior scale of the macro block is not positive definite");

    const double nu0m = nm_ + 2.0;
    MatrixXd S0m = scale2.head(nm_).asDiagonal();
    S0m *= nu0m - nm_ - 1.0;
    scale_m_ = S0m + M.transpose() * M;
    dof_m_ = nu0m + T;
    if (Eigen::LLT<MatrixXd>(scale_m_).info() != Eigen::Success)
      throw NumericalError("posterior scale of the surprise block is not positive definite");
    effective_obs_ = T;
  }

  PosteriorDraw draw(std::size_t index) const {
    Rng rng = substream(cfg_.seed, StreamTag::posterior, index);
    const MatrixXd sigma_mm = detail::draw_inverse_wishart(scale_m_, dof_m_, rng);
    const MatrixXd sigma_cond = detail::draw_inverse_wishart(scale_y_, dof_y_, rng);

    std::normal_distribution<double> normal;
    MatrixXd Z(k_, ny_);
    for (Eigen::Index j = 0; j < Z.cols(); ++j)
      for (Eigen::Index i = 0; i < Z.rows(); ++i) Z(i, j) = normal(rng);
    const MatrixXd Lc = sigma_cond.llt().matrixL();
    const MatrixXd coef =
        coef_mean_ + coef_factor_.triangularView<Eigen::Upper>().solve(MatrixXd(Z * Lc.transpose()));

    const int N = n_, P = cfg_.lags;
    PosteriorDraw d;
    d.n_surprise = nm_;
    d.lags = P;
    d.lag_coef = MatrixXd::Zero(N, N * P);
    d.lag_coef.bottomRows(ny_) = coef.middleRows(1, N * P).transpose();
    d.constant = VectorXd::Zero(N);
    d.constant.tail(ny_) = coef.row(0).transpose();
    const MatrixXd D = coef.bottomRows(nm_).transpose();  // ny x nm loading on m_t
    d.sigma.resize(N, N);
    d.sigma.topLeftCorner(nm_, nm_) = sigma_mm;
    d.sigma.bottomLeftCorner(ny_, nm_) = D * sigma_mm;
    d.sigma.topRightCorner(nm_, ny_) = d.sigma.bottomLeftCorner(ny_, nm_).transpose();
    d.sigma.bottomRightCorner(ny_, ny_) = sigma_cond + D * sigma_mm * D.transpose();
    d.sigma = 0.5 * (d.sigma + d.sigma.transpose());
    return d;
  }

  /// All configured draws; order is by draw index regardless of thread count.
  std::vector<PosteriorDraw> draws() const {
    std::vector<PosteriorDraw> out(static_cast<std::size_t>(cfg_.draws));
    parallel_for(out.size(), [&](std::size_t i) { out[i] = draw(i); });
    return out;
  }

  /// Posterior mean of the conditional-regression coefficients
  /// (rows: constant, lags, contemporaneous surprises; columns: macro equations).
  const MatrixXd& coefficient_mean() const { return coef_mean_; }
  int effective_observations() const { return effective_obs_; }
  const VarConfig& config() const { return cfg_; }

 private:
  VarConfig cfg_;
  int n_ = 0, nm_ = 0, ny_ = 0, k_ = 0, effective_obs_ = 0;
  MatrixXd coef_mean_;
  MatrixXd coef_factor_;
  MatrixXd scale_y_, scale_m_;
  double dof_y_ = 0, dof_m_ = 0;
};

inline std::vector<PosteriorDraw> fit_posterior(const MonthlyPanel& panel, const VarConfig& cfg) {
  return Posterior(panel, cfg).draws();
}

struct Companion {
  MatrixXd matrix;
  Eigen::VectorXcd eigenvalues;
  bool stable = false;
};

inline Companion companion(const PosteriorDraw& d) {
  const int N = d.n(), P = d.lags;
  Companion c;
  c.matrix = MatrixXd::Zero(N * P, N * P);
  c.matrix.topRows(N) = d.lag_coef;
  if (P > 1) c.matrix.bottomLeftCorner(N * (P - 1), N * (P - 1)).setIdentity();
  c.eigenvalues = Eigen::EigenSolver<MatrixXd>(c.matrix, false).eigenvalues();
  c.stable = c.eigenvalues.cwiseAbs().maxCoeff() < 1.0;
  return c;
}

/// Psi_0 .. Psi_H: responses to reduced-form innovations,
/// Psi_h = sum_{p=1}^{min(h, P)} B_p Psi_{h-p}.
inline std::vector<MatrixXd> reduced_irf(const PosteriorDraw& d, int horizon) {
  if (horizon < 0) throw DataError("horizon must be >= 0");
  const int N = d.n();
  std::vector<MatrixXd> psi;
  psi.reserve(static_cast<std::size_t>(horizon) + 1);
  psi.push_back(MatrixXd::Identity(N, N));
  for (int h = 1; h <= horizon; ++h) {
    MatrixXd acc = MatrixXd::Zero(N, N);
    for (int p = 1; p <= std::min(h, d.lags); ++p) acc.noalias() += d.lag(p) * psi[static_cast<std::size_t>(h - p)];
    psi.push_back(std::move(acc));
  }
  return psi;
}

/// Simulates T observations of a VAR from the draw's parameters after `burn_in`
/// discarded periods, starting from zeros.
inline MatrixXd simulate(const PosteriorDraw& truth, int periods, int burn_in, Rng& rng) {
  const int N = truth.n(), P = truth.lags;
  Eigen::LLT<MatrixXd> llt(truth.sigma);
  if (llt.info() != Eigen::Success) throw NumericalError("simulation covariance is not positive definite");
  const MatrixXd L = llt.matrixL();
  std::normal_distribution<double> normal;
  const int total = periods + burn_in + P;
  MatrixXd y = MatrixXd::Zero(total, N);
  VectorXd z(N);
  for (int t = P; t < total; ++t) {
    for (int i = 0; i < N; ++i) z(i) = normal(rng);
    VectorXd yt = truth.constant + L * z;
    for (int p = 1; p <= P; ++p) yt.noalias() += truth.lag(p) * y.row(t - p).transpose();
    y.row(t) = yt.transpose();
  }
  return y.bottomRows(periods);
}

}  // namespace spillover::bvar
