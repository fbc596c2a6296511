#include <gtest/gtest.h>

#include <algorithm>
#include <complex>
#include <numeric>

#include "fixtures.hpp"
#include "spillover/bvar.hpp"

using namespace spillover;
using namespace spillover::bvar;
using Eigen::MatrixXd;

namespace {

using Poly = std::vector<double>;  // ascending powers

Poly mul(const Poly& a, const Poly& b) {
  Poly c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

Poly sub(Poly a, const Poly& b) {
  a.resize(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  return a;
}

// Durand-Kerner iteration for the roots of a monic polynomial.
std::vector<std::complex<double>> poly_roots(const Poly& p) {
  const std::size_t n = p.size() - 1;
  std::vector<std::complex<double>> z(n);
  const std::complex<double> seed(0.4, 0.9);
  for (std::size_t i = 0; i < n; ++i) z[i] = std::pow(seed, static_cast<double>(i));
  auto eval = [&](std::complex<double> x) {
    std::complex<double> v = 0.0;
    for (std::size_t k = p.size(); k-- > 0;) v = v * x + p[k];
    return v;
  };
  for (int it = 0; it < 2000; ++it) {
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::complex<double> denom = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) denom *= z[i] - z[j];
      const auto step = eval(z[i]) / denom;
      z[i] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-15) break;
  }
  return z;
}

PosteriorDraw scalar_var(double b) {
  PosteriorDraw d;
  d.n_surprise = 0;
  d.lags = 1;
  d.lag_coef = MatrixXd::Constant(1, 1, b);
  d.constant = Eigen::VectorXd::Zero(1);
  d.sigma = MatrixXd::Identity(1, 1);
  return d;
}

// Each oracle root must have a distinct companion eigenvalue within tol.
void expect_same_roots(const Eigen::VectorXcd& eig, std::vector<std::complex<double>> roots, double tol) {
  ASSERT_EQ(static_cast<std::size_t>(eig.size()), roots.size());
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    auto best = std::min_element(roots.begin(), roots.end(), [&](auto a, auto b) {
      return std::abs(a - eig(i)) < std::abs(b - eig(i));
    });
    EXPECT_LT(std::abs(*best - eig(i)), tol) << eig(i);
    roots.erase(best);
  }
}

// det(l^2 I - B1 l - B2) restricted to the listed rows/columns of a 2-block.
Poly char_poly_2x2(const PosteriorDraw& d, int a, int b) {
  const auto B1 = d.lag(1), B2 = d.lag(2);
  auto entry = [&](int i, int j) {
    Poly p{-B2(i, j), -B1(i, j), 0.0};
    if (i == j) p[2] = 1.0;
    return p;
  };
  return sub(mul(entry(a, a), entry(b, b)), mul(entry(a, b), entry(b, a)));
}

}  // namespace

TEST(Companion, EigenvaluesMatchPolynomialRoots) {
  PosteriorDraw d;
  d.n_surprise = 0;
  d.lags = 2;
  d.lag_coef.resize(2, 4);
  d.lag_coef << 0.5, 0.1, -0.2, 0.05, 0.3, 0.4, 0.1, -0.15;
  d.constant = Eigen::VectorXd::Zero(2);
  d.sigma = MatrixXd::Identity(2, 2);
  const auto c = companion(d);
  expect_same_roots(c.eigenvalues, poly_roots(char_poly_2x2(d, 0, 1)), 1e-10);
  EXPECT_TRUE(c.stable);
}

TEST(Companion, RestrictedFixtureRoots) {
  // Zero surprise rows: det(l^2 I - B1 l - B2) = l^4 times the macro-block
  // determinant. The zero root is defective, so it is only accurate to ~sqrt(eps).
  const auto d = fixtures::restricted_var2();
  auto roots = poly_roots(char_poly_2x2(d, 2, 3));
  const auto c = companion(d);
  Eigen::VectorXcd big(4);
  int k = 0;
  for (Eigen::Index i = 0; i < c.eigenvalues.size(); ++i) {
    if (std::abs(c.eigenvalues(i)) < 1e-6) continue;
    ASSERT_LT(k, 4);
    big(k++) = c.eigenvalues(i);
  }
  ASSERT_EQ(k, 4);
  expect_same_roots(big, roots, 1e-10);
  EXPECT_TRUE(c.stable);
}

TEST(Companion, ZeroAndUnitCases) {
  auto d = scalar_var(0.0);
  d.lag_coef = MatrixXd::Zero(3, 3);
  d.sigma = MatrixXd::Identity(3, 3);
  auto c = companion(d);
  EXPECT_TRUE(c.matrix.isZero());
  EXPECT_TRUE(c.stable);
  d.lag_coef = MatrixXd::Identity(3, 3);
  c = companion(d);
  EXPECT_FALSE(c.stable);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(std::abs(c.eigenvalues(i)), 1.0, 1e-14);
}

TEST(ReducedIrf, GeometricScalarCase) {
  const auto psi = reduced_irf(scalar_var(0.5), 10);
  EXPECT_EQ(psi[0](0, 0), 1.0);
  for (int h = 0; h <= 10; ++h) EXPECT_DOUBLE_EQ(psi[h](0, 0), std::pow(0.5, h));
  EXPECT_THROW(reduced_irf(scalar_var(0.5), -1), DataError);
}

TEST(ReducedIrf, MatchesDifferenceEquationSimulation) {
  const auto d = fixtures::restricted_var2();
  const int H = 30, N = d.n();
  const auto psi = reduced_irf(d, H);
  for (int j = 0; j < N; ++j) {
    // y_t = B1 y_{t-1} + B2 y_{t-2} + e_j 1{t=0}
    std::vector<Eigen::VectorXd> y(H + 3, Eigen::VectorXd::Zero(N));
    for (int t = 0; t <= H; ++t) {
      Eigen::VectorXd v = d.lag(1) * y[t + 1] + d.lag(2) * y[t];
      if (t == 0) v(j) += 1.0;
      y[t + 2] = v;
    }
    for (int h = 0; h <= H; ++h) EXPECT_LT((psi[h].col(j) - y[h + 2]).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(ReducedIrf, DecaysForStableFixture) {
  auto d = fixtures::restricted_var2();
  const auto c = companion(d);
  ASSERT_LE(c.eigenvalues.cwiseAbs().maxCoeff(), 0.9);
  const auto psi = reduced_irf(d, 200);
  EXPECT_LT(psi[200].norm(), 1e-4);
}

TEST(Posterior, ZeroBlockAndPositiveDefiniteInEveryDraw) {
  const auto truth = fixtures::restricted_var2();
  Rng rng(17);
  const auto panel = fixtures::as_panel(simulate(truth, 400, 200, rng), 2);
  VarConfig cfg;
  cfg.lags = 2;
  cfg.draws = 300;
  const auto draws = fit_posterior(panel, cfg);
  ASSERT_EQ(draws.size(), 300u);
  for (const auto& d : draws) {
    EXPECT_TRUE((d.lag_coef.topRows(2).array() == 0.0).all());
    EXPECT_TRUE((d.constant.head(2).array() == 0.0).all());
    EXPECT_EQ(Eigen::LLT<MatrixXd>(d.sigma).info(), Eigen::Success);
    EXPECT_EQ((d.sigma - d.sigma.transpose()).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Posterior, SameSeedSameDraws) {
  const auto truth = fixtures::restricted_var2();
  Rng rng(4);
  const auto panel = fixtures::as_panel(simulate(truth, 300, 100, rng), 2);
  VarConfig cfg;
  cfg.lags = 2;
  cfg.draws = 20;
  cfg.seed = 99;
  const auto a = fit_posterior(panel, cfg);
  const auto b = fit_posterior(panel, cfg);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].lag_coef, b[i].lag_coef);
    EXPECT_EQ(a[i].sigma, b[i].sigma);
  }
  cfg.seed = 100;
  const auto c = fit_posterior(panel, cfg);
  EXPECT_NE(a[0].lag_coef, c[0].lag_coef);
}

TEST(Posterior, RecoversKnownCoefficients) {
  const auto truth = fixtures::restricted_var2();
  Rng rng(2024);
  const auto panel = fixtures::as_panel(simulate(truth, 2000, 500, rng), 2);
  VarConfig cfg;
  cfg.lags = 2;
  cfg.draws = 500;
  cfg.prior.own_lag_mean = {0.0, 0.0};
  const auto draws = fit_posterior(panel, cfg);
  const Eigen::Index rows = 2, cols = truth.lag_coef.cols();
  MatrixXd mean = MatrixXd::Zero(rows, cols), sq = MatrixXd::Zero(rows, cols);
  for (const auto& d : draws) {
    mean += d.lag_coef.bottomRows(2);
    sq += d.lag_coef.bottomRows(2).cwiseAbs2();
  }
  mean /= static_cast<double>(draws.size());
  const MatrixXd sdev = (sq / static_cast<double>(draws.size()) - mean.cwiseAbs2()).cwiseSqrt();
  const MatrixXd err = mean - truth.lag_coef.bottomRows(2);
  EXPECT_LT(std::sqrt(err.squaredNorm() / static_cast<double>(err.size())), 0.05);
  for (Eigen::Index i = 0; i < err.size(); ++i) EXPECT_LT(std::abs(err.data()[i]), 3.0 * sdev.data()[i]) << i;
}

TEST(Posterior, WhiteNoiseGivesSmallLagCoefficients) {
  PosteriorDraw noise;
  noise.n_surprise = 1;
  noise.lags = 1;
  noise.lag_coef = MatrixXd::Zero(3, 3);
  noise.constant = Eigen::VectorXd::Zero(3);
  noise.sigma = MatrixXd::Identity(3, 3);
  Rng rng(8);
  const auto panel = fixtures::as_panel(simulate(noise, 2000, 0, rng), 1);
  VarConfig cfg;
  cfg.lags = 3;
  cfg.n_surprise = 1;
  cfg.draws = 1;
  Posterior post(panel, cfg);
  const MatrixXd lags = post.coefficient_mean().middleRows(1, 9);
  EXPECT_LT(lags.cwiseAbs().maxCoeff(), 0.1);
}

TEST(Posterior, InsufficientSampleAndOrdering) {
  Eigen::MatrixXd y = Eigen::MatrixXd::Random(40, 4);
  VarConfig cfg;
  cfg.lags = 12;
  EXPECT_THROW(Posterior(fixtures::as_panel(y, 2), cfg), DataError);
  auto p = fixtures::as_panel(Eigen::MatrixXd::Random(300, 4), 2);
  std::swap(p.columns[0], p.columns[3]);
  cfg.lags = 1;
  EXPECT_THROW(Posterior(p, cfg), DataError);
}
