#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <chrono>
#include <cmath>
#include <limits>

#include "spillover/dsge.hpp"

using namespace spillover;
using namespace spillover::dsge;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Lognormal integrals over log(omega) ~ N(-s^2/2, s^2).
struct Quad {
  double F, G;
};
Quad quadrature(double omega_bar, double s) {
  using boost::math::quadrature::gauss_kronrod;
  const double m = -0.5 * s * s;
  auto phi = [&](double x) { return std::exp(-0.5 * (x - m) * (x - m) / (s * s)) / (s * std::sqrt(2.0 * M_PI)); };
  const double lo = -std::numeric_limits<double>::infinity(), hi = std::log(omega_bar);
  const double F = gauss_kronrod<double, 61>::integrate(phi, lo, hi, 15, 1e-14);
  const double G = gauss_kronrod<double, 61>::integrate([&](double x) { return std::exp(x) * phi(x); }, lo, hi, 15, 1e-14);
  return {F, G};
}

const ModelSolution& baseline() {
  static const ModelSolution m = solve_model(DsgeParams{});
  return m;
}

}  // namespace

TEST(Bgg, MatchesQuadrature) {
  for (double ob : {0.3, 0.5, 0.8}) {
    const auto b = bgg_contract(ob, 0.22);
    const auto q = quadrature(ob, 0.22);
    EXPECT_NEAR(b.F, q.F, 1e-6) << ob;
    EXPECT_NEAR(b.G, q.G, 1e-6) << ob;
    EXPECT_NEAR(b.Gamma, q.G + ob * (1.0 - q.F), 1e-6) << ob;
  }
}

TEST(Bgg, DerivativesMatchFiniteDifferences) {
  const double s = 0.3, h = 1e-6;
  for (double ob : {0.4, 0.7, 1.1}) {
    const auto b = bgg_contract(ob, s), up = bgg_contract(ob + h, s), dn = bgg_contract(ob - h, s);
    EXPECT_NEAR(b.dF, (up.F - dn.F) / (2 * h), 1e-6);
    EXPECT_NEAR(b.dG, (up.G - dn.G) / (2 * h), 1e-6);
    EXPECT_NEAR(b.dGamma, (up.Gamma - dn.Gamma) / (2 * h), 1e-6);
  }
}

TEST(Bgg, LimitsAndShape) {
  const auto small = bgg_contract(1e-6, 0.22);
  EXPECT_LT(small.F, 1e-12);
  EXPECT_LT(small.Gamma, 1e-5);
  EXPECT_NEAR(bgg_contract(50.0, 0.22).Gamma, 1.0, 1e-12);
  double prev = 0.0;
  for (double ob = 0.05; ob < 3.0; ob += 0.05) {
    const auto b = bgg_contract(ob, 0.22);
    EXPECT_GT(b.Gamma, prev);
    if (ob >= 0.3) EXPECT_LT(b.net(0.25), b.Gamma);
    EXPECT_GE(b.F, 0.0);
    EXPECT_LE(b.F, 1.0);
    prev = b.Gamma;
  }
  EXPECT_THROW(bgg_contract(0.0, 0.22), DataError);
  EXPECT_THROW(bgg_contract(0.5, 0.0), DataError);
}

TEST(Params, LookupByName) {
  DsgeParams p;
  param_ref(p, "kappa") = 3.5;
  EXPECT_EQ(p.kappa, 3.5);
  EXPECT_EQ(param_value(p, "a22"), 0.955);
  EXPECT_THROW(param_ref(p, "no_such_parameter"), DataError);
  p.beta = 1.2;
  EXPECT_THROW(p.validate(), DataError);
}

TEST(SteadyState, ResidualsAndPositivity) {
  const auto& ss = baseline().ss;
  EXPECT_LT(ss.max_residual, 1e-8);
  for (int i = 0; i < kNumVars; ++i)
    if (!is_level(i)) EXPECT_GT(ss[i], 0.0) << kVarNames[i];
  EXPECT_GT(ss[v::nw], 0.0);
  EXPECT_GT(ss.leverage(), 1.0);
  EXPECT_GT(ss[v::rk_ret], ss[v::rd]);
}

TEST(SteadyState, EulerEquationFixesDepositRate) {
  DsgeParams p;
  p.pi_bar = 1.0;
  p.psi = 1.0;
  const auto ss = compute_steady_state(p);
  EXPECT_NEAR(ss[v::rd], 1.0 / p.beta, 1e-14);
  EXPECT_NEAR(ss[v::rd], 1.0099, 1e-4);
}

TEST(SteadyState, PortfolioShareSitsAtTarget) {
  // With psi R* = R_d there is no expected return gap, so the deposit
  // share equals its target.
  const auto& m = baseline();
  EXPECT_NEAR(m.ss[v::s] * m.ss[v::rstar], m.ss[v::rd], 1e-14);
  EXPECT_NEAR(m.ss[v::theta_share], m.params.upsilon, 1e-10);
}

TEST(SteadyState, RejectsBadCalibration) {
  DsgeParams p;
  p.phi_debt = 1.0;
  EXPECT_THROW(compute_steady_state(p), DataError);
  p = DsgeParams{};
  p.sigma = -0.1;
  EXPECT_THROW(compute_steady_state(p), DataError);
}

TEST(Linearize, EulerRowIsAnalytic) {
  const auto& lm = baseline().lm;
  EXPECT_NEAR(lm.G(2, v::lam), -1.0, 1e-7);
  EXPECT_NEAR(lm.G(2, v::rd), 1.0, 1e-7);
  EXPECT_NEAR(lm.F(2, v::lam), 1.0, 1e-7);
  EXPECT_NEAR(lm.F(2, v::pic), -1.0, 1e-7);
  EXPECT_EQ(lm.H.row(2).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Linearize, ForeignRowsReproduceVarCoefficients) {
  const auto& m = baseline();
  const auto& P = m.params;
  EXPECT_NEAR(m.lm.H(39, v::yf), -P.a11, 1e-12);
  EXPECT_NEAR(m.lm.H(39, v::rstar), -P.a12, 1e-12);
  EXPECT_NEAR(m.lm.H(40, v::yf), -P.a21, 1e-12);
  EXPECT_NEAR(m.lm.H(40, v::rstar), -P.a22, 1e-12);
  EXPECT_NEAR(m.lm.M(40, eps_rstar), -P.sigma_rstar, 1e-12);
  EXPECT_EQ(m.lm.M(39, eps_rstar), 0.0);
}

TEST(Linearize, RichardsonConsistency) {
  const auto& lm = baseline().lm;
  const double scale = std::max({lm.F.cwiseAbs().maxCoeff(), lm.G.cwiseAbs().maxCoeff(), lm.H.cwiseAbs().maxCoeff()});
  EXPECT_LT(lm.richardson_gap / scale, 1e-6);
}

TEST(Linearize, SteadyStateIsAFixedPoint) {
  const auto& m = baseline();
  const Vec r = residuals(m.params, m.ss.anchors, m.ss.levels, m.ss.levels, m.ss.levels, Vec::Zero(kNumShocks));
  EXPECT_LT(r.cwiseAbs().maxCoeff(), 1e-8);
}

TEST(SolveRe, ScalarForwardEquation) {
  // x_t = a E x_{t+1} + e_t
  const double a = 0.6;
  MatrixXd F(1, 1), G(1, 1), H(1, 1), M(1, 1);
  F << a;
  G << -1.0;
  H << 0.0;
  M << 1.0;
  const auto s = solve_re(F, G, H, M);
  EXPECT_NEAR(s.T(0, 0), 0.0, 1e-12);
  EXPECT_NEAR(s.R(0, 0), 1.0, 1e-12);
}

TEST(SolveRe, TwoEquationClosedForm) {
  // x1 = rho x1(-1) + e ; x2 = beta E x2(+1) + x1
  const double rho = 0.8, beta = 0.95;
  MatrixXd F = MatrixXd::Zero(2, 2), G = MatrixXd::Zero(2, 2), H = MatrixXd::Zero(2, 2), M(2, 1);
  G(0, 0) = 1.0;
  H(0, 0) = -rho;
  M << -1.0, 0.0;
  F(1, 1) = -beta;
  G(1, 1) = 1.0;
  G(1, 0) = -1.0;
  const auto s = solve_re(F, G, H, M);
  const double k = 1.0 / (1.0 - beta * rho);
  MatrixXd T(2, 2), R(2, 1);
  T << rho, 0.0, rho * k, 0.0;
  R << 1.0, k;
  EXPECT_LT((s.T - T).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((s.R - R).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(SolveRe, ReportsRootCounts) {
  // x_{t+1} - c1 x_t + c0 x_{t-1} = 0 with roots (0.2, 0.5): indeterminate
  MatrixXd F(1, 1), G(1, 1), H(1, 1), M(1, 1);
  F << 1.0;
  G << -0.7;
  H << 0.1;
  M << 1.0;
  try {
    solve_re(F, G, H, M);
    FAIL() << "expected indeterminacy";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("indeterminacy"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("2 stable roots for 1"), std::string::npos);
  }
  // roots (2, 3): no stable solution
  G << -5.0;
  H << 6.0;
  try {
    solve_re(F, G, H, M);
    FAIL() << "expected explosive system";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("0 stable roots"), std::string::npos);
  }
}

TEST(Solution, BaselineIsDeterminate) {
  const auto& m = baseline();
  EXPECT_EQ(m.sol.stable_roots, m.sol.required);
  EXPECT_LT(m.sol.spectral_radius, 1.0);
  const MatrixXd res = m.lm.F * m.sol.T * m.sol.T + m.lm.G * m.sol.T + m.lm.H;
  EXPECT_LT(res.cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Solution, FastEnough) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 5; ++i) solve_model(DsgeParams{});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 10.0);
}

TEST(ModelIrf, ForeignOutputDoesNotMoveOnImpact) {
  const MatrixXd o = model_irf(baseline(), eps_rstar, 12);
  EXPECT_EQ(o(0, obs::ystar), 0.0);
  EXPECT_NEAR(o(0, obs::rstar), 400.0 * baseline().params.sigma_rstar, 1e-12);
}

TEST(ModelIrf, ForeignBlockFollowsItsVar) {
  const auto& m = baseline();
  const auto& P = m.params;
  const MatrixXd x = state_irf(m.sol, eps_rstar, 20);
  for (int h = 0; h < 20; ++h) {
    EXPECT_NEAR(x(h + 1, v::yf), P.a11 * x(h, v::yf) + P.a12 * x(h, v::rstar), 1e-12);
    EXPECT_NEAR(x(h + 1, v::rstar), P.a21 * x(h, v::yf) + P.a22 * x(h, v::rstar), 1e-12);
  }
}

TEST(ModelIrf, LinearInShockSize) {
  const MatrixXd one = model_irf(baseline(), eps_rstar, 40, 1.0);
  const MatrixXd two = model_irf(baseline(), eps_rstar, 40, 2.0);
  EXPECT_LT((two - 2.0 * one).cwiseAbs().maxCoeff() / one.cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ModelIrf, ForeignRateHikeSigns) {
  const MatrixXd o = model_irf(baseline(), eps_rstar, 12);
  const MatrixXd x = state_irf(baseline().sol, eps_rstar, 12);
  EXPECT_GT(o(0, obs::ner), 0.0);     // peso depreciates
  EXPECT_LT(x(0, v::inv), 0.0);       // investment falls
  EXPECT_GT(o(0, obs::rd), 0.0);
  EXPECT_LT(o(0, obs::reserves), 0.0);  // reserve sales
  EXPECT_GT(o(0, obs::spread), 0.0);
}

TEST(ModelIrf, DecaysOnAFastCalibration) {
  DsgeParams p;
  p.a22 = 0.5;
  p.a11 = 0.5;
  p.r_s = 0.1;  // the exchange-rate level otherwise carries a root near 0.97
  const auto m = solve_model(p);
  const MatrixXd x = state_irf(m.sol, eps_rstar, 200);
  EXPECT_LT(x.row(200).cwiseAbs().maxCoeff(), 1e-6 * x.row(0).cwiseAbs().maxCoeff());
}

TEST(ModelIrf, ReservesTrackTargetWithoutIntervention) {
  DsgeParams p;
  p.theta_rstar = 0.0;
  p.rho_fx = 0.0;
  const auto m = solve_model(p);
  const MatrixXd x = state_irf(m.sol, eps_rstar, 24);
  EXPECT_LT((x.col(v::fstar) - x.col(v::fbar)).cwiseAbs().maxCoeff(), 1e-12);
  // with intervention the central bank sells more than the target implies
  const MatrixXd y = state_irf(baseline().sol, eps_rstar, 4);
  EXPECT_LT(y(0, v::fstar) - y(0, v::fbar), 0.0);
}

TEST(ModelIrf, UnknownNamesAreErrors) {
  EXPECT_THROW(shock_index("eps_nothing"), DataError);
  EXPECT_THROW(observable_index("gdp"), DataError);
  EXPECT_THROW(state_irf(baseline().sol, 7, 4), DataError);
}
