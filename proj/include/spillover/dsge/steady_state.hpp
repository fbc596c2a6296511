#pragma once

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>

#include "spillover/dsge/model.hpp"

namespace spillover::dsge {

struct SteadyState {
  Vec levels;  // indexed by v::Var
  ModelAnchors anchors;
  double max_residual = 0.0;

  double operator[](int i) const { return levels[i]; }
  double leverage() const { return levels[v::pk] * levels[v::k] / levels[v::nw]; }
};

namespace detail {

/// Root of f on [lo, hi] where f changes sign; the bracket is first located
/// by scanning `n` points (geometrically when `log_scale`).
inline std::optional<double> find_root(const std::function<double(double)>& f, double lo, double hi, int n,
                                       bool log_scale) {
  auto point = [&](int i) {
    const double t = static_cast<double>(i) / n;
    return log_scale ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
  };
  double a = point(0), fa = f(a);
  for (int i = 1; i <= n; ++i) {
    const double b = point(i), fb = f(b);
    if (std::isfinite(fa) && std::isfinite(fb) && (fa == 0.0 || fa * fb < 0.0)) {
      if (fa == 0.0) return a;
      std::uintmax_t iters = 200;
      auto tol = [](double u, double w) { return std::fabs(u - w) <= 1e-15 * std::fabs(u); };
      const auto [r0, r1] = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
      return 0.5 * (r0 + r1);
    }
    a = b;
    fa = fb;
  }
  return std::nullopt;
}

struct Candidate {
  Vec x;
  double q_residual = NAN;   // portfolio condition, closes q
  double nw_residual = NAN;  // net-worth law, closes omega_bar
  bool ok = false;
};

/// All steady-state quantities given omega_bar and the real exchange rate.
inline Candidate build(const DsgeParams& P, double omega_bar, double qv) {
  using namespace v;
  Candidate out;
  Vec X = Vec::Constant(kNumVars, NAN);
  const double pibar = P.pi_bar, pif = P.pi_f();
  const double Rd = pibar / P.beta, Rs = P.rstar_ss();

  X[pic] = X[pid] = pibar;
  X[s] = P.psi;
  X[stil] = 1.0;
  X[rd] = Rd;
  X[rstar] = Rs;
  X[rf] = P.phi_debt * Rd + (1.0 - P.phi_debt) * P.psi * Rs;
  X[pixd] = pif;
  X[ptil] = X[ptilx] = 1.0;
  X[mc] = (P.epsilon - 1.0) / P.epsilon;
  X[yf] = P.yf_bar;
  X[q] = qv;

  const double cpi_rest = 1.0 - P.omega_c * std::pow(qv, 1.0 - P.eta_c);
  if (!(cpi_rest > 0.0)) return out;
  X[p] = std::pow(cpi_rest / (1.0 - P.omega_c), 1.0 / (1.0 - P.eta_c));
  X[pinv] = std::pow(P.gamma_i * std::pow(X[p], 1.0 - P.nu_i) + (1.0 - P.gamma_i) * std::pow(qv, 1.0 - P.nu_i),
                     1.0 / (1.0 - P.nu_i));
  X[pk] = X[pinv];
  X[pxd] = P.epsilon_x / (P.epsilon_x - 1.0) * X[p] / qv;
  X[px] = std::pow(P.gamma_x * std::pow(X[pxd], 1.0 - P.eta_x) + 1.0 - P.gamma_x, 1.0 / (1.0 - P.eta_x));

  // Contract: R^k / R^f from the entrepreneur's condition, leverage from the bank's.
  const BggTerms b = bgg_contract(omega_bar, P.sigma);
  const double eta = b.dGamma / b.dnet(P.mu);
  const double u = eta / ((1.0 - b.Gamma) + eta * b.net(P.mu));
  const double lev = 1.0 / (1.0 - b.net(P.mu) * u);
  if (!(u > 0.0) || !(lev > 1.0) || !std::isfinite(lev)) return out;
  X[omb] = omega_bar;
  X[rk_ret] = u * X[rf];
  X[rk] = X[pk] * (X[rk_ret] / pibar - (1.0 - P.delta));
  if (!(X[rk] > 0.0)) return out;

  const double k_y = X[mc] * X[p] * P.alpha / X[rk];
  const double k_l = std::pow(k_y, 1.0 / (1.0 - P.alpha));
  const double y_l = std::pow(k_l, P.alpha);
  X[w] = X[mc] * X[p] * (1.0 - P.alpha) * y_l;

  X[x] = std::pow(X[px], -P.eta_f) * P.yf_bar;
  X[xd] = P.gamma_x * std::pow(X[pxd] / X[px], -P.eta_x) * X[x];
  X[xm] = (1.0 - P.gamma_x) * std::pow(X[px], P.eta_x) * X[x];

  // Goods market in labour: a l - b0 - c0 l^(-phi) = 0.
  const double id_share = P.gamma_i * std::pow(X[p] / X[pinv], -P.nu_i) * P.delta * k_l;
  const double mon_share = P.mu * b.G * X[rk_ret] * X[pk] * k_l / (pibar * X[p]);
  const double a = y_l - id_share - mon_share;
  const double b0 = X[xd] + P.g;
  const double c0 = (1.0 - P.omega_c) * std::pow(X[p], -P.eta_c) * X[w];
  if (!(a > 0.0)) return out;
  auto goods = [&](double lv) { return a * lv - b0 - c0 * std::pow(lv, -P.phi_labor); };
  const auto l_root = find_root(goods, 1e-8, 1e6, 1, true);  // increasing in l
  if (!l_root) return out;
  const double lv = *l_root;

  X[l] = lv;
  X[k] = k_l * lv;
  X[y] = y_l * lv;
  X[inv] = P.delta * X[k];
  X[c] = X[w] / std::pow(lv, P.phi_labor);
  X[lam] = 1.0 / X[c];
  X[cd] = (1.0 - P.omega_c) * std::pow(X[p], -P.eta_c) * X[c];
  X[cm] = P.omega_c * std::pow(qv, -P.eta_c) * X[c];
  X[id] = P.gamma_i * std::pow(X[p] / X[pinv], -P.nu_i) * X[inv];
  X[im] = (1.0 - P.gamma_i) * std::pow(qv / X[pinv], -P.nu_i) * X[inv];
  X[mon] = P.mu * b.G * X[rk_ret] * X[pk] * X[k] / pibar;

  X[fp] = X[lam] * X[p] * X[y] / (1.0 - P.beta * P.theta);
  X[kp] = X[fp];
  X[fx] = X[lam] * qv * X[pxd] * X[xd] / (1.0 - P.beta * P.theta_x);
  X[kx] = X[fx];

  X[nw] = X[pk] * X[k] / lev;
  X[be] = X[pk] * X[k] - X[nw];
  X[ze] = omega_bar * X[rk_ret] * lev / (lev - 1.0);

  X[tb] = X[px] * X[x] - X[cm] - X[im] - X[xm];
  X[nfa] = X[tb] / (1.0 - Rs / pif);
  X[bdol] = (1.0 - P.phi_debt) * X[be] / qv;
  const double gross = P.upsilon_cb * (Rs * X[bdol] / pif + X[cm] + X[im] + X[xm]);
  X[fbar] = std::exp(std::log(gross) - P.vartheta / (1.0 - P.vartheta) * std::log(pif));
  X[fstar] = X[fbar];
  X[d] = P.phi_debt * X[be] + qv * X[fstar];
  X[dstar] = X[nfa] - X[fstar] + X[bdol];
  X[db] = X[d] + qv * X[dstar];
  X[theta_share] = qv * X[dstar] / X[db];

  // Portfolio condition multiplied through by db, which removes the pole at
  // db = 0. At the steady state the deposit scale cancels.
  out.q_residual = P.gamma_ups * (qv * X[dstar] - P.upsilon * X[db]) - 400.0 * P.beta * (P.psi * Rs - Rd) * X[db];
  const double nw_law = P.gamma_e * (1.0 - b.Gamma) * X[rk_ret] * X[pk] * X[k] / pibar + P.w_e;
  out.nw_residual = nw_law / X[nw] - 1.0;
  out.x = std::move(X);
  out.ok = true;
  return out;
}

inline std::optional<Candidate> solve_q(const DsgeParams& P, double omega_bar) {
  auto f = [&](double qv) {
    const auto cand = build(P, omega_bar, qv);
    return cand.ok ? cand.q_residual : NAN;
  };
  const auto root = find_root(f, 0.05, 20.0, 40, true);
  if (!root) return std::nullopt;
  auto cand = build(P, omega_bar, *root);
  if (!cand.ok) return std::nullopt;
  return cand;
}

}  // namespace detail

inline std::string describe_residuals(const Vec& r, double tol) {
  std::ostringstream os;
  for (int i = 0; i < r.size(); ++i)
    if (!(std::fabs(r[i]) < tol)) os << " eq" << i << "=" << r[i];
  return os.str();
}

inline SteadyState compute_steady_state(const DsgeParams& P) {
  P.validate();
  if (P.phi_debt >= 1.0) throw DataError("invalid calibration: phi_debt must be below 1 (dollar debt is logged)");
  auto f = [&](double om) {
    const auto cand = detail::solve_q(P, om);
    return cand ? cand->nw_residual : NAN;
  };
  const auto om = detail::find_root(f, 0.05, 2.0, 40, true);
  if (!om) throw NumericalError("steady state: no default threshold balances the net-worth law");
  const auto cand = detail::solve_q(P, *om);
  if (!cand) throw NumericalError("steady state: real exchange rate not found at the solution");

  SteadyState ss;
  ss.levels = cand->x;
  ss.anchors.y_ss = ss.levels[v::y];
  ss.anchors.deposit_value = ss.levels[v::lam] * ss.levels[v::db] / P.pi_bar;
  const Vec r = residuals(P, ss.anchors, ss.levels, ss.levels, ss.levels, Vec::Zero(kNumShocks));
  ss.max_residual = r.cwiseAbs().maxCoeff();
  if (!(ss.max_residual < 1e-8))
    throw NumericalError("steady state residuals too large:" + describe_residuals(r, 1e-8));
  for (int i = 0; i < kNumVars; ++i)
    if (!is_level(i) && !(ss.levels[i] > 0.0))
      throw NumericalError("steady state: " + std::string(kVarNames[i]) + " is not positive");
  return ss;
}

}  // namespace spillover::dsge
