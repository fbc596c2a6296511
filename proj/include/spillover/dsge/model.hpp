#pragma once

// Equilibrium conditions of the small open economy in stationary form.
// Real quantities are in consumption units, dollar quantities are deflated by
// the foreign price level, and relative prices are
//   p  = P / Pc         (domestic good)
//   q  = S Pf / Pc      (real exchange rate, import price)
//   px = Px / Pf, pxd = Pxd / Pf   (dollar export prices)
// Every residual is written as ratio - 1 or as a plain difference for the
// few variables that can change sign, so residuals are scale free.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <string_view>

#include "spillover/dsge/bgg.hpp"
#include "spillover/dsge/params.hpp"

namespace spillover::dsge {

namespace v {
enum Var : int {
  c, lam, l, w, rd, pic, p, q, pid, s, stil,
  pinv, pk, inv, k, rk_ret, rk, mc, y,
  fp, kp, ptil,
  omb, nw, be, rf, ze, mon,
  cd, cm, id, im, x, xd, xm, px, pxd,
  fx, kx, ptilx, pixd,
  yf, rstar, fstar, fbar,
  bdol, d, dstar, db, theta_share, nfa, tb,
  kNumVars
};
}  // namespace v

using v::kNumVars;

inline constexpr int kNumEq = kNumVars;

inline constexpr std::array<std::string_view, kNumVars> kVarNames{
    "c", "lam", "l", "w", "rd", "pic", "p", "q", "pid", "s", "stil",
    "pinv", "pk", "inv", "k", "rk_ret", "rk", "mc", "y",
    "fp", "kp", "ptil",
    "omb", "nw", "be", "rf", "ze", "mon",
    "cd", "cm", "id", "im", "x", "xd", "xm", "px", "pxd",
    "fx", "kx", "ptilx", "pixd",
    "yf", "rstar", "fstar", "fbar",
    "bdol", "d", "dstar", "db", "theta_share", "nfa", "tb"};

/// Variables handled in levels; all others are log deviations.
inline constexpr bool is_level(int i) { return i == v::theta_share || i == v::nfa || i == v::tb; }

enum Shock : int { eps_rstar, eps_ystar, eps_r, kNumShocks };
inline constexpr std::array<std::string_view, kNumShocks> kShockNames{"eps_rstar", "eps_ystar", "eps_r"};

using Vec = Eigen::VectorXd;

/// Steady-state quantities the residuals refer to: output for the Taylor
/// rule and the marginal-utility value of deposits, lam * db / pi, which
/// scales the portfolio condition.
struct ModelAnchors {
  double y_ss = 1.0;
  double deposit_value = 1.0;
};

inline Vec residuals(const DsgeParams& P, const ModelAnchors& A, const Vec& L, const Vec& X, const Vec& Fw,
                     const Vec& E) {
  using namespace v;
  Vec r(kNumEq);
  const double pif = P.pi_f(), rs_bar = P.rstar_ss(), rd_bar = P.pi_bar / P.beta;
  const double sk = 0.5 * P.kappa;
  auto S = [&](double g) { return sk * (g - 1.0) * (g - 1.0); };
  auto dS = [&](double g) { return P.kappa * (g - 1.0); };

  const double g_now = X[inv] / L[inv], g_next = Fw[inv] / X[inv];
  const BggTerms b_now = bgg_contract(X[omb], P.sigma);
  const BggTerms b_next = bgg_contract(Fw[omb], P.sigma);
  const double assets_lag = L[pk] * L[k];

  // Households
  r[0] = X[lam] * X[c] - 1.0;
  r[1] = std::pow(X[l], P.phi_labor) / (X[lam] * X[w]) - 1.0;
  r[2] = P.beta * Fw[lam] / X[lam] * X[rd] / Fw[pic] - 1.0;
  r[3] = (1.0 - P.omega_c) * std::pow(X[p], 1.0 - P.eta_c) + P.omega_c * std::pow(X[q], 1.0 - P.eta_c) - 1.0;
  r[4] = X[p] * X[pic] / (L[p] * X[pid]) - 1.0;
  r[5] = X[q] * X[pic] / (L[q] * X[s] * pif) - 1.0;
  r[6] = X[stil] * P.psi / (L[stil] * X[s]) - 1.0;
  r[7] = std::pow(X[pinv], 1.0 - P.nu_i) /
             (P.gamma_i * std::pow(X[p], 1.0 - P.nu_i) + (1.0 - P.gamma_i) * std::pow(X[q], 1.0 - P.nu_i)) -
         1.0;

  // Capital producers
  r[8] = (X[pk] * (1.0 - S(g_now) - dS(g_now) * g_now) +
          P.beta * Fw[lam] / X[lam] * Fw[pk] * dS(g_next) * g_next * g_next) /
             X[pinv] -
         1.0;
  r[9] = X[k] / ((1.0 - P.delta) * L[k] + (1.0 - S(g_now)) * X[inv]) - 1.0;
  r[10] = X[rk_ret] * L[pk] / (X[pic] * (X[rk] + (1.0 - P.delta) * X[pk])) - 1.0;

  // Intermediate goods
  r[11] = X[w] / (X[mc] * X[p] * (1.0 - P.alpha) * X[y] / X[l]) - 1.0;
  r[12] = X[rk] / (X[mc] * X[p] * P.alpha * X[y] / L[k]) - 1.0;
  r[13] = X[y] / (std::pow(L[k], P.alpha) * std::pow(X[l], 1.0 - P.alpha)) - 1.0;
  r[14] = X[fp] / (X[lam] * X[p] * X[y] + P.beta * P.theta * std::pow(Fw[pid] / P.pi_bar, P.epsilon - 1.0) * Fw[fp]) -
          1.0;
  r[15] = X[kp] / (P.epsilon / (P.epsilon - 1.0) * X[lam] * X[p] * X[y] * X[mc] +
                   P.beta * P.theta * std::pow(Fw[pid] / P.pi_bar, P.epsilon) * Fw[kp]) -
          1.0;
  r[16] = X[ptil] * X[fp] / X[kp] - 1.0;
  r[17] = (1.0 - P.theta) * std::pow(X[ptil], 1.0 - P.epsilon) +
          P.theta * std::pow(P.pi_bar / X[pid], 1.0 - P.epsilon) - 1.0;

  // Entrepreneurs and banks
  r[18] = b_now.net(P.mu) * X[rk_ret] * assets_lag / (X[rf] * L[be]) - 1.0;
  r[19] = X[rf] / (P.phi_debt * L[rd] + (1.0 - P.phi_debt) * X[s] * L[rstar]) - 1.0;
  {
    const double eta = b_next.dGamma / b_next.dnet(P.mu);
    r[20] = ((1.0 - b_next.Gamma) * Fw[rk_ret] + eta * (b_next.net(P.mu) * Fw[rk_ret] - Fw[rf])) / Fw[rf];
  }
  r[21] = X[nw] / (P.gamma_e * (1.0 - b_now.Gamma) * X[rk_ret] * assets_lag / X[pic] + P.w_e) - 1.0;
  r[22] = X[be] / (X[pk] * X[k] - X[nw]) - 1.0;
  r[23] = X[ze] * X[be] / (Fw[omb] * Fw[rk_ret] * X[pk] * X[k]) - 1.0;
  r[24] = X[mon] / (P.mu * b_now.G * X[rk_ret] * assets_lag / X[pic]) - 1.0;

  // Demands
  r[25] = X[cd] / ((1.0 - P.omega_c) * std::pow(X[p], -P.eta_c) * X[c]) - 1.0;
  r[26] = X[cm] / (P.omega_c * std::pow(X[q], -P.eta_c) * X[c]) - 1.0;
  r[27] = X[id] / (P.gamma_i * std::pow(X[p] / X[pinv], -P.nu_i) * X[inv]) - 1.0;
  r[28] = X[im] / ((1.0 - P.gamma_i) * std::pow(X[q] / X[pinv], -P.nu_i) * X[inv]) - 1.0;
  r[29] = X[x] / (std::pow(X[px], -P.eta_f) * X[yf]) - 1.0;
  r[30] = X[xd] / (P.gamma_x * std::pow(X[pxd] / X[px], -P.eta_x) * X[x]) - 1.0;
  r[31] = X[xm] / ((1.0 - P.gamma_x) * std::pow(X[px], P.eta_x) * X[x]) - 1.0;
  r[32] = std::pow(X[px], 1.0 - P.eta_x) / (P.gamma_x * std::pow(X[pxd], 1.0 - P.eta_x) + 1.0 - P.gamma_x) - 1.0;

  // Exporters set dollar prices
  r[33] = X[fx] / (X[lam] * X[q] * X[pxd] * X[xd] +
                   P.beta * P.theta_x * std::pow(Fw[pixd] / pif, P.epsilon_x - 1.0) * Fw[fx]) -
          1.0;
  r[34] = X[kx] / (P.epsilon_x / (P.epsilon_x - 1.0) * X[lam] * X[p] * X[xd] +
                   P.beta * P.theta_x * std::pow(Fw[pixd] / pif, P.epsilon_x) * Fw[kx]) -
          1.0;
  r[35] = X[ptilx] * X[fx] / X[kx] - 1.0;
  r[36] = (1.0 - P.theta_x) * std::pow(X[ptilx], 1.0 - P.epsilon_x) +
          P.theta_x * std::pow(pif / X[pixd], 1.0 - P.epsilon_x) - 1.0;
  r[37] = X[pxd] * pif / (L[pxd] * X[pixd]) - 1.0;

  // Goods market
  r[38] = (X[cd] + X[id] + X[xd] + P.g + X[mon] / X[p]) / X[y] - 1.0;

  // Foreign block
  const double yf_gap_lag = std::log(L[yf] / P.yf_bar), rs_gap_lag = std::log(L[rstar] / rs_bar);
  r[39] = std::log(X[yf] / P.yf_bar) - P.a11 * yf_gap_lag - P.a12 * rs_gap_lag - P.sigma_ystar * E[eps_ystar];
  r[40] = std::log(X[rstar] / rs_bar) - P.a21 * yf_gap_lag - P.a22 * rs_gap_lag - P.c21 * E[eps_ystar] -
          P.sigma_rstar * E[eps_rstar];

  // Policy
  r[41] = std::log(X[rd] / rd_bar) - P.rho_r * std::log(L[rd] / rd_bar) -
          (1.0 - P.rho_r) * (P.r_pi * std::log(X[pic] / P.pi_bar) + P.r_y * std::log(X[y] / A.y_ss) +
                             P.r_s * std::log(X[stil])) -
          P.sigma_r * E[eps_r];
  r[42] = std::log(X[fstar] / X[fbar]) - P.rho_fx * std::log(L[fstar] / L[fbar]) +
          P.theta_rstar * std::log(X[rstar] / rs_bar);
  r[43] = std::log(X[fbar]) -
          (1.0 - P.vartheta) *
              std::log(P.upsilon_cb * (L[rstar] * L[bdol] / pif + X[cm] + X[im] + X[xm])) -
          P.vartheta * std::log(L[fbar] / pif);

  // Balance sheets and the external position
  r[44] = X[bdol] * X[q] / ((1.0 - P.phi_debt) * X[be]) - 1.0;
  r[45] = X[d] / (P.phi_debt * X[be] + X[q] * X[fstar]) - 1.0;
  r[46] = X[dstar] - (X[nfa] - X[fstar] + X[bdol]);
  r[47] = X[db] / (X[d] + X[q] * X[dstar]) - 1.0;
  r[48] = X[theta_share] - X[q] * X[dstar] / X[db];
  // Deviations from the deposit target are a utility cost, so a higher
  // expected dollar return raises the dollar share. The return gap is in
  // annualized percent and deposits are relative to their steady state.
  r[49] = P.gamma_ups * (X[theta_share] - P.upsilon) -
          400.0 * P.beta * Fw[lam] / Fw[pic] * X[db] / A.deposit_value * (Fw[s] * X[rstar] - X[rd]);
  r[50] = X[nfa] - L[rstar] * L[nfa] / pif - X[tb];
  r[51] = X[tb] - (X[px] * X[x] - X[cm] - X[im] - X[xm]);
  return r;
}

/// Coordinate transform used for perturbation: log for positive variables,
/// identity for level variables.
inline Vec to_coords(const Vec& levels) {
  Vec z(levels.size());
  for (int i = 0; i < levels.size(); ++i) z[i] = is_level(i) ? levels[i] : std::log(levels[i]);
  return z;
}

inline Vec from_coords(const Vec& z) {
  Vec v(z.size());
  for (int i = 0; i < z.size(); ++i) v[i] = is_level(i) ? z[i] : std::exp(z[i]);
  return v;
}

}  // namespace spillover::dsge
