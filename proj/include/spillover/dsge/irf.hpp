#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <string_view>

#include "spillover/dsge/linearize.hpp"
#include "spillover/dsge/solve.hpp"

namespace spillover::dsge {

struct ModelSolution {
  DsgeParams params;
  SteadyState ss;
  LinearModel lm;
  StateSpace sol;
};

inline ModelSolution solve_model(const DsgeParams& P) {
  ModelSolution m;
  m.params = P;
  m.ss = compute_steady_state(P);
  m.lm = linearize(P, m.ss);
  m.sol = solve_re(m.lm.F, m.lm.G, m.lm.H, m.lm.M);
  return m;
}

/// Rows are horizons 0..H, columns model variables (log or level deviations).
inline Eigen::MatrixXd state_irf(const StateSpace& sol, int shock, int H, double size = 1.0) {
  if (shock < 0 || shock >= sol.R.cols()) throw DataError("unknown model shock index " + std::to_string(shock));
  if (H < 0) throw DataError("horizon must be non-negative");
  Eigen::MatrixXd out(H + 1, sol.T.rows());
  Eigen::VectorXd x = sol.R.col(shock) * size;
  for (int h = 0; h <= H; ++h) {
    out.row(h) = x.transpose();
    x = sol.T * x;
  }
  return out;
}

namespace obs {
enum Obs : int { rstar, rd, rer, cpi, ip, spread, reserves, ner, ystar, kNumObs };
}
using obs::kNumObs;

inline constexpr std::array<std::string_view, kNumObs> kObsNames{
    "rstar", "policy_rate", "rer", "cpi", "ip", "spread", "reserves", "ner", "ystar"};

/// The seven observables matched in estimation.
inline constexpr std::array<int, 7> kMatchedObs{obs::rstar, obs::rd,     obs::rer,     obs::cpi,
                                                obs::ip,    obs::spread, obs::reserves};

inline int observable_index(std::string_view name) {
  for (int i = 0; i < kNumObs; ++i)
    if (kObsNames[i] == name) return i;
  throw DataError("unknown model observable '" + std::string(name) + "'");
}

inline int shock_index(std::string_view name) {
  for (int i = 0; i < kNumShocks; ++i)
    if (kShockNames[i] == name) return i;
  throw DataError("unknown model shock '" + std::string(name) + "'");
}

/// Maps state deviations into observables: rates in annualized percentage
/// points, everything else in percent.
inline Eigen::MatrixXd observables(const Eigen::MatrixXd& states) {
  Eigen::MatrixXd o(states.rows(), kNumObs);
  o.col(obs::rstar) = 400.0 * states.col(v::rstar);
  o.col(obs::rd) = 400.0 * states.col(v::rd);
  o.col(obs::rer) = 100.0 * states.col(v::q);
  o.col(obs::cpi) = 100.0 * (states.col(v::stil) - states.col(v::q));  // P = S Pf / q with Pf on trend
  o.col(obs::ip) = 100.0 * states.col(v::y);
  o.col(obs::spread) = 400.0 * (states.col(v::ze) - states.col(v::rd));
  o.col(obs::reserves) = 100.0 * states.col(v::fstar);
  o.col(obs::ner) = 100.0 * states.col(v::stil);
  o.col(obs::ystar) = 100.0 * states.col(v::yf);
  return o;
}

inline Eigen::MatrixXd model_irf(const ModelSolution& m, int shock, int H, double size = 1.0) {
  return observables(state_irf(m.sol, shock, H, size));
}

}  // namespace spillover::dsge
