#pragma once

#include <Eigen/Dense>
#include <algorithm>

#include "spillover/dsge/steady_state.hpp"

namespace spillover::dsge {

/// First-order system F E[x+] + G x + H x- + M eps = 0 in log / level
/// deviations from the steady state.
struct LinearModel {
  Eigen::MatrixXd F, G, H, M;
  SteadyState ss;
  double richardson_gap = 0.0;  // max |D(h/2) - D(h)| over all entries
};

inline LinearModel linearize(const DsgeParams& P, const SteadyState& ss, double step = 1e-3) {
  const int n = kNumVars, ne = kNumShocks;
  const Vec z0 = to_coords(ss.levels);
  const Vec e0 = Vec::Zero(ne);

  // block 0: lag, 1: current, 2: lead, 3: shocks
  auto eval = [&](int block, int j, double dz) {
    Vec zl = z0, zc = z0, zf = z0, e = e0;
    Vec* target[] = {&zl, &zc, &zf, &e};
    (*target[block])[j] += dz;
    return residuals(P, ss.anchors, from_coords(zl), from_coords(zc), from_coords(zf), e);
  };

  LinearModel lm;
  lm.ss = ss;
  lm.F.resize(n, n);
  lm.G.resize(n, n);
  lm.H.resize(n, n);
  lm.M.resize(n, ne);
  Eigen::MatrixXd* out[] = {&lm.H, &lm.G, &lm.F, &lm.M};
  for (int block = 0; block < 4; ++block) {
    const int cols = block == 3 ? ne : n;
    for (int j = 0; j < cols; ++j) {
      const Vec d1 = (eval(block, j, step) - eval(block, j, -step)) / (2.0 * step);
      const Vec d2 = (eval(block, j, 0.5 * step) - eval(block, j, -0.5 * step)) / step;
      out[block]->col(j) = (4.0 * d2 - d1) / 3.0;
      lm.richardson_gap = std::max(lm.richardson_gap, (d2 - d1).cwiseAbs().maxCoeff());
    }
  }
  // Exact zeros stay exact; anything at rounding level is noise.
  for (auto* m : out) m->noalias() = m->unaryExpr([](double a) { return std::fabs(a) < 1e-13 ? 0.0 : a; });
  return lm;
}

}  // namespace spillover::dsge
