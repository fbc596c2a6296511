#pragma once

#include <lapacke.h>

#include <Eigen/Dense>
#include <string>

#include "spillover/error.hpp"

namespace spillover::dsge {

/// x_t = T x_{t-1} + R eps_t
struct StateSpace {
  Eigen::MatrixXd T, R;
  int stable_roots = 0;
  int required = 0;
  double spectral_radius = 0.0;
  double residual = 0.0;  // max |F T^2 + G T + H|
};

namespace detail {
inline lapack_logical inside_unit_circle(const double* ar, const double* ai, const double* b) {
  return (*ar) * (*ar) + (*ai) * (*ai) < (*b) * (*b);
}
}  // namespace detail

/// Solves F E[x+] + G x + H x- + M eps = 0 by an ordered real QZ
/// decomposition of the companion pencil.
inline StateSpace solve_re(const Eigen::MatrixXd& F, const Eigen::MatrixXd& G, const Eigen::MatrixXd& H,
                           const Eigen::MatrixXd& M) {
  const Eigen::Index n = G.rows();
  if (F.rows() != n || F.cols() != n || G.cols() != n || H.rows() != n || H.cols() != n || M.rows() != n)
    throw DataError("solve_re: inconsistent system dimensions");

  using ColMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;
  const Eigen::Index m = 2 * n;
  ColMat A = ColMat::Zero(m, m), B = ColMat::Zero(m, m);
  A.topRightCorner(n, n).setIdentity();
  A.bottomLeftCorner(n, n) = -H;
  A.bottomRightCorner(n, n) = -G;
  B.topLeftCorner(n, n).setIdentity();
  B.bottomRightCorner(n, n) = F;

  Eigen::VectorXd alphar(m), alphai(m), beta(m);
  ColMat Q(m, m), Z(m, m);
  lapack_int sdim = 0;
  const lapack_int info =
      LAPACKE_dgges(LAPACK_COL_MAJOR, 'V', 'V', 'S', detail::inside_unit_circle, static_cast<lapack_int>(m),
                    A.data(), static_cast<lapack_int>(m), B.data(), static_cast<lapack_int>(m), &sdim,
                    alphar.data(), alphai.data(), beta.data(), Q.data(), static_cast<lapack_int>(m), Z.data(),
                    static_cast<lapack_int>(m));
  if (info != 0) throw NumericalError("QZ decomposition failed (dgges info " + std::to_string(info) + ")");

  StateSpace out;
  out.stable_roots = static_cast<int>(sdim);
  out.required = static_cast<int>(n);
  if (sdim != n) {
    const std::string kind = sdim > n ? "indeterminacy" : "no stable solution";
    throw NumericalError("Blanchard-Kahn condition fails (" + kind + "): " + std::to_string(sdim) +
                         " stable roots for " + std::to_string(n) + " predetermined slots");
  }

  const ColMat Z11 = Z.topLeftCorner(n, n), Z21 = Z.bottomLeftCorner(n, n);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(Z11);
  if (!lu.isInvertible()) throw NumericalError("rank condition fails: stable block of Z is singular");
  out.T = Z21 * lu.inverse();
  for (Eigen::Index i = 0; i < m; ++i) {
    if (beta[i] == 0.0) continue;
    const double mod = std::hypot(alphar[i], alphai[i]) / std::fabs(beta[i]);
    if (mod < 1.0) out.spectral_radius = std::max(out.spectral_radius, mod);
  }

  const Eigen::MatrixXd FTG = F * out.T + G;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu2(FTG);
  out.R = -lu2.solve(M);
  out.residual = (FTG * out.T + H).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace spillover::dsge
