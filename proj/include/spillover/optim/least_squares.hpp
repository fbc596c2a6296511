#pragma once

#include <Eigen/Dense>
#include <functional>
#include <unsupported/Eigen/LevenbergMarquardt>
#include <unsupported/Eigen/NumericalDiff>

namespace spillover::optim {

using Residuals = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct LmResult {
  Eigen::VectorXd x;
  double sum_squares = 0.0;
  int evaluations = 0;
  int status = 0;  // Eigen::LevenbergMarquardtSpace::Status
};

namespace detail {
struct LmFunctor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  using QRSolver = Eigen::ColPivHouseholderQR<JacobianType>;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const Residuals* f;
  int n_in, n_out;
  int inputs() const { return n_in; }
  int values() const { return n_out; }
  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& out) const {
    out = (*f)(x);
    return 0;
  }
};
}  // namespace detail

/// Levenberg-Marquardt with central-difference Jacobian.
inline LmResult levenberg_marquardt(const Residuals& f, const Eigen::VectorXd& x0, int max_evals = 2000) {
  const Eigen::VectorXd r0 = f(x0);
  detail::LmFunctor base{&f, static_cast<int>(x0.size()), static_cast<int>(r0.size())};
  Eigen::NumericalDiff<detail::LmFunctor, Eigen::Central> diff(base, 1e-7);
  Eigen::LevenbergMarquardt<decltype(diff)> lm(diff);
  lm.setMaxfev(max_evals);
  lm.setXtol(1e-14);
  lm.setFtol(1e-16);
  LmResult out;
  out.x = x0;
  out.status = static_cast<int>(lm.minimize(out.x));
  out.sum_squares = f(out.x).squaredNorm();
  out.evaluations = static_cast<int>(lm.nfev());
  return out;
}

}  // namespace spillover::optim
