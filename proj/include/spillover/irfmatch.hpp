#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "spillover/core/parallel.hpp"
#include "spillover/core/rng.hpp"
#include "spillover/dsge.hpp"
#include "spillover/optim/least_squares.hpp"
#include "spillover/optim/simplex.hpp"

namespace spillover::irfmatch {

inline constexpr int kQuarters = 12;
inline constexpr double kPenalty = 1e10;

/// Simple quarterly averages; a trailing partial quarter is dropped.
inline Eigen::VectorXd monthly_to_quarterly(const Eigen::VectorXd& monthly) {
  const Eigen::Index nq = monthly.size() / 3;
  Eigen::VectorXd q(nq);
  for (Eigen::Index k = 0; k < nq; ++k) q[k] = monthly.segment(3 * k, 3).sum() / 3.0;
  return q;
}

/// Quarterly IRF moments for each matched observable: column j holds
/// variable `variables[j]`, rows are quarters 0..11.
struct MatchTarget {
  std::vector<std::string> variables;
  Eigen::MatrixXd mean;
  Eigen::MatrixXd variance;

  void validate() const {
    const auto nv = static_cast<Eigen::Index>(variables.size());
    if (nv == 0) throw DataError("match target has no variables");
    if (mean.rows() != kQuarters || variance.rows() != kQuarters)
      throw DataError("match target needs exactly " + std::to_string(kQuarters) + " quarterly horizons, got " +
                      std::to_string(mean.rows()));
    if (mean.cols() != nv || variance.cols() != nv) throw DataError("match target columns do not match variables");
    if (!(variance.array() > 0.0).all() || !variance.allFinite())
      throw DataError("match target variances must be positive and finite");
    if (!mean.allFinite()) throw DataError("match target means must be finite");
    for (const auto& v : variables) dsge::observable_index(v);
  }
  Eigen::Index moments() const { return mean.size(); }
};

/// Diagonal of the weight matrix, stacked variable by variable.
inline Eigen::VectorXd build_weight(const MatchTarget& t) {
  t.validate();
  const Eigen::Map<const Eigen::VectorXd> var(t.variance.data(), t.variance.size());
  return var.cwiseInverse();
}

inline double weighted_sse(const Eigen::VectorXd& v, const Eigen::VectorXd& weight) {
  if (v.size() != weight.size()) throw DataError("moment vector and weight sizes differ");
  return v.dot(weight.cwiseProduct(v));
}

struct FreeParam {
  std::string name;
  double lo = 0.0, hi = 1.0;
};

inline std::vector<FreeParam> default_free_params() {
  return {{"sigma_rstar", 1e-4, 0.01}, {"a22", 0.5, 0.99}, {"kappa", 0.1, 10.0}, {"mu", 0.01, 0.6},
          {"sigma", 0.05, 0.6},        {"rho_fx", 0.0, 0.99}, {"theta_rstar", 0.0, 10.0}};
}

inline bool is_estimable(const std::string& name) {
  for (const auto& p : default_free_params())
    if (p.name == name) return true;
  return false;
}

struct EstimationProblem {
  std::vector<FreeParam> free = default_free_params();
  dsge::DsgeParams fixed;
  MatchTarget target;
  std::string shock = "eps_rstar";

  void validate() const {
    if (free.empty()) throw DataError("estimation needs at least one free parameter");
    for (const auto& p : free) {
      if (!is_estimable(p.name)) throw DataError("parameter '" + p.name + "' is not in the estimated set");
      if (!(std::isfinite(p.lo) && std::isfinite(p.hi) && p.lo < p.hi))
        throw DataError("bounds for '" + p.name + "' must be finite with lo < hi");
    }
    target.validate();
    dsge::shock_index(shock);
  }

  dsge::DsgeParams with(const Eigen::VectorXd& theta) const {
    dsge::DsgeParams P = fixed;
    for (std::size_t i = 0; i < free.size(); ++i) dsge::param_ref(P, free[i].name) = theta[static_cast<Eigen::Index>(i)];
    return P;
  }
};

/// Quarterly model responses for the target's variables (rows quarters).
inline Eigen::MatrixXd model_moments(const dsge::ModelSolution& m, const std::string& shock,
                                     const std::vector<std::string>& variables) {
  const Eigen::MatrixXd o = dsge::model_irf(m, dsge::shock_index(shock), kQuarters - 1);
  Eigen::MatrixXd out(kQuarters, static_cast<Eigen::Index>(variables.size()));
  for (std::size_t j = 0; j < variables.size(); ++j)
    out.col(static_cast<Eigen::Index>(j)) = o.col(dsge::observable_index(variables[j]));
  return out;
}

struct Evaluation {
  double value = 0.0;
  bool solved = false;
  Eigen::VectorXd residual;  // model - target, stacked by variable
  std::string error;
};

inline double penalty(const EstimationProblem& pb, const Eigen::VectorXd& theta) {
  double d = 0.0;
  for (std::size_t i = 0; i < pb.free.size(); ++i) {
    const auto& p = pb.free[i];
    const double z = (theta[static_cast<Eigen::Index>(i)] - 0.5 * (p.lo + p.hi)) / (p.hi - p.lo);
    d += z * z;
  }
  return kPenalty * (1.0 + d);
}

inline Evaluation evaluate(const EstimationProblem& pb, const Eigen::VectorXd& theta) {
  Evaluation e;
  try {
    const auto m = dsge::solve_model(pb.with(theta));
    const Eigen::MatrixXd mm = model_moments(m, pb.shock, pb.target.variables) - pb.target.mean;
    e.residual = Eigen::Map<const Eigen::VectorXd>(mm.data(), mm.size());
    e.value = weighted_sse(e.residual, build_weight(pb.target));
    e.solved = std::isfinite(e.value);
    if (!e.solved) e.error = "non-finite objective";
  } catch (const Error& ex) {
    e.error = ex.what();
  }
  if (!e.solved) e.value = penalty(pb, theta);
  return e;
}

inline double objective(const Eigen::VectorXd& theta, const EstimationProblem& pb) { return evaluate(pb, theta).value; }

/// Targets generated by the model itself; variances are a fixed fraction of
/// each variable's peak response plus a small floor.
inline MatchTarget model_target(const dsge::DsgeParams& P, const std::string& shock,
                                const std::vector<std::string>& variables, double rel_sd = 0.25) {
  MatchTarget t;
  t.variables = variables;
  t.mean = model_moments(dsge::solve_model(P), shock, variables);
  t.variance.resize(t.mean.rows(), t.mean.cols());
  for (Eigen::Index j = 0; j < t.mean.cols(); ++j) {
    const double peak = t.mean.col(j).cwiseAbs().maxCoeff();
    const double sd = rel_sd * std::max(peak, 1e-6);
    t.variance.col(j).setConstant(sd * sd);
  }
  return t;
}

inline std::vector<std::string> matched_observables() {
  std::vector<std::string> out;
  for (int i : dsge::kMatchedObs) out.emplace_back(dsge::kObsNames[i]);
  return out;
}

// Unbounded coordinates: theta = lo + (hi - lo) * logistic(u).
inline Eigen::VectorXd to_theta(const EstimationProblem& pb, const Eigen::VectorXd& u) {
  Eigen::VectorXd th(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const auto& p = pb.free[static_cast<std::size_t>(i)];
    th[i] = p.lo + (p.hi - p.lo) / (1.0 + std::exp(-u[i]));
  }
  return th;
}

inline Eigen::VectorXd to_u(const EstimationProblem& pb, const Eigen::VectorXd& theta) {
  Eigen::VectorXd u(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    const auto& p = pb.free[static_cast<std::size_t>(i)];
    const double s = std::clamp((theta[i] - p.lo) / (p.hi - p.lo), 1e-9, 1.0 - 1e-9);
    u[i] = std::log(s / (1.0 - s));
  }
  return u;
}

struct OptimizerConfig {
  int starts = 8;
  std::uint64_t seed = 1;
  double start_spread = 1.5;  // starts are drawn uniformly in [-spread, spread] in u
  optim::SimplexOptions simplex;
  bool polish = true;
  int polish_top = 3;  // best simplex results refined by Levenberg-Marquardt
  int polish_evals = 1500;
  std::optional<Eigen::VectorXd> initial;  // theta for start 0; box centre when empty
};

struct StartLog {
  int index = 0;
  Eigen::VectorXd start, estimate;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  bool solved = false;
};

struct EstimationResult {
  std::vector<std::string> names;
  Eigen::VectorXd estimate;
  double objective = 0.0;
  int best_start = 0;
  bool polished = false;
  Evaluation at_estimate;
  std::vector<StartLog> starts;
};

inline std::vector<Eigen::VectorXd> start_points(const EstimationProblem& pb, const OptimizerConfig& cfg) {
  const auto k = static_cast<Eigen::Index>(pb.free.size());
  std::vector<Eigen::VectorXd> out;
  out.push_back(cfg.initial ? to_u(pb, *cfg.initial) : Eigen::VectorXd::Zero(k));
  for (int s = 1; s < cfg.starts; ++s) {
    Rng rng = substream(cfg.seed, StreamTag::multistart, static_cast<std::uint64_t>(s));
    std::uniform_real_distribution<double> unif(-cfg.start_spread, cfg.start_spread);
    Eigen::VectorXd u(k);
    for (Eigen::Index i = 0; i < k; ++i) u[i] = unif(rng);
    out.push_back(u);
  }
  return out;
}

inline EstimationResult estimate(const EstimationProblem& pb, const OptimizerConfig& cfg = {}) {
  pb.validate();
  if (cfg.starts < 1) throw DataError("optimizer needs at least one start");
  const auto starts = start_points(pb, cfg);
  std::vector<StartLog> logs(starts.size());

  parallel_for(starts.size(), [&](std::size_t s) {
    auto f = [&](const Eigen::VectorXd& u) { return objective(to_theta(pb, u), pb); };
    const auto r = optim::nelder_mead(f, starts[s], cfg.simplex);
    StartLog& lg = logs[s];
    lg.index = static_cast<int>(s);
    lg.start = to_theta(pb, starts[s]);
    lg.estimate = to_theta(pb, r.x);
    lg.value = r.value;
    lg.iterations = r.iterations;
    lg.converged = r.converged;
    lg.solved = r.value < kPenalty;
  });

  // Lowest objective wins; ties go to the lower start index.
  std::vector<std::size_t> order(logs.size());
  for (std::size_t s = 0; s < order.size(); ++s) order[s] = s;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return logs[a].value < logs[b].value; });
  if (!logs[order[0]].solved) throw NumericalError("every start ended in an unsolvable region of the parameter space");

  EstimationResult res;
  for (const auto& p : pb.free) res.names.push_back(p.name);
  res.best_start = static_cast<int>(order[0]);
  res.estimate = logs[order[0]].estimate;
  res.objective = logs[order[0]].value;
  res.starts = logs;

  if (cfg.polish) {
    const Eigen::VectorXd sw = build_weight(pb.target).cwiseSqrt();
    const Eigen::Index nm = sw.size();
    auto resid = [&](const Eigen::VectorXd& u) -> Eigen::VectorXd {
      const auto e = evaluate(pb, to_theta(pb, u));
      if (!e.solved) return Eigen::VectorXd::Constant(nm, std::sqrt(e.value / static_cast<double>(nm)));
      return sw.cwiseProduct(e.residual);
    };
    const std::size_t top = std::min<std::size_t>(static_cast<std::size_t>(std::max(cfg.polish_top, 1)), order.size());
    for (std::size_t r = 0; r < top; ++r) {
      const auto& lg = logs[order[r]];
      if (!lg.solved) break;
      const auto lm = optim::levenberg_marquardt(resid, to_u(pb, lg.estimate), cfg.polish_evals);
      const Eigen::VectorXd th = to_theta(pb, lm.x);
      const double v = objective(th, pb);
      if (v < res.objective) {
        res.estimate = th;
        res.objective = v;
        res.best_start = lg.index;
        res.polished = true;
      }
    }
  }
  res.at_estimate = evaluate(pb, res.estimate);
  return res;
}

}  // namespace spillover::irfmatch
