#pragma once

// Thin RAII wrapper around GSL's nmsimplex2 minimizer.

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include <Eigen/Dense>
#include <functional>
#include <memory>

#include "spillover/error.hpp"

namespace spillover::optim {

struct SimplexOptions {
  double initial_step = 0.5;
  double size_tol = 1e-9;  // characteristic simplex size
  int max_iter = 4000;
};

struct SimplexResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

namespace detail {
inline double gsl_trampoline(const gsl_vector* v, void* params) {
  const auto& f = *static_cast<const Objective*>(params);
  Eigen::Map<const Eigen::VectorXd, 0, Eigen::InnerStride<>> x(v->data, static_cast<Eigen::Index>(v->size),
                                                                Eigen::InnerStride<>(static_cast<Eigen::Index>(v->stride)));
  return f(Eigen::VectorXd(x));
}
}  // namespace detail

inline SimplexResult nelder_mead(const Objective& f, const Eigen::VectorXd& x0, const SimplexOptions& opt = {}) {
  const auto n = static_cast<std::size_t>(x0.size());
  if (n == 0) throw DataError("nelder_mead needs at least one free variable");
  gsl_set_error_handler_off();

  using VecPtr = std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)>;
  VecPtr x(gsl_vector_alloc(n), gsl_vector_free), step(gsl_vector_alloc(n), gsl_vector_free);
  for (std::size_t i = 0; i < n; ++i) gsl_vector_set(x.get(), i, x0[static_cast<Eigen::Index>(i)]);
  gsl_vector_set_all(step.get(), opt.initial_step);

  std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> s(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n), gsl_multimin_fminimizer_free);
  gsl_multimin_function fn{&detail::gsl_trampoline, n, const_cast<Objective*>(&f)};
  if (gsl_multimin_fminimizer_set(s.get(), &fn, x.get(), step.get()) != GSL_SUCCESS)
    throw NumericalError("simplex initialisation failed");

  SimplexResult r;
  for (r.iterations = 1; r.iterations <= opt.max_iter; ++r.iterations) {
    if (gsl_multimin_fminimizer_iterate(s.get()) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s.get()), opt.size_tol) == GSL_SUCCESS) {
      r.converged = true;
      break;
    }
  }
  r.x.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) r.x[static_cast<Eigen::Index>(i)] = gsl_vector_get(s->x, i);
  r.value = s->fval;
  r.iterations = std::min(r.iterations, opt.max_iter);
  return r;
}

}  // namespace spillover::optim
