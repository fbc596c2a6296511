#pragma once

// Structural identification of posterior draws: sign restrictions on the
// high-frequency surprises and a recursive (Cholesky) benchmark. Structural
// impulse responses, pointwise bands and variance decompositions.

#include <Eigen/Dense>
#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "spillover/bvar.hpp"
#include "spillover/core/parallel.hpp"
#include "spillover/core/rng.hpp"
#include "spillover/core/stats.hpp"
#include "spillover/error.hpp"

namespace spillover::identify {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using bvar::PosteriorDraw;

inline constexpr const char* kPureMp = "PureMP";
inline constexpr const char* kInfo = "Info";
inline constexpr const char* kMp = "MP";
inline constexpr const char* kOther = "other";

/// Impact signs defining the two labelled shocks on the two surprise rows.
/// PureMP: rate up, stocks down. Info: rate up, stocks up.
struct SignRestrictionSpec {
  int rate_index = 0;
  int stock_index = 1;
  int max_attempts = 1000;

  void validate(int n_surprise) const {
    if (rate_index == stock_index) throw DataError("rate and stock indices must differ");
    if (rate_index < 0 || stock_index < 0 || rate_index >= n_surprise || stock_index >= n_surprise)
      throw DataError("sign-restricted variables must lie in the surprise block");
    if (max_attempts < 1) throw DataError("max_attempts must be >= 1");
  }
};

/// A posterior draw plus an impact matrix whose columns are structural shocks.
/// The first `labels.size()` columns are named; the rest are unlabelled.
struct StructuralDraw {
  PosteriorDraw reduced;
  MatrixXd impact;
  std::vector<std::string> labels;

  std::string shock_name(int j) const {
    return j < static_cast<int>(labels.size()) ? labels[static_cast<std::size_t>(j)]
                                                : std::string(kOther) + std::to_string(j);
  }
};

/// Haar-distributed orthogonal matrix: QR of a standard Gaussian matrix with
/// the signs fixed so that R has a positive diagonal.
inline MatrixXd draw_rotation(int dim, Rng& rng) {
  if (dim < 1) throw DataError("rotation dimension must be >= 1");
  std::normal_distribution<double> normal;
  MatrixXd g(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<MatrixXd> qr(g);
  MatrixXd q = qr.householderQ();
  const MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

enum class Pattern { pure_mp, info, none };

inline Pattern impact_pattern(const MatrixXd& impact, int col, const SignRestrictionSpec& spec) {
  const double rate = impact(spec.rate_index, col);
  const double stock = impact(spec.stock_index, col);
  if (rate > 0.0 && stock < 0.0) return Pattern::pure_mp;
  if (rate > 0.0 && stock > 0.0) return Pattern::info;
  return Pattern::none;
}

/// Candidate impact matrix chol(Sigma) * blockdiag(Q, I): only the surprise
/// block is rotated, so the remaining shocks keep a zero impact on the
/// surprises. Surprise-block columns are sign-normalised to a positive rate
/// response.
inline MatrixXd candidate_impact(const MatrixXd& chol_lower, const MatrixXd& rotation, int rate_index) {
  const Eigen::Index nm = rotation.rows();
  MatrixXd impact = chol_lower;
  impact.leftCols(nm) = chol_lower.leftCols(nm) * rotation;
  for (Eigen::Index j = 0; j < nm; ++j)
    if (impact(rate_index, j) < 0.0) impact.col(j) = -impact.col(j);
  return impact;
}

struct SignResult {
  std::optional<StructuralDraw> draw;
  int attempts = 0;
};

/// Accepts the first rotation for which the two leading surprise-block columns
/// carry the PureMP and Info patterns strictly (in either order; the accepted
/// matrix is reordered to [PureMP, Info, ...]). Exhausting the attempts is a
/// rejection, never a forced acceptance.
inline SignResult identify_sign(const PosteriorDraw& draw, const SignRestrictionSpec& spec, Rng& rng) {
  spec.validate(draw.n_surprise);
  Eigen::LLT<MatrixXd> llt(draw.sigma);
  if (llt.info() != Eigen::Success) throw NumericalError("identify_sign: Sigma is not positive definite");
  const MatrixXd L = llt.matrixL();
  SignResult result;
  for (int a = 0; a < spec.max_attempts; ++a) {
    ++result.attempts;
    MatrixXd impact = candidate_impact(L, draw_rotation(draw.n_surprise, rng), spec.rate_index);
    Pattern p0 = impact_pattern(impact, 0, spec);
    Pattern p1 = impact_pattern(impact, 1, spec);
    if (p0 == Pattern::info && p1 == Pattern::pure_mp) {
      impact.col(0).swap(impact.col(1));
      std::swap(p0, p1);
    }
    if (p0 == Pattern::pure_mp && p1 == Pattern::info) {
      result.draw = StructuralDraw{draw, std::move(impact), {kPureMp, kInfo}};
      return result;
    }
  }
  return result;
}

/// Recursive identification with `ordering` (a permutation of 0..N-1, first
/// entry ordered first). Column j of the impact matrix is the shock of the
/// j-th ordered variable; the first is labelled MP and has a positive impact
/// on `rate_index`.
inline StructuralDraw identify_cholesky(const PosteriorDraw& draw, const std::vector<int>& ordering,
                                        int rate_index = 0) {
  const int N = draw.n();
  std::vector<int> seen(static_cast<std::size_t>(N), 0);
  if (static_cast<int>(ordering.size()) != N) throw DataError("ordering must list every variable once");
  for (int v : ordering) {
    if (v < 0 || v >= N || seen[static_cast<std::size_t>(v)]++) throw DataError("ordering is not a permutation");
  }
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(N);  // perm * x reorders x into the ordering
  for (int k = 0; k < N; ++k) perm.indices()[ordering[static_cast<std::size_t>(k)]] = k;
  const MatrixXd permuted = perm * draw.sigma * perm.transpose();
  Eigen::LLT<MatrixXd> llt(permuted);
  if (llt.info() != Eigen::Success) throw NumericalError("identify_cholesky: Sigma is not positive definite");
  MatrixXd impact = perm.transpose() * MatrixXd(llt.matrixL());
  if (impact(rate_index, 0) < 0.0) impact.col(0) = -impact.col(0);
  return StructuralDraw{draw, std::move(impact), {kMp}};
}

/// responses[h] = Psi_h * impact (N variables x N shocks), h = 0..H.
inline std::vector<MatrixXd> structural_irf(const StructuralDraw& sd, int horizon) {
  auto psi = bvar::reduced_irf(sd.reduced, horizon);
  for (auto& m : psi) m = m * sd.impact;
  return psi;
}

/// Dense draws x shocks x variables x horizons array of responses.
class IrfSet {
 public:
  IrfSet() = default;
  IrfSet(std::size_t draws, int shocks, int variables, int horizons)
      : draws_(draws), shocks_(shocks), vars_(variables), horizons_(horizons),
        data_(draws * static_cast<std::size_t>(shocks * variables * horizons), 0.0) {}

  double& at(std::size_t d, int s, int v, int h) { return data_[index(d, s, v, h)]; }
  double at(std::size_t d, int s, int v, int h) const { return data_[index(d, s, v, h)]; }

  std::size_t draws() const { return draws_; }
  int shocks() const { return shocks_; }
  int variables() const { return vars_; }
  int horizons() const { return horizons_; }

  std::vector<std::string> shock_names;
  std::vector<std::string> variable_names;

 private:
  std::size_t index(std::size_t d, int s, int v, int h) const {
    return ((d * static_cast<std::size_t>(shocks_) + static_cast<std::size_t>(s)) * static_cast<std::size_t>(vars_) +
            static_cast<std::size_t>(v)) *
               static_cast<std::size_t>(horizons_) +
           static_cast<std::size_t>(h);
  }
  std::size_t draws_ = 0;
  int shocks_ = 0, vars_ = 0, horizons_ = 0;
  std::vector<double> data_;
};

/// Stacks the responses to the labelled shocks of every draw, horizons 0..H.
inline IrfSet collect_irfs(const std::vector<StructuralDraw>& draws, int horizon,
                           const std::vector<std::string>& variable_names) {
  if (draws.empty()) throw DataError("no structural draws to collect");
  const int shocks = static_cast<int>(draws.front().labels.size());
  const int N = draws.front().reduced.n();
  IrfSet set(draws.size(), shocks, N, horizon + 1);
  set.shock_names = draws.front().labels;
  set.variable_names = variable_names;
  parallel_for(draws.size(), [&](std::size_t d) {
    const auto resp = structural_irf(draws[d], horizon);
    for (int h = 0; h <= horizon; ++h)
      for (int s = 0; s < shocks; ++s)
        for (int v = 0; v < N; ++v) set.at(d, s, v, h) = resp[static_cast<std::size_t>(h)](v, s);
  });
  return set;
}

/// bands[q] is shocks x variables x horizons, flattened like IrfSet with one draw.
struct Bands {
  std::vector<double> probs;
  std::vector<IrfSet> quantiles;
};

inline Bands quantile_bands(const IrfSet& irfs, const std::vector<double>& probs) {
  if (irfs.draws() < 2) throw DataError("quantile bands need at least 2 draws");
  Bands b;
  b.probs = probs;
  for (std::size_t q = 0; q < probs.size(); ++q) {
    b.quantiles.emplace_back(1, irfs.shocks(), irfs.variables(), irfs.horizons());
    b.quantiles.back().shock_names = irfs.shock_names;
    b.quantiles.back().variable_names = irfs.variable_names;
  }
  std::vector<double> column(irfs.draws());
  for (int s = 0; s < irfs.shocks(); ++s)
    for (int v = 0; v < irfs.variables(); ++v)
      for (int h = 0; h < irfs.horizons(); ++h) {
        for (std::size_t d = 0; d < irfs.draws(); ++d) column[d] = irfs.at(d, s, v, h);
        std::sort(column.begin(), column.end());
        for (std::size_t q = 0; q < probs.size(); ++q)
          b.quantiles[q].at(0, s, v, h) = stats::quantile_sorted(column, probs[q]);
      }
  return b;
}

/// share(i, j): fraction of variable i's h-step forecast-error variance due to
/// structural shock j (N x N; each row sums to one).
inline MatrixXd fevd(const StructuralDraw& sd, int h) {
  if (h < 1) throw DataError("FEVD horizon must be >= 1");
  const auto resp = structural_irf(sd, h - 1);
  const Eigen::Index N = sd.impact.rows();
  MatrixXd contrib = MatrixXd::Zero(N, sd.impact.cols());
  for (const auto& r : resp) contrib += r.cwiseAbs2();
  const VectorXd total = contrib.rowwise().sum();
  for (Eigen::Index i = 0; i < N; ++i) {
    if (!(total(i) > 0.0)) throw NumericalError("FEVD: zero forecast-error variance");
    contrib.row(i) /= total(i);
  }
  return contrib;
}

/// FEVD shares grouped as the labelled shocks followed by one "other" column.
inline MatrixXd grouped_fevd(const StructuralDraw& sd, int h) {
  const MatrixXd full = fevd(sd, h);
  const auto k = static_cast<Eigen::Index>(sd.labels.size());
  MatrixXd g(full.rows(), k + 1);
  g.leftCols(k) = full.leftCols(k);
  g.col(k) = full.rightCols(full.cols() - k).rowwise().sum();
  return g;
}

struct SignBatch {
  std::vector<StructuralDraw> accepted;
  std::vector<std::size_t> parent_index;
  std::size_t attempts = 0;
  std::size_t rejected = 0;

  double acceptance_rate(std::size_t posterior_draws) const {
    return posterior_draws ? static_cast<double>(accepted.size()) / static_cast<double>(posterior_draws) : 0.0;
  }
};

/// Sign identification of every posterior draw. Draw i uses its own rotation
/// substream, and accepted draws keep their posterior order.
inline SignBatch identify_sign_all(const std::vector<PosteriorDraw>& draws, const SignRestrictionSpec& spec,
                                   std::uint64_t seed) {
  std::vector<SignResult> results(draws.size());
  parallel_for(draws.size(), [&](std::size_t i) {
    Rng rng = substream(seed, StreamTag::rotation, i);
    results[i] = identify_sign(draws[i], spec, rng);
  });
  SignBatch batch;
  for (std::size_t i = 0; i < results.size(); ++i) {
    batch.attempts += static_cast<std::size_t>(results[i].attempts);
    if (results[i].draw) {
      batch.accepted.push_back(std::move(*results[i].draw));
      batch.parent_index.push_back(i);
    } else {
      ++batch.rejected;
    }
  }
  return batch;
}

}  // namespace spillover::identify
