#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "spillover/bvar.hpp"
#include "spillover/eventstudy.hpp"
#include "spillover/ingest.hpp"

// Fixture factory: event sets with planted classification counts and monthly
// panels simulated from a known restricted VAR.
namespace spillover::synthetic {

struct EventPlan {
  MonthRange span{Month(1995, 2), Month(2014, 3)};
  // rows: stock surprise negative / positive; columns: rate surprise negative / zero / positive
  std::array<std::array<int, 3>, 2> cells{{{27, 26, 36}, {39, 14, 12}}};
  int stock_zero = 0;  // both surprises zero
  std::vector<std::string> countries{"BRA", "CHL", "PER", "THA"};
  double missing_share = 0.05;

  int total() const {
    int n = stock_zero;
    for (const auto& r : cells)
      for (int c : r) n += c;
    return n;
  }
};

namespace detail {
inline double round4(double x) { return std::round(x * 1e4) / 1e4; }
}  // namespace detail

/// Events on distinct dates spread evenly over the span; the sign pattern of
/// each event is drawn without replacement from the planted cells, so
/// tabulate_events reproduces `plan.cells` exactly.
inline std::vector<SurpriseEvent> make_events(const EventPlan& plan, std::uint64_t seed) {
  const int n = plan.total();
  if (n < 1) throw DataError("event plan has no events");
  const int months = plan.span.size();
  if (n > 2 * months) throw DataError("event plan has more than two events per month on average");

  // 0..5 encode (row, column); 6 means both surprises are zero
  std::vector<int> kinds;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 3; ++c) kinds.insert(kinds.end(), static_cast<std::size_t>(plan.cells[r][c]), r * 3 + c);
  kinds.insert(kinds.end(), static_cast<std::size_t>(plan.stock_zero), 6);
  Rng rng = substream(seed, StreamTag::events, 0);
  std::shuffle(kinds.begin(), kinds.end(), rng);

  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  std::vector<SurpriseEvent> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Two slots per month (early and late) keep dates distinct.
    const long slot = static_cast<long>(i) * 2 * months / n;
    const Month m = plan.span.first + static_cast<int>(slot / 2);
    const unsigned day = slot % 2 == 0 ? 1u + static_cast<unsigned>(unif(rng) * 13.0)
                                       : 15u + static_cast<unsigned>(unif(rng) * 13.0);
    SurpriseEvent e;
    e.date = Date{std::chrono::year(m.year()), std::chrono::month(static_cast<unsigned>(m.month())),
                  std::chrono::day(day)};

    const int kind = kinds[static_cast<std::size_t>(i)];
    if (kind < 6) {
      const int row = kind / 3, col = kind % 3;
      const double rate_mag = detail::round4(0.005 + 0.05 * std::fabs(normal(rng)));
      const double stock_mag = detail::round4(0.05 + 0.8 * std::fabs(normal(rng)));
      e.d_rate = col == 0 ? -rate_mag : (col == 1 ? 0.0 : rate_mag);
      e.d_stock = row == 0 ? -stock_mag : stock_mag;
    }
    for (std::size_t c = 0; c < plan.countries.size(); ++c) {
      const double noise = normal(rng);
      if (unif(rng) < plan.missing_share) continue;
      const double beta = 3.0 + static_cast<double>(c);
      e.ner_change[plan.countries[c]] = detail::round4(beta * e.d_rate - 0.05 * e.d_stock - 0.08 + 0.9 * noise);
    }
    out.push_back(std::move(e));
  }
  return out;
}

inline void write_events(const std::vector<SurpriseEvent>& events, const std::vector<std::string>& countries,
                         const std::filesystem::path& path) {
  csv::Writer w(path);
  std::vector<std::string> header{"date", "d_rate", "d_stock"};
  for (const auto& c : countries) header.push_back("ner_" + c);
  w.row(header);
  for (const auto& e : events) {
    std::vector<std::string> row{format_date(e.date), csv::format_double(e.d_rate), csv::format_double(e.d_stock)};
    for (const auto& c : countries) {
      auto it = e.ner_change.find(c);
      row.push_back(it == e.ner_change.end() ? "" : csv::format_double(it->second));
    }
    w.row(row);
  }
}

/// Known data-generating process for the macro block. Surprises are taken as
/// given (the aggregated event series); each macro innovation loads on them
/// through `sigma`, exactly as in the restricted VAR the estimator assumes.
struct MacroTruth {
  std::vector<std::string> names;
  std::vector<Role> roles;
  bvar::PosteriorDraw var;  // surprise rows zero; sigma built from the loading and the surprise moments
  Eigen::MatrixXd loading;  // macro x surprise, response of y_t to m_t
  Eigen::MatrixXd sigma_cond;
};

inline MacroTruth default_macro_truth(const Eigen::MatrixXd& surprise_moment) {
  MacroTruth t;
  t.names = {"us_1y", "policy_rate", "rer", "cpi", "ip", "embi", "reserves"};
  t.roles = {Role::us_macro, Role::em_macro, Role::em_macro, Role::em_macro,
             Role::em_macro, Role::em_macro, Role::em_macro};
  const int ny = 7, nm = 2, N = ny + nm, P = 2;
  if (surprise_moment.rows() != nm || surprise_moment.cols() != nm)
    throw DataError("macro truth expects a 2 x 2 surprise moment matrix");

  Eigen::MatrixXd B1 = Eigen::MatrixXd::Zero(ny, ny), B2 = Eigen::MatrixXd::Zero(ny, ny);
  B1.diagonal() << 0.92, 0.85, 0.80, 0.90, 0.75, 0.80, 0.85;
  B2.diagonal() << -0.05, -0.08, -0.10, -0.04, 0.05, -0.06, -0.05;
  B1(1, 0) = 0.10;   // policy rate follows US rates
  B1(1, 3) = 0.05;   // and inflation
  B1(3, 2) = 0.04;   // pass-through
  B1(4, 2) = -0.03;
  B1(4, 5) = -0.10;  // spreads weigh on activity
  B1(5, 0) = 0.08;
  B1(6, 2) = -0.05;

  t.var.n_surprise = nm;
  t.var.lags = P;
  t.var.lag_coef = Eigen::MatrixXd::Zero(N, N * P);
  t.var.lag_coef.block(nm, nm, ny, ny) = B1;
  t.var.lag_coef.block(nm, N + nm, ny, ny) = B2;
  t.var.constant = Eigen::VectorXd::Zero(N);

  t.loading.resize(ny, nm);
  t.loading.col(0) << 1.0, 0.4, 3.0, 0.5, -1.5, 0.8, -2.0;
  t.loading.col(1) << 0.02, 0.01, -0.3, 0.0, 0.2, -0.1, 0.1;
  Eigen::VectorXd sd(ny);
  sd << 0.05, 0.10, 1.00, 0.30, 0.80, 0.15, 1.00;
  t.sigma_cond = sd.cwiseAbs2().asDiagonal();

  const Eigen::MatrixXd& S = surprise_moment;
  t.var.sigma.resize(N, N);
  t.var.sigma.topLeftCorner(nm, nm) = S;
  t.var.sigma.bottomLeftCorner(ny, nm) = t.loading * S;
  t.var.sigma.topRightCorner(nm, ny) = (t.loading * S).transpose();
  t.var.sigma.bottomRightCorner(ny, ny) = t.sigma_cond + t.loading * S * t.loading.transpose();
  return t;
}

/// Macro block driven by the given monthly surprises; rows align with
/// `surprises.values`. The first 120 periods are discarded burn-in with no
/// announcements.
inline MonthlyPanel simulate_macro(const MonthlyPanel& surprises, const MacroTruth& truth, std::uint64_t seed) {
  const int nm = truth.var.n_surprise, N = truth.var.n(), ny = N - nm, P = truth.var.lags;
  if (surprises.variables() != nm) throw DataError("surprise panel does not match the macro truth");
  const int burn = 120, T = surprises.periods();
  Rng rng = substream(seed, StreamTag::simulation, 0);
  std::normal_distribution<double> normal;
  const Eigen::MatrixXd Lc = truth.sigma_cond.llt().matrixL();

  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(burn + T, N);
  Eigen::VectorXd z(ny);
  for (int t = P; t < burn + T; ++t) {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(nm);
    if (t >= burn) m = surprises.values.row(t - burn).transpose();
    for (int i = 0; i < ny; ++i) z(i) = normal(rng);
    Eigen::VectorXd yt = truth.var.constant;
    yt.head(nm) = m;
    yt.tail(ny) += truth.loading * m + Lc * z;
    for (int p = 1; p <= P; ++p) yt.tail(ny).noalias() += truth.var.lag(p).bottomRows(ny) * y.row(t - p).transpose();
    y.row(t) = yt.transpose();
  }

  MonthlyPanel panel;
  panel.start = surprises.start;
  panel.values = y.bottomRows(T).rightCols(ny);
  for (int i = 0; i < ny; ++i)
    panel.columns.push_back({truth.names[static_cast<std::size_t>(i)], truth.roles[static_cast<std::size_t>(i)],
                             Transform::level});
  return panel;
}

inline Eigen::MatrixXd second_moment(const MonthlyPanel& surprises) {
  return surprises.values.transpose() * surprises.values / static_cast<double>(surprises.periods());
}

}  // namespace spillover::synthetic
