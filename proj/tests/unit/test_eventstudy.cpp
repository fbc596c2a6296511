#include <gtest/gtest.h>

#include <cmath>

#include "spillover/core/rng.hpp"
#include "spillover/eventstudy.hpp"

using namespace spillover;
using namespace spillover::eventstudy;

namespace {

SurpriseEvent ev(double rate, double stock, std::map<std::string, double> ner = {}) {
  SurpriseEvent e;
  e.date = parse_date("2000-01-01");
  e.d_rate = rate;
  e.d_stock = stock;
  e.ner_change = std::move(ner);
  return e;
}

}  // namespace

TEST(ClassifyEvent, SignRule) {
  EXPECT_EQ(classify_event(ev(0.05, -0.8)), EventClass::NegativeComovement);
  EXPECT_EQ(classify_event(ev(0.0, -0.3)), EventClass::NoRateResponse);
  EXPECT_EQ(classify_event(ev(0.02, 0.4)), EventClass::PositiveComovement);
  EXPECT_EQ(classify_event(ev(-0.02, -0.4)), EventClass::PositiveComovement);
  EXPECT_EQ(classify_event(ev(0.02, 0.0)), EventClass::Ambiguous);
}

TEST(TabulateEvents, SingleEventAndTotals) {
  const auto t = tabulate_events({ev(0.05, -0.8)});
  EXPECT_EQ(t.cells[0][2], 1);
  EXPECT_EQ(t.total(), 1);
  EXPECT_EQ(t.count(EventClass::NegativeComovement), 1);
  EXPECT_THROW(tabulate_events({}), DataError);
}

TEST(TabulateEvents, ClassCountsArePartition) {
  std::vector<SurpriseEvent> events;
  Rng rng(3);
  std::uniform_int_distribution<int> pick(-1, 1);
  for (int i = 0; i < 500; ++i) events.push_back(ev(0.01 * pick(rng), 0.1 * pick(rng)));
  const auto t = tabulate_events(events);
  int sum = 0;
  for (auto c : {EventClass::NegativeComovement, EventClass::PositiveComovement, EventClass::NoRateResponse,
                 EventClass::Ambiguous})
    sum += t.count(c);
  EXPECT_EQ(sum, 500);
  EXPECT_EQ(t.total(), 500);
  int direct = 0;
  for (const auto& e : events) direct += classify_event(e) == EventClass::NegativeComovement;
  EXPECT_EQ(t.count(EventClass::NegativeComovement), direct);
}

TEST(DepreciationStats, ConstantSeries) {
  std::vector<SurpriseEvent> events{ev(0.1, -1, {{"A", 0.5}}), ev(0.1, -1, {{"A", 0.5}}),
                                    ev(0.1, -1, {{"A", 0.5}})};
  const auto s = depreciation_stats(events, ClassFilter::all);
  EXPECT_DOUBLE_EQ(s.mean, 0.5);
  EXPECT_EQ(s.sd, 0.0);
  EXPECT_EQ(s.n, 3u);
}

TEST(DepreciationStats, EmptySelectionErrors) {
  std::vector<SurpriseEvent> events{ev(0.1, -1, {{"A", 0.5}}), ev(0.1, -1, {{"A", 0.2}})};
  EXPECT_THROW(depreciation_stats(events, ClassFilter::positive), DataError);
}

TEST(DepreciationStats, TrimmedMeanInsideUntrimmedDeciles) {
  Rng rng(11);
  std::lognormal_distribution<double> skew(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<SurpriseEvent> events;
    for (int i = 0; i < 60; ++i) events.push_back(ev(0.1, -1, {{"A", skew(rng) - 1.0}, {"B", -skew(rng)}}));
    const auto full = depreciation_stats(events, ClassFilter::all);
    const auto trimmed = depreciation_stats(events, ClassFilter::all, Trim{10, 90});
    EXPECT_GE(trimmed.mean, full.p10);
    EXPECT_LE(trimmed.mean, full.p90);
    EXPECT_LT(trimmed.n, full.n);
    EXPECT_LE(full.p10, full.p25);
    EXPECT_LE(full.p25, full.p50);
    EXPECT_LE(full.p50, full.p75);
    EXPECT_LE(full.p75, full.p90);
  }
}

TEST(Correlation, ExactLinearIsOne) {
  std::vector<double> x{1, 2, 3, 4, 5}, y{2, 4, 6, 8, 10};
  const auto c = pearson(x, y);
  EXPECT_DOUBLE_EQ(c.r, 1.0);
  EXPECT_EQ(c.stars, "***");
}

TEST(Correlation, HandFixture) {
  // x = (1,2,3,4,5), y = (2,1,4,3,5): sxy = 8, sxx = syy = 10.
  std::vector<double> x{1, 2, 3, 4, 5}, y{2, 1, 4, 3, 5};
  const auto c = pearson(x, y);
  EXPECT_NEAR(c.r, 0.8, 1e-15);
  const double t = 0.8 * std::sqrt(3.0 / (1 - 0.64));
  EXPECT_NEAR(c.t, t, 1e-12);
  // Two-sided p for t = 2.3094 with 3 df.
  EXPECT_NEAR(c.p_value, 0.104088, 1e-5);
  EXPECT_EQ(c.stars, "");
}

TEST(Correlation, AffineInvariance) {
  Rng rng(5);
  std::normal_distribution<double> n;
  std::vector<double> x(50), y(50), xs(50), ys(50);
  for (int i = 0; i < 50; ++i) {
    x[i] = n(rng);
    y[i] = 0.3 * x[i] + n(rng);
    xs[i] = 3.5 * x[i] - 2.0;
    ys[i] = 0.01 * y[i] + 7.0;
  }
  EXPECT_NEAR(pearson(x, y).r, pearson(xs, ys).r, 1e-12);
}

TEST(Correlation, ComovementPoolsCountryPairs) {
  std::vector<SurpriseEvent> events{ev(0.1, -1, {{"A", 0.2}, {"B", 0.3}}), ev(-0.1, 1, {{"A", -0.2}}),
                                    ev(0.2, -1, {{"B", 0.5}}), ev(0.05, 1, {{"A", 9.0}})};
  const auto c = comovement_correlation(events, ClassFilter::negative);
  EXPECT_EQ(c.n, 4u);  // (-0.1, +1) is also a negative co-movement
  EXPECT_GT(c.r, 0.9);
}

TEST(MeanDiff, IdenticalSamples) {
  std::vector<double> a{1, 2, 3, 4};
  const auto r = mean_diff_test(a, a);
  EXPECT_EQ(r.t, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
}

TEST(MeanDiff, WelchFormula) {
  std::vector<double> a{0.001, -0.002, 0.0015, -0.001}, b{1.002, 0.999, 1.001, 0.998};
  const auto r = mean_diff_test(a, b);
  const double ma = stats::mean(a), mb = stats::mean(b);
  const double va = stats::variance(a) / 4, vb = stats::variance(b) / 4;
  EXPECT_NEAR(r.t, (ma - mb) / std::sqrt(va + vb), 1e-9);
  EXPECT_NEAR(r.df, (va + vb) * (va + vb) / (va * va / 3 + vb * vb / 3), 1e-9);
  EXPECT_LT(r.p_value, 0.01);
}

TEST(MeanDiff, KnownPValue) {
  // Welch test on two textbook samples; reference from a direct evaluation of
  // the t cdf with Welch-Satterthwaite degrees of freedom.
  std::vector<double> a{27.5, 21.0, 19.0, 23.6, 17.0, 17.9, 16.9, 20.1, 21.9, 22.6, 23.1, 19.6, 19.0, 21.7, 21.4};
  std::vector<double> b{27.1, 22.0, 20.8, 23.4, 23.4, 23.5, 25.8, 22.0, 24.8, 20.2, 21.9, 22.1, 22.9, 20.5, 24.4};
  const auto r = mean_diff_test(a, b);
  EXPECT_NEAR(r.t, -2.46, 0.005);
  EXPECT_NEAR(r.df, 24.988, 0.01);
  EXPECT_NEAR(r.p_value, 0.021, 0.001);
}
