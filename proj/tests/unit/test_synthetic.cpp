#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "spillover/eventstudy.hpp"
#include "spillover/synthetic.hpp"

using namespace spillover;
using namespace spillover::synthetic;

TEST(Synthetic, EventsReproducePlantedCells) {
  EventPlan plan;
  plan.stock_zero = 3;
  const auto events = make_events(plan, 11);
  ASSERT_EQ(static_cast<int>(events.size()), plan.total());
  const auto tab = eventstudy::tabulate_events(events);
  EXPECT_EQ(tab.cells, plan.cells);
  EXPECT_EQ(tab.stock_zero, 3);
  EXPECT_EQ(tab.ambiguous, 0);
  for (std::size_t i = 1; i < events.size(); ++i) EXPECT_LT(events[i - 1].date, events[i].date);
}

TEST(Synthetic, SeedDeterminesEvents) {
  const EventPlan plan;
  const auto a = make_events(plan, 3), b = make_events(plan, 3), c = make_events(plan, 4);
  ASSERT_EQ(a.size(), b.size());
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].date, b[i].date);
    EXPECT_EQ(a[i].d_rate, b[i].d_rate);
    EXPECT_EQ(a[i].ner_change, b[i].ner_change);
    differs |= a[i].d_rate != c[i].d_rate;
  }
  EXPECT_TRUE(differs);
}

TEST(Synthetic, EventFileRoundTrips) {
  fixtures::TempDir dir;
  const EventPlan plan;
  const auto events = make_events(plan, 8);
  write_events(events, plan.countries, dir / "events.csv");
  const auto back = load_events(dir / "events.csv");
  ASSERT_EQ(back.size(), events.size());
  EXPECT_EQ(eventstudy::tabulate_events(back).cells, plan.cells);
  EXPECT_EQ(back[17].d_stock, events[17].d_stock);
}

TEST(Synthetic, TooManyEventsIsAnError) {
  EventPlan plan;
  plan.span = {parse_month("2000-01"), parse_month("2000-12")};
  EXPECT_THROW(make_events(plan, 1), DataError);
}

TEST(Synthetic, MacroPanelShape) {
  const EventPlan plan;
  const auto events = make_events(plan, 2);
  const auto surprises = aggregate_to_monthly(events, plan.span);
  const auto truth = default_macro_truth(second_moment(surprises));
  const auto macro = simulate_macro(surprises, truth, 2);
  EXPECT_EQ(macro.periods(), surprises.periods());
  EXPECT_EQ(macro.variables(), static_cast<int>(truth.names.size()));
  EXPECT_EQ(macro.start, plan.span.first);
  EXPECT_TRUE(macro.values.allFinite());
  EXPECT_EQ(macro.values, simulate_macro(surprises, truth, 2).values);
  EXPECT_EQ(truth.var.sigma.rows(), truth.var.n());
  EXPECT_LT((truth.var.sigma - truth.var.sigma.transpose()).cwiseAbs().maxCoeff(), 1e-14);
}
