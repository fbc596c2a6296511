#include <gtest/gtest.h>

#include <fstream>

#include "fixtures.hpp"
#include "spillover/io/artifacts.hpp"
#include "spillover/io/config.hpp"
#include "spillover/io/manifest.hpp"

using namespace spillover;
using namespace spillover::io;

namespace {

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream f(p, std::ios::binary);
  f << s;
}

std::vector<bvar::PosteriorDraw> some_draws(int n) {
  std::vector<bvar::PosteriorDraw> out;
  for (int i = 0; i < n; ++i) {
    auto d = fixtures::restricted_var2();
    d.lag_coef.array() += 0.01 * i;
    d.constant[2] = -0.5 * i;
    out.push_back(d);
  }
  return out;
}

PosteriorMeta meta_for(const std::vector<bvar::PosteriorDraw>& draws) {
  PosteriorMeta m;
  m.var_hash = sha256("var: test");
  m.seed = 9;
  m.draws = static_cast<int>(draws.size());
  m.lags = 2;
  m.n_surprise = 2;
  m.variables = fixtures::as_panel(Eigen::MatrixXd::Zero(3, 4), 2).columns;
  m.sample = {parse_month("2000-01"), parse_month("2009-12")};
  m.effective_observations = 118;
  return m;
}

std::vector<std::string> names_of(const PosteriorMeta& m) {
  std::vector<std::string> out;
  for (const auto& c : m.variables) out.push_back(c.name);
  return out;
}

}  // namespace

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(sha256("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  fixtures::TempDir dir;
  write_text(dir / "f.txt", "abc");
  EXPECT_EQ(sha256_file(dir / "f.txt"), sha256("abc"));
}

TEST(Manifest, RecordsOutputsAndSeed) {
  fixtures::TempDir dir;
  write_text(dir / "a.csv", "x\n1\n");
  RunManifest m("events", sha256("cfg"), 42);
  m.output(dir / "a.csv");
  m.extra()["note"] = 1;
  const auto path = m.write(dir.path());
  EXPECT_EQ(path.filename(), "manifest_events.json");
  const auto j = read_json(path);
  EXPECT_EQ(j["seed"], 42);
  EXPECT_EQ(j["config_sha256"], sha256("cfg"));
  EXPECT_EQ(j["outputs"][0]["sha256"], sha256("x\n1\n"));
  EXPECT_EQ(j["details"]["note"], 1);
}

TEST(Config, RejectsUnknownKeys) {
  EXPECT_THROW(parse_config("seeed: 3\n"), DataError);
  EXPECT_THROW(parse_config("var:\n  lagz: 3\n"), DataError);
  EXPECT_THROW(parse_config("match:\n  free:\n    beta: [0.9, 0.99]\n    kappa: 1\n"), DataError);
}

TEST(Config, ResolvesPathsAgainstConfigDirectory) {
  fixtures::TempDir dir;
  fs::create_directories(dir / "cfg");
  const std::string text =
      "seed: 7\n"
      "events:\n  file: ../data/ev.csv\n  trim: [5, 95]\n"
      "var:\n  lags: 3\n  draws: 50\n  series:\n    - {name: ip, file: m.csv, transform: log}\n";
  write_text(dir / "cfg" / "run.yaml", text);
  const auto c = load_config(dir / "cfg" / "run.yaml");
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.var.seed, 7u);
  EXPECT_EQ(c.events_file, (dir / "data" / "ev.csv").lexically_normal());
  ASSERT_TRUE(c.trim);
  EXPECT_EQ(c.trim->lo, 5.0);
  EXPECT_EQ(c.var.lags, 3);
  ASSERT_EQ(c.series.size(), 1u);
  EXPECT_EQ(c.series[0].source, dir / "cfg" / "m.csv");
  EXPECT_EQ(c.series[0].transform, Transform::log);
  EXPECT_EQ(c.series[0].column, "ip");
}

TEST(Config, ModelAndMatchSections) {
  const auto c = parse_config(
      "model:\n  params: {kappa: 3.0, a22: 0.9}\n  horizon: 8\n"
      "match:\n  scheme: cholesky\n  shock: MP\n  observables: {rstar: us_1y, ip: ip}\n"
      "  free: {kappa: [0.5, 5]}\n  starts: 3\n  initial: {kappa: 2}\n");
  EXPECT_EQ(c.model.params.kappa, 3.0);
  EXPECT_EQ(c.model.params.a22, 0.9);
  EXPECT_EQ(c.model.horizon, 8);
  EXPECT_EQ(c.match.scheme, "cholesky");
  ASSERT_EQ(c.match.observables.size(), 2u);
  EXPECT_EQ(c.match.observables[0], (std::pair<std::string, std::string>{"rstar", "us_1y"}));
  ASSERT_EQ(c.match.free.size(), 1u);
  EXPECT_EQ(c.match.free[0].hi, 5.0);
  EXPECT_EQ(c.match.optimizer.starts, 3);
  ASSERT_TRUE(c.match.optimizer.initial);
  EXPECT_EQ((*c.match.optimizer.initial)[0], 2.0);

  EXPECT_THROW(parse_config("model:\n  params: {gamma: 1}\n"), DataError);
  EXPECT_THROW(parse_config("var:\n  series:\n    - {name: m, file: x.csv, role: surprise}\n"), DataError);
}

TEST(Config, DefaultsMatchAllObservables) {
  const auto c = parse_config("seed: 1\n");
  EXPECT_EQ(c.match.observables.size(), 7u);
  EXPECT_EQ(c.match.free.size(), 7u);
}

TEST(Posterior, RoundTripsExactly) {
  fixtures::TempDir dir;
  const auto draws = some_draws(5);
  const auto meta = meta_for(draws);
  const auto [bin, man] = write_posterior(dir.path(), draws, meta);
  EXPECT_EQ(fs::file_size(bin), 5 * doubles_per_draw(4, 2) * sizeof(double));

  PosteriorMeta back;
  const auto got = read_posterior(man, meta.var_hash, names_of(meta), &back);
  ASSERT_EQ(got.size(), draws.size());
  for (std::size_t i = 0; i < draws.size(); ++i) {
    EXPECT_EQ(got[i].lag_coef, draws[i].lag_coef);
    EXPECT_EQ(got[i].constant, draws[i].constant);
    EXPECT_EQ(got[i].sigma, draws[i].sigma);
    EXPECT_EQ(got[i].n_surprise, 2);
    EXPECT_EQ(got[i].lags, 2);
  }
  EXPECT_EQ(back.seed, 9u);
  EXPECT_EQ(back.effective_observations, 118);
  EXPECT_EQ(back.variables, meta.variables);
}

TEST(Posterior, SchemaMismatchIsReportedBeforeLoading) {
  fixtures::TempDir dir;
  const auto draws = some_draws(2);
  const auto meta = meta_for(draws);
  const auto [bin, man] = write_posterior(dir.path(), draws, meta);
  fs::remove(bin);  // a mismatch must be reported without touching the binary
  try {
    read_posterior(man, sha256("var: other"), {});
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("schema mismatch"), std::string::npos);
  }
  try {
    read_posterior(man, "", {"m0", "m1", "y2", "cpi"});
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("schema mismatch"), std::string::npos);
  }
}

TEST(Posterior, DetectsCorruption) {
  fixtures::TempDir dir;
  const auto draws = some_draws(2);
  const auto [bin, man] = write_posterior(dir.path(), draws, meta_for(draws));
  {
    std::fstream f(bin, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(16);
    f.put('\x7f');
  }
  EXPECT_THROW(read_posterior(man, "", {}), DataError);
  fs::resize_file(bin, 24);
  EXPECT_THROW(read_posterior(man, "", {}), DataError);
}

TEST(IrfTables, QuantileColumnNames) {
  EXPECT_EQ(quantile_column(0.16), "q16");
  EXPECT_EQ(quantile_column(0.5), "q50");
  EXPECT_EQ(quantile_column(0.84), "q84");
  EXPECT_EQ(quantile_column(0.05), "q05");
}

TEST(IrfTables, QuarterlyMomentsAcrossDraws) {
  identify::IrfSet irfs(3, 1, 1, 7);
  irfs.shock_names = {"PureMP"};
  irfs.variable_names = {"ip"};
  for (std::size_t d = 0; d < 3; ++d)
    for (int h = 0; h < 7; ++h) irfs.at(d, 0, 0, h) = static_cast<double>(h) + static_cast<double>(d);
  const auto rows = quarterly_moments(irfs, "sign");
  ASSERT_EQ(rows.size(), 2u);  // month 6 starts an incomplete quarter
  EXPECT_EQ(rows[1].quarter, 1);
  EXPECT_DOUBLE_EQ(rows[0].mean, 2.0);  // (1 + 2 + 3) / 3
  EXPECT_DOUBLE_EQ(rows[1].mean, 5.0);
  EXPECT_DOUBLE_EQ(rows[0].variance, 1.0);
}

TEST(IrfTables, ReadTargetChecksCompleteness) {
  fixtures::TempDir dir;
  std::vector<MomentRow> rows;
  for (int k = 0; k < 12; ++k) {
    rows.push_back({"sign", "PureMP", "us_1y", k, 0.1 * k, 0.01});
    rows.push_back({"sign", "Info", "us_1y", k, 9.0, 1.0});
    if (k < 11) rows.push_back({"sign", "PureMP", "ip", k, -0.2, 0.04});
  }
  write_moments(dir / "m.csv", rows);
  const auto t = read_target(dir / "m.csv", "sign", "PureMP", {{"rstar", "us_1y"}});
  EXPECT_EQ(t.variables, std::vector<std::string>{"rstar"});
  EXPECT_DOUBLE_EQ(t.mean(5, 0), 0.5);
  EXPECT_DOUBLE_EQ(t.variance(5, 0), 0.01);
  EXPECT_THROW(read_target(dir / "m.csv", "sign", "PureMP", {{"rstar", "us_1y"}, {"ip", "ip"}}), DataError);
  EXPECT_THROW(read_target(dir / "m.csv", "cholesky", "MP", {{"rstar", "us_1y"}}), DataError);
}
