#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "spillover/dsge.hpp"
#include "spillover/eventstudy.hpp"
#include "spillover/identify.hpp"
#include "spillover/io/artifacts.hpp"
#include "spillover/io/config.hpp"
#include "spillover/io/manifest.hpp"
#include "spillover/irfmatch.hpp"
#include "spillover/synthetic.hpp"

namespace fs = std::filesystem;
using namespace spillover;
using namespace spillover::eventstudy;
using io::json;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  std::string scheme;
  std::optional<int> horizon;
  std::optional<int> draws;
  std::string trim;
  std::optional<int> bands;
  std::string posterior;
};

struct Run {
  io::Config cfg;
  fs::path out;
  std::string config_hash;
};

Run prepare(const Options& o) {
  Run r;
  r.cfg = o.config.empty() ? io::parse_config("") : io::load_config(o.config);
  auto& c = r.cfg;
  std::string overrides;
  if (o.seed) {
    c.seed = *o.seed;
    c.var.seed = *o.seed;
    c.match.optimizer.seed = *o.seed;
    overrides += " seed=" + std::to_string(*o.seed);
  }
  if (o.horizon) {
    if (*o.horizon < 3) throw DataError("--horizon must be at least 3 months");
    c.identify.horizon = *o.horizon;
    c.model.horizon = *o.horizon / 3;
    overrides += " horizon=" + std::to_string(*o.horizon);
  }
  if (o.draws) {
    c.var.draws = *o.draws;
    overrides += " draws=" + std::to_string(*o.draws);
  }
  if (o.bands) {
    if (*o.bands != 68 && *o.bands != 90) throw DataError("--bands must be 68 or 90");
    c.identify.bands = *o.bands;
    overrides += " bands=" + std::to_string(*o.bands);
  }
  if (!o.trim.empty()) {
    const auto parts = csv::split_line(o.trim);
    const auto lo = parts.size() == 2 ? csv::parse_double(parts[0]) : std::nullopt;
    const auto hi = parts.size() == 2 ? csv::parse_double(parts[1]) : std::nullopt;
    if (!lo || !hi) throw DataError("--trim expects lo,hi percentiles, e.g. 10,90");
    c.trim = Trim{*lo, *hi};
    overrides += " trim=" + o.trim;
  }
  if (!o.scheme.empty()) {
    if (o.scheme != "sign" && o.scheme != "cholesky") throw DataError("--scheme must be sign or cholesky");
    c.match.scheme = o.scheme;
    overrides += " scheme=" + o.scheme;
  }
  r.config_hash = io::sha256(c.text + "\n#" + overrides);
  r.out = o.out;
  fs::create_directories(r.out);
  return r;
}

std::vector<double> band_probs(int bands) {
  const double tail = (100.0 - bands) / 200.0;
  return {tail, 0.5, 1.0 - tail};
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

// ---------------------------------------------------------------- events

void cmd_events(const Run& r) {
  const auto& c = r.cfg;
  if (c.events_file.empty()) throw DataError("config has no events.file");
  const auto events = load_events(c.events_file, c.event_columns);
  io::RunManifest man("events", r.config_hash, c.seed);
  man.input(c.events_file);

  const auto table = tabulate_events(events);
  const fs::path tab_csv = r.out / "tabulation.csv", tab_txt = r.out / "tabulation.txt";
  {
    csv::Writer w(tab_csv);
    w.row("stock_surprise", "rate_negative", "rate_zero", "rate_positive", "total");
    const char* rows[] = {"negative", "positive"};
    for (int i = 0; i < 2; ++i)
      w.row(rows[i], table.cells[i][0], table.cells[i][1], table.cells[i][2], table.row_total(i));
    w.row("total", table.col_total(0), table.col_total(1), table.col_total(2), table.tabulated());
    w.row("zero", "", "", "", table.stock_zero);
  }
  {
    std::ofstream f(tab_txt);
    auto line = [&](const std::string& label, int a, int b, int cc, int t) {
      f << std::left << std::setw(16) << label << std::right << std::setw(8) << a << std::setw(8) << b
        << std::setw(8) << cc << std::setw(8) << t << '\n';
    };
    f << std::left << std::setw(16) << "stock \\ rate" << std::right << std::setw(8) << "neg" << std::setw(8)
      << "zero" << std::setw(8) << "pos" << std::setw(8) << "total" << '\n';
    line("negative", table.cells[0][0], table.cells[0][1], table.cells[0][2], table.row_total(0));
    line("positive", table.cells[1][0], table.cells[1][1], table.cells[1][2], table.row_total(1));
    line("total", table.col_total(0), table.col_total(1), table.col_total(2), table.tabulated());
    f << "\nnegative co-movement " << table.count(EventClass::NegativeComovement) << ", positive co-movement "
      << table.count(EventClass::PositiveComovement) << ", no rate response "
      << table.count(EventClass::NoRateResponse) << ", total " << table.total() << '\n';
    f << "zero stock surprise: " << table.stock_zero << " (ambiguous, excluded from both co-movement classes: "
      << table.ambiguous << ")\n";
  }

  const ClassFilter filters[] = {ClassFilter::all, ClassFilter::negative, ClassFilter::positive,
                                 ClassFilter::no_response};
  const fs::path stats_csv = r.out / "stats.csv";
  {
    csv::Writer w(stats_csv);
    w.row("sample", "trim", "n", "mean", "sd", "p10", "p25", "p50", "p75", "p90");
    std::vector<std::optional<Trim>> trims{std::nullopt};
    if (c.trim) trims.push_back(c.trim);
    for (const auto& tr : trims)
      for (auto f : filters) {
        const std::string label = tr ? "p" + csv::format_double(tr->lo) + "-p" + csv::format_double(tr->hi) : "none";
        try {
          const auto s = depreciation_stats(events, f, tr);
          w.row(to_string(f), label, s.n, s.mean, s.sd, s.p10, s.p25, s.p50, s.p75, s.p90);
        } catch (const DataError&) {
          w.row(to_string(f), label, pooled_depreciations(events, f).size(), "", "", "", "", "", "", "");
        }
      }
  }

  const fs::path corr_csv = r.out / "correlations.csv";
  {
    csv::Writer w(corr_csv);
    w.row("sample", "n", "correlation", "t", "p_value", "stars");
    for (auto f : filters) {
      try {
        const auto cr = comovement_correlation(events, f);
        w.row(to_string(f), cr.n, cr.r, cr.t, cr.p_value, cr.stars);
      } catch (const DataError&) {
        w.row(to_string(f), "", "", "", "", "");
      }
    }
  }

  const fs::path test_csv = r.out / "mean_diff.csv";
  {
    csv::Writer w(test_csv);
    w.row("sample_a", "sample_b", "n_a", "n_b", "mean_a", "mean_b", "t", "df", "p_value");
    const auto a = pooled_depreciations(events, ClassFilter::negative);
    const auto b = pooled_depreciations(events, ClassFilter::positive);
    try {
      const auto t = mean_diff_test(a, b);
      w.row("negative_comovement", "positive_comovement", a.size(), b.size(), t.mean_a, t.mean_b, t.t, t.df,
            t.p_value);
    } catch (const DataError&) {
      w.row("negative_comovement", "positive_comovement", a.size(), b.size(), "", "", "", "", "");
    }
  }

  const fs::path scatter_csv = r.out / "scatter.csv";
  {
    csv::Writer w(scatter_csv);
    w.row("panel", "country", "date", "class", "x", "y");
    for (const auto& e : events)
      w.row("rate_stock", "", format_date(e.date), to_string(classify_event(e)), e.d_rate, e.d_stock);
    for (const auto& e : events)
      for (const auto& [country, v] : e.ner_change)
        w.row("rate_ner", country, format_date(e.date), to_string(classify_event(e)), e.d_rate, v);
  }

  for (const auto& p : {tab_csv, tab_txt, stats_csv, corr_csv, test_csv, scatter_csv}) man.output(p);
  man.extra() = {{"events", events.size()}, {"tabulated", table.tabulated()}, {"stock_zero", table.stock_zero}};
  man.write(r.out);
  std::cout << "events: " << events.size() << " announcements tabulated into " << r.out.string() << '\n';
}

// -------------------------------------------------------------- simulate

void cmd_simulate(const Run& r) {
  const auto& c = r.cfg;
  const auto events = synthetic::make_events(c.plan, c.seed);
  const fs::path ev_path = r.out / "events.csv", macro_path = r.out / "macro.csv", gen_path = r.out / "generator.json";
  synthetic::write_events(events, c.plan.countries, ev_path);

  const auto surprises = aggregate_to_monthly(events, c.plan.span);
  const auto truth = synthetic::default_macro_truth(synthetic::second_moment(surprises));
  write_panel(synthetic::simulate_macro(surprises, truth, c.seed), macro_path);

  auto mat = [](const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
      rows.push_back(row);
    }
    return rows;
  };
  const auto table = tabulate_events(events);
  json gen;
  gen["seed"] = c.seed;
  gen["span"] = {c.plan.span.first.str(), c.plan.span.last.str()};
  gen["countries"] = c.plan.countries;
  gen["cells"] = {{table.cells[0][0], table.cells[0][1], table.cells[0][2]},
                  {table.cells[1][0], table.cells[1][1], table.cells[1][2]}};
  gen["planted_cells"] = {{c.plan.cells[0][0], c.plan.cells[0][1], c.plan.cells[0][2]},
                          {c.plan.cells[1][0], c.plan.cells[1][1], c.plan.cells[1][2]}};
  gen["stock_zero"] = c.plan.stock_zero;
  gen["total"] = c.plan.total();
  gen["classes"] = {{"negative_comovement", table.count(EventClass::NegativeComovement)},
                    {"positive_comovement", table.count(EventClass::PositiveComovement)},
                    {"no_rate_response", table.count(EventClass::NoRateResponse)}};
  gen["macro"] = {{"variables", truth.names},
                  {"lags", truth.var.lags},
                  {"lag_coefficients", mat(truth.var.lag_coef.bottomRows(truth.names.size()))},
                  {"surprise_loading", mat(truth.loading)},
                  {"innovation_covariance", mat(truth.sigma_cond)}};
  std::ofstream(gen_path) << gen.dump(2) << '\n';

  io::RunManifest man("simulate", r.config_hash, c.seed);
  for (const auto& p : {ev_path, macro_path, gen_path}) man.output(p);
  man.write(r.out);
  std::cout << "simulate: " << events.size() << " events and a " << surprises.periods() << "-month panel in "
            << r.out.string() << '\n';
}

// ------------------------------------------------------------------- var

std::vector<std::string> expected_variables(const io::Config& c) {
  std::vector<std::string> v{"d_rate", "d_stock"};
  for (const auto& s : c.series) v.push_back(s.name);
  return v;
}

void cmd_var(const Run& r) {
  const auto& c = r.cfg;
  if (c.events_file.empty()) throw DataError("config has no events.file");
  if (c.series.empty()) throw DataError("config has no var.series");
  io::RunManifest man("var", r.config_hash, c.seed);
  auto events = load_events(c.events_file, c.event_columns);
  man.input(c.events_file);
  std::set<fs::path> sources;
  for (const auto& s : c.series) sources.insert(s.source);
  for (const auto& p : sources) man.input(p);

  const auto macro = load_panel(c.series, c.span);
  const auto span = macro.span();
  const auto before = events.size();
  std::erase_if(events, [&](const SurpriseEvent& e) { return !span.contains(Month::of(e.date)); });
  const auto panel = combine(aggregate_to_monthly(events, span), macro);

  const bvar::Posterior post(panel, c.var);
  const auto draws = post.draws();
  io::PosteriorMeta meta;
  meta.var_hash = io::sha256(c.var_section);
  meta.seed = c.var.seed;
  meta.draws = c.var.draws;
  meta.lags = c.var.lags;
  meta.n_surprise = c.var.n_surprise;
  meta.variables = panel.columns;
  meta.sample = span;
  meta.effective_observations = post.effective_observations();
  const auto [bin, jpath] = io::write_posterior(r.out, draws, meta);
  man.output(bin);
  man.output(jpath);
  man.extra() = {{"sample", {span.first.str(), span.last.str()}},
                 {"events_in_sample", events.size()},
                 {"events_dropped", before - events.size()},
                 {"draws", draws.size()}};
  man.write(r.out);
  std::cout << "var: " << draws.size() << " posterior draws over " << span.first.str() << ".." << span.last.str()
            << " (" << post.effective_observations() << " effective observations)\n";
}

// -------------------------------------------------------------- irf/fevd

struct Identified {
  std::string scheme;
  std::vector<identify::StructuralDraw> draws;
  std::vector<std::string> names;
  json info;
};

Identified identify_posterior(const Run& r, const Options& o, io::RunManifest& man) {
  const auto& c = r.cfg;
  const fs::path post = o.posterior.empty() ? r.out / "posterior.json" : fs::path(o.posterior);
  io::PosteriorMeta meta;
  const auto draws = io::read_posterior(post, io::sha256(c.var_section), expected_variables(c), &meta);
  man.input(post);

  Identified id;
  id.scheme = o.scheme.empty() ? "sign" : o.scheme;
  for (const auto& v : meta.variables) id.names.push_back(v.name);
  auto index_of = [&](const std::string& name) {
    for (std::size_t i = 0; i < id.names.size(); ++i)
      if (id.names[i] == name) return static_cast<int>(i);
    throw DataError("variable '" + name + "' is not in the posterior artifact");
  };
  const int rate = index_of(c.identify.rate);

  if (id.scheme == "sign") {
    identify::SignRestrictionSpec spec;
    spec.rate_index = rate;
    spec.stock_index = index_of(c.identify.stock);
    spec.max_attempts = c.identify.max_attempts;
    spec.validate(meta.n_surprise);
    auto batch = identify::identify_sign_all(draws, spec, c.seed);
    id.info = {{"posterior_draws", draws.size()},
               {"accepted", batch.accepted.size()},
               {"rejected", batch.rejected},
               {"rotation_attempts", batch.attempts},
               {"acceptance_rate", batch.acceptance_rate(draws.size())}};
    id.draws = std::move(batch.accepted);
  } else {
    std::vector<int> order;
    if (c.identify.cholesky_order.empty()) {
      for (std::size_t i = 0; i < id.names.size(); ++i) order.push_back(static_cast<int>(i));
    } else {
      for (const auto& n : c.identify.cholesky_order) order.push_back(index_of(n));
    }
    id.draws.resize(draws.size());
    parallel_for(draws.size(), [&](std::size_t i) { id.draws[i] = identify::identify_cholesky(draws[i], order, rate); });
    id.info = {{"posterior_draws", draws.size()}, {"ordering", c.identify.cholesky_order}};
  }
  if (id.draws.size() < 2)
    throw NumericalError("only " + std::to_string(id.draws.size()) + " draws satisfied the identification");
  return id;
}

fs::path write_fevd(const Run& r, const Identified& id) {
  const int H = r.cfg.identify.horizon;
  const std::size_t D = id.draws.size();
  std::vector<Eigen::MatrixXd> per_draw(D);
  std::vector<std::vector<Eigen::MatrixXd>> shares(D);
  parallel_for(D, [&](std::size_t d) {
    shares[d].reserve(static_cast<std::size_t>(H));
    for (int h = 1; h <= H; ++h) shares[d].push_back(identify::grouped_fevd(id.draws[d], h));
  });
  const auto& labels = id.draws.front().labels;
  const fs::path path = r.out / "fevd.csv";
  csv::Writer w(path);
  w.row("scheme", "variable", "shock", "horizon", "share");
  const auto N = static_cast<Eigen::Index>(id.names.size());
  for (Eigen::Index v = 0; v < N; ++v)
    for (std::size_t s = 0; s <= labels.size(); ++s)
      for (int h = 1; h <= H; ++h) {
        double acc = 0.0;
        for (std::size_t d = 0; d < D; ++d) acc += shares[d][static_cast<std::size_t>(h - 1)](v, static_cast<Eigen::Index>(s));
        const std::string shock = s < labels.size() ? labels[s] : identify::kOther;
        w.row(id.scheme, id.names[static_cast<std::size_t>(v)], shock, h, acc / static_cast<double>(D));
      }
  return path;
}

void cmd_irf(const Run& r, const Options& o, bool with_irf) {
  io::RunManifest man(with_irf ? "irf" : "fevd", r.config_hash, r.cfg.seed);
  const auto id = identify_posterior(r, o, man);
  if (with_irf) {
    const auto irfs = identify::collect_irfs(id.draws, r.cfg.identify.horizon, id.names);
    const auto bands = identify::quantile_bands(irfs, band_probs(r.cfg.identify.bands));
    const fs::path irf_path = r.out / "irf.csv", mom_path = r.out / "irf_moments.csv";
    io::write_irf_csv(irf_path, id.scheme, bands);
    io::write_moments(mom_path, io::quarterly_moments(irfs, id.scheme));
    man.output(irf_path);
    man.output(mom_path);
  }
  man.output(write_fevd(r, id));
  man.extra() = id.info;
  man.extra()["scheme"] = id.scheme;
  man.extra()["horizon_months"] = r.cfg.identify.horizon;
  man.extra()["bands"] = r.cfg.identify.bands;
  man.write(r.out);
  std::cout << (with_irf ? "irf" : "fevd") << ": " << id.scheme << " scheme, " << id.draws.size()
            << " structural draws\n";
}

// ------------------------------------------------------------------ dsge

void cmd_dsge(const Run& r) {
  const auto& c = r.cfg;
  const auto m = dsge::solve_model(c.model.params);
  const int H = c.model.horizon;
  const fs::path irf_path = r.out / "model_irf.csv", mom_path = r.out / "model_moments.csv",
                 sum_path = r.out / "dsge_summary.json";
  {
    csv::Writer w(irf_path);
    w.row("scheme", "shock", "variable", "horizon", "value");
    for (const auto& shock : c.model.shocks) {
      const Eigen::MatrixXd o = dsge::model_irf(m, dsge::shock_index(shock), H);
      for (int j = 0; j < dsge::kNumObs; ++j)
        for (int h = 0; h <= H; ++h) w.row("model", shock, dsge::kObsNames[j], h, o(h, j));
    }
  }
  std::vector<io::MomentRow> rows;
  for (const auto& shock : c.model.shocks) {
    std::vector<std::string> all;
    for (auto n : dsge::kObsNames) all.emplace_back(n);
    const auto t = irfmatch::model_target(c.model.params, shock, all, c.model.target_rel_sd);
    for (Eigen::Index j = 0; j < t.mean.cols(); ++j)
      for (Eigen::Index k = 0; k < t.mean.rows(); ++k)
        rows.push_back({"model", shock, all[static_cast<std::size_t>(j)], static_cast<int>(k), t.mean(k, j),
                        t.variance(k, j)});
  }
  io::write_moments(mom_path, rows);

  json ss;
  for (int i = 0; i < dsge::kNumVars; ++i) ss[std::string(dsge::kVarNames[i])] = m.ss.levels[i];
  json params;
  for (const auto& e : dsge::kParamTable) params[std::string(e.name)] = c.model.params.*(e.member);
  const json summary = {{"steady_state", ss},
                        {"steady_state_max_residual", m.ss.max_residual},
                        {"leverage", m.ss.leverage()},
                        {"stable_roots", m.sol.stable_roots},
                        {"predetermined_slots", m.sol.required},
                        {"spectral_radius", m.sol.spectral_radius},
                        {"solution_residual", m.sol.residual},
                        {"params", params},
                        {"units", "rates: annualized percentage points (400 x log deviation); spread: 400 x (Z - R_d); "
                                  "others: percent (100 x log deviation); horizons in quarters"}};
  std::ofstream(sum_path) << summary.dump(2) << '\n';

  io::RunManifest man("dsge", r.config_hash, c.seed);
  for (const auto& p : {irf_path, mom_path, sum_path}) man.output(p);
  man.write(r.out);
  std::cout << "dsge: steady-state residual " << m.ss.max_residual << ", " << m.sol.stable_roots
            << " stable roots for " << m.sol.required << " slots, spectral radius " << fixed(m.sol.spectral_radius, 4)
            << '\n';
}

// ----------------------------------------------------------------- match

void cmd_match(const Run& r) {
  const auto& c = r.cfg;
  const fs::path target_path = c.match.target.empty() ? r.out / "irf_moments.csv" : c.match.target;
  io::RunManifest man("match", r.config_hash, c.seed);

  irfmatch::EstimationProblem pb;
  pb.free = c.match.free;
  pb.fixed = c.model.params;
  pb.shock = c.match.model_shock;
  pb.target = io::read_target(target_path, c.match.scheme, c.match.shock, c.match.observables);
  pb.validate();
  man.input(target_path);

  const auto res = irfmatch::estimate(pb, c.match.optimizer);
  const auto& ev = res.at_estimate;

  json values, bounds;
  for (std::size_t i = 0; i < res.names.size(); ++i) {
    values[res.names[i]] = res.estimate[static_cast<Eigen::Index>(i)];
    bounds[res.names[i]] = {pb.free[i].lo, pb.free[i].hi};
  }
  json starts = json::array();
  for (const auto& s : res.starts) {
    json st, en;
    for (std::size_t i = 0; i < res.names.size(); ++i) {
      st[res.names[i]] = s.start[static_cast<Eigen::Index>(i)];
      en[res.names[i]] = s.estimate[static_cast<Eigen::Index>(i)];
    }
    starts.push_back({{"index", s.index},
                      {"start", st},
                      {"estimate", en},
                      {"objective", s.value},
                      {"iterations", s.iterations},
                      {"converged", s.converged},
                      {"solvable", s.solved}});
  }
  const json est = {{"names", res.names},
                    {"values", values},
                    {"objective", res.objective},
                    {"diagnostics",
                     {{"best_start", res.best_start},
                      {"polished", res.polished},
                      {"solvable_at_estimate", ev.solved},
                      {"moments", pb.target.moments()},
                      {"bounds", bounds},
                      {"target", {{"file", target_path.filename().string()},
                                  {"scheme", c.match.scheme},
                                  {"shock", c.match.shock},
                                  {"model_shock", pb.shock}}},
                      {"spread_units", "annualized percentage points: model 400 x (Z - R_d)"},
                      {"starts", starts}}}};
  const fs::path est_path = r.out / "estimates.json", fit_path = r.out / "fit.csv";
  std::ofstream(est_path) << est.dump(2) << '\n';

  {
    csv::Writer w(fit_path);
    w.row("variable", "target_variable", "horizon", "target", "target_lo", "target_hi", "model", "weighted_residual");
    const auto& t = pb.target;
    for (Eigen::Index j = 0; j < t.mean.cols(); ++j)
      for (Eigen::Index k = 0; k < t.mean.rows(); ++k) {
        const double sd = std::sqrt(t.variance(k, j));
        const double model = ev.solved ? t.mean(k, j) + ev.residual[j * t.mean.rows() + k] : NAN;
        w.row(t.variables[static_cast<std::size_t>(j)], c.match.observables[static_cast<std::size_t>(j)].second,
              static_cast<int>(k), t.mean(k, j), t.mean(k, j) - sd, t.mean(k, j) + sd, model,
              ev.solved ? (model - t.mean(k, j)) / sd : NAN);
      }
  }
  man.output(est_path);
  man.output(fit_path);
  man.write(r.out);
  std::cout << "match: objective " << res.objective << " (best start " << res.best_start << ")\n";
  for (std::size_t i = 0; i < res.names.size(); ++i)
    std::cout << "  " << std::left << std::setw(12) << res.names[i] << res.estimate[static_cast<Eigen::Index>(i)]
              << '\n';
}

// ------------------------------------------------------------- plot-data

void cmd_plot_data(const Run& r) {
  struct Kind {
    const char* kind;
    const char* file;
    std::vector<std::string> columns;
    std::vector<std::string> group_by;
  };
  const std::vector<Kind> kinds{
      {"fan", "irf.csv", {"scheme", "shock", "variable", "horizon", "q50"}, {"shock", "variable"}},
      {"fan", "model_irf.csv", {"scheme", "shock", "variable", "horizon", "value"}, {"shock", "variable"}},
      {"fevd-bar", "fevd.csv", {"scheme", "variable", "shock", "horizon", "share"}, {"variable"}},
      {"scatter", "scatter.csv", {"panel", "country", "x", "y"}, {"panel", "country"}},
      {"fit", "fit.csv", {"variable", "horizon", "target", "target_lo", "target_hi", "model"}, {"variable"}},
  };
  json jobs = json::array();
  io::RunManifest man("plot-data", r.config_hash, r.cfg.seed);
  for (const auto& k : kinds) {
    const fs::path p = r.out / k.file;
    if (!fs::exists(p)) continue;
    const auto table = csv::read_file(p);
    for (const auto& col : k.columns) table.require_column(col, p.string());
    if (table.rows.empty()) throw DataError(p.string() + ": no rows to plot");
    std::vector<std::size_t> idx;
    for (const auto& g : k.group_by) idx.push_back(table.require_column(g, p.string()));
    std::set<std::vector<std::string>> groups;
    for (const auto& row : table.rows) {
      std::vector<std::string> key;
      for (auto i : idx) key.push_back(row[i]);
      groups.insert(key);
    }
    json panels = json::array();
    for (const auto& g : groups) {
      json sel;
      for (std::size_t i = 0; i < g.size(); ++i) sel[k.group_by[i]] = g[i];
      panels.push_back(sel);
    }
    man.input(p);
    jobs.push_back({{"kind", k.kind}, {"input", k.file}, {"panels", panels}});
  }
  if (jobs.empty()) throw DataError("no plottable outputs found in '" + r.out.string() + "'");
  const fs::path path = r.out / "plot_jobs.json";
  std::ofstream(path) << json{{"jobs", jobs}}.dump(2) << '\n';
  man.output(path);
  man.write(r.out);
  std::cout << "plot-data: " << jobs.size() << " plot jobs\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spillovers of US monetary surprises to emerging markets: event study, sign-restricted BVAR, "
               "DSGE solution and IRF matching"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool need_config) {
    auto* opt = sub->add_option("--config", o.config, "YAML configuration file");
    if (need_config) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "random seed (overrides the config)");
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
  };
  auto* ev = app.add_subcommand("events", "classify announcements and tabulate exchange-rate responses");
  common(ev, true);
  ev->add_option("--trim", o.trim, "also report statistics trimmed to percentiles lo,hi");
  auto* sim = app.add_subcommand("simulate", "write a synthetic event set and monthly panel");
  common(sim, false);
  auto* var = app.add_subcommand("var", "estimate the restricted Bayesian VAR and store posterior draws");
  common(var, true);
  var->add_option("--draws", o.draws, "number of posterior draws");
  std::vector<CLI::App*> ident;
  ident.push_back(app.add_subcommand("irf", "identify structural shocks and write irf.csv / fevd.csv"));
  ident.push_back(app.add_subcommand("fevd", "identify structural shocks and write fevd.csv"));
  for (auto* s : ident) {
    common(s, true);
    s->add_option("--scheme", o.scheme, "identification: sign or cholesky")
        ->check(CLI::IsMember({"sign", "cholesky"}));
    s->add_option("--horizon", o.horizon, "IRF horizon in months");
    s->add_option("--bands", o.bands, "credible band coverage, 68 or 90")->check(CLI::IsMember({68, 90}));
    s->add_option("--posterior", o.posterior, "posterior manifest (default <out>/posterior.json)");
  }
  auto* dsg = app.add_subcommand("dsge", "solve the model and write model impulse responses");
  common(dsg, false);
  dsg->add_option("--horizon", o.horizon, "IRF horizon in months (reported in quarters)");
  auto* mt = app.add_subcommand("match", "estimate model parameters by impulse-response matching");
  common(mt, true);
  mt->add_option("--scheme", o.scheme, "identification scheme of the target")->check(CLI::IsMember({"sign", "cholesky"}));
  auto* pd = app.add_subcommand("plot-data", "validate outputs and write plot job descriptions");
  common(pd, false);

  CLI11_PARSE(app, argc, argv);
  const auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    const Run r = prepare(o);
    if (name == "events") cmd_events(r);
    else if (name == "simulate") cmd_simulate(r);
    else if (name == "var") cmd_var(r);
    else if (name == "irf") cmd_irf(r, o, true);
    else if (name == "fevd") cmd_irf(r, o, false);
    else if (name == "dsge") cmd_dsge(r);
    else if (name == "match") cmd_match(r);
    else if (name == "plot-data") cmd_plot_data(r);
  } catch (const Error& e) {
    std::cerr << "spillover " << name << ": error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "spillover " << name << ": unexpected failure: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
