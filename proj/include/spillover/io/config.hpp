#pragma once

#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "spillover/bvar.hpp"
#include "spillover/dsge/params.hpp"
#include "spillover/eventstudy.hpp"
#include "spillover/identify.hpp"
#include "spillover/ingest.hpp"
#include "spillover/irfmatch.hpp"
#include "spillover/synthetic.hpp"

namespace spillover::io {

namespace fs = std::filesystem;

struct IdentifyConfig {
  std::string rate = "d_rate";
  std::string stock = "d_stock";
  int max_attempts = 1000;
  int horizon = 36;
  int bands = 68;
  std::vector<std::string> cholesky_order;  // empty: panel order
};

struct ModelConfig {
  dsge::DsgeParams params;
  int horizon = 12;  // quarters
  std::vector<std::string> shocks{"eps_rstar"};
  double target_rel_sd = 0.25;
};

struct MatchConfig {
  fs::path target;  // moments file; empty means <out>/irf_moments.csv
  std::string scheme = "sign";
  std::string shock = "PureMP";
  std::string model_shock = "eps_rstar";
  // model observable -> target variable, in matching order
  std::vector<std::pair<std::string, std::string>> observables;
  std::vector<irfmatch::FreeParam> free = irfmatch::default_free_params();
  irfmatch::OptimizerConfig optimizer;
};

struct Config {
  fs::path path;
  std::string text;  // raw file contents, hashed into manifests
  std::uint64_t seed = 1;

  fs::path events_file;
  EventColumns event_columns;
  std::optional<eventstudy::Trim> trim;

  synthetic::EventPlan plan;

  std::vector<SeriesSpec> series;
  std::optional<MonthRange> span;
  bvar::VarConfig var;
  std::string var_section;  // canonical dump of the var block, ties artifacts to it

  IdentifyConfig identify;
  ModelConfig model;
  MatchConfig match;
};

namespace detail {

inline void check_keys(const YAML::Node& node, const std::set<std::string>& allowed, const std::string& where) {
  if (!node.IsMap()) throw DataError("config: '" + where + "' must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw DataError("config: unknown key '" + key + "' in " + where);
  }
}

template <class T>
T get(const YAML::Node& node, const std::string& key, const T& fallback, const std::string& where) {
  if (!node[key]) return fallback;
  try {
    return node[key].as<T>();
  } catch (const YAML::Exception&) {
    throw DataError("config: bad value for '" + where + "." + key + "'");
  }
}

inline MonthRange parse_span(const YAML::Node& n, const std::string& where) {
  if (!n.IsSequence() || n.size() != 2) throw DataError("config: " + where + " must be [first, last] months");
  MonthRange r{parse_month(n[0].as<std::string>()), parse_month(n[1].as<std::string>())};
  if (r.size() < 1) throw DataError("config: " + where + " is empty");
  return r;
}

inline fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

}  // namespace detail

inline Config parse_config(const std::string& text, const fs::path& path = {}) {
  using detail::get;
  Config c;
  c.path = path;
  c.text = text;
  const fs::path base = path.empty() ? fs::current_path() : fs::absolute(path).parent_path();

  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw DataError("config " + path.string() + ": " + e.what());
  }
  if (!root || root.IsNull()) return c;
  detail::check_keys(root, {"seed", "events", "simulate", "var", "identify", "model", "match"}, "top level");
  c.seed = get<std::uint64_t>(root, "seed", 1, "");

  if (auto ev = root["events"]) {
    detail::check_keys(ev, {"file", "columns", "trim"}, "events");
    if (ev["file"]) c.events_file = detail::resolve(base, ev["file"].as<std::string>());
    if (auto cols = ev["columns"]) {
      detail::check_keys(cols, {"date", "d_rate", "d_stock", "ner_prefix"}, "events.columns");
      c.event_columns.date = get<std::string>(cols, "date", "date", "events.columns");
      c.event_columns.d_rate = get<std::string>(cols, "d_rate", "d_rate", "events.columns");
      c.event_columns.d_stock = get<std::string>(cols, "d_stock", "d_stock", "events.columns");
      c.event_columns.ner_prefix = get<std::string>(cols, "ner_prefix", "ner_", "events.columns");
    }
    if (auto t = ev["trim"]) {
      if (!t.IsSequence() || t.size() != 2) throw DataError("config: events.trim must be [lo, hi]");
      c.trim = eventstudy::Trim{t[0].as<double>(), t[1].as<double>()};
    }
  }

  if (auto sim = root["simulate"]) {
    detail::check_keys(sim, {"span", "cells", "stock_zero", "countries", "missing_share"}, "simulate");
    if (sim["span"]) c.plan.span = detail::parse_span(sim["span"], "simulate.span");
    if (auto cells = sim["cells"]) {
      if (!cells.IsSequence() || cells.size() != 2 || cells[0].size() != 3 || cells[1].size() != 3)
        throw DataError("config: simulate.cells must be a 2 x 3 list");
      for (int r = 0; r < 2; ++r)
        for (int k = 0; k < 3; ++k) c.plan.cells[r][k] = cells[r][k].as<int>();
    }
    c.plan.stock_zero = get<int>(sim, "stock_zero", c.plan.stock_zero, "simulate");
    c.plan.missing_share = get<double>(sim, "missing_share", c.plan.missing_share, "simulate");
    if (sim["countries"]) c.plan.countries = sim["countries"].as<std::vector<std::string>>();
  }

  if (auto var = root["var"]) {
    detail::check_keys(var, {"series", "span", "lags", "draws", "prior"}, "var");
    c.var_section = YAML::Dump(var);
    if (var["span"]) c.span = detail::parse_span(var["span"], "var.span");
    c.var.lags = get<int>(var, "lags", c.var.lags, "var");
    c.var.draws = get<int>(var, "draws", c.var.draws, "var");
    if (auto pr = var["prior"]) {
      detail::check_keys(pr, {"overall_tightness", "cross_weight", "lag_decay", "constant_looseness", "own_lag_mean"},
                         "var.prior");
      auto& p = c.var.prior;
      p.overall_tightness = get<double>(pr, "overall_tightness", p.overall_tightness, "var.prior");
      p.cross_weight = get<double>(pr, "cross_weight", p.cross_weight, "var.prior");
      p.lag_decay = get<double>(pr, "lag_decay", p.lag_decay, "var.prior");
      p.constant_looseness = get<double>(pr, "constant_looseness", p.constant_looseness, "var.prior");
      if (pr["own_lag_mean"]) p.own_lag_mean = pr["own_lag_mean"].as<std::vector<double>>();
    }
    if (auto series = var["series"]) {
      if (!series.IsSequence()) throw DataError("config: var.series must be a list");
      for (const auto& s : series) {
        detail::check_keys(s, {"name", "file", "column", "transform", "role"}, "var.series entry");
        SeriesSpec spec;
        if (!s["name"] || !s["file"]) throw DataError("config: every var.series entry needs name and file");
        spec.name = s["name"].as<std::string>();
        spec.source = detail::resolve(base, s["file"].as<std::string>());
        spec.column = get<std::string>(s, "column", spec.name, "var.series");
        spec.transform = parse_transform(get<std::string>(s, "transform", "level", "var.series"));
        spec.role = parse_role(get<std::string>(s, "role", "em_macro", "var.series"));
        if (spec.role == Role::surprise)
          throw DataError("config: series '" + spec.name + "': surprises come from the event file");
        c.series.push_back(std::move(spec));
      }
    }
  }

  if (auto id = root["identify"]) {
    detail::check_keys(id, {"rate", "stock", "max_attempts", "horizon", "bands", "cholesky_order"}, "identify");
    auto& i = c.identify;
    i.rate = get<std::string>(id, "rate", i.rate, "identify");
    i.stock = get<std::string>(id, "stock", i.stock, "identify");
    i.max_attempts = get<int>(id, "max_attempts", i.max_attempts, "identify");
    i.horizon = get<int>(id, "horizon", i.horizon, "identify");
    i.bands = get<int>(id, "bands", i.bands, "identify");
    if (id["cholesky_order"]) i.cholesky_order = id["cholesky_order"].as<std::vector<std::string>>();
  }

  if (auto m = root["model"]) {
    detail::check_keys(m, {"params", "horizon", "shocks", "target_rel_sd"}, "model");
    if (auto ps = m["params"]) {
      if (!ps.IsMap()) throw DataError("config: model.params must be a mapping");
      for (const auto& kv : ps) dsge::param_ref(c.model.params, kv.first.as<std::string>()) = kv.second.as<double>();
    }
    c.model.horizon = get<int>(m, "horizon", c.model.horizon, "model");
    if (m["shocks"]) c.model.shocks = m["shocks"].as<std::vector<std::string>>();
    c.model.target_rel_sd = get<double>(m, "target_rel_sd", c.model.target_rel_sd, "model");
  }

  if (auto mt = root["match"]) {
    detail::check_keys(mt, {"target", "scheme", "shock", "model_shock", "observables", "free", "starts", "seed",
                            "start_spread", "max_iter", "polish", "initial"},
                       "match");
    auto& m = c.match;
    if (mt["target"]) m.target = detail::resolve(base, mt["target"].as<std::string>());
    m.scheme = get<std::string>(mt, "scheme", m.scheme, "match");
    m.shock = get<std::string>(mt, "shock", m.shock, "match");
    m.model_shock = get<std::string>(mt, "model_shock", m.model_shock, "match");
    if (auto obs = mt["observables"]) {
      if (!obs.IsMap()) throw DataError("config: match.observables maps model observables to target variables");
      for (const auto& kv : obs) m.observables.emplace_back(kv.first.as<std::string>(), kv.second.as<std::string>());
    }
    if (auto fr = mt["free"]) {
      if (!fr.IsMap()) throw DataError("config: match.free maps parameter names to [lo, hi]");
      m.free.clear();
      for (const auto& kv : fr) {
        const auto b = kv.second;
        if (!b.IsSequence() || b.size() != 2) throw DataError("config: bounds of match.free entries are [lo, hi]");
        m.free.push_back({kv.first.as<std::string>(), b[0].as<double>(), b[1].as<double>()});
      }
    }
    auto& o = m.optimizer;
    o.starts = get<int>(mt, "starts", o.starts, "match");
    o.seed = get<std::uint64_t>(mt, "seed", c.seed, "match");
    o.start_spread = get<double>(mt, "start_spread", o.start_spread, "match");
    o.simplex.max_iter = get<int>(mt, "max_iter", o.simplex.max_iter, "match");
    o.polish = get<bool>(mt, "polish", o.polish, "match");
    if (auto init = mt["initial"]) {
      if (!init.IsMap()) throw DataError("config: match.initial maps parameter names to values");
      Eigen::VectorXd th(static_cast<Eigen::Index>(m.free.size()));
      for (std::size_t k = 0; k < m.free.size(); ++k) {
        if (!init[m.free[k].name]) throw DataError("config: match.initial lacks '" + m.free[k].name + "'");
        th[static_cast<Eigen::Index>(k)] = init[m.free[k].name].as<double>();
      }
      o.initial = th;
    }
  }
  if (c.match.observables.empty())
    for (const auto& name : irfmatch::matched_observables()) c.match.observables.emplace_back(name, name);
  c.var.seed = c.seed;
  return c;
}

inline Config load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace spillover::io
