#pragma once

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "spillover/bvar.hpp"
#include "spillover/core/csv.hpp"
#include "spillover/identify.hpp"
#include "spillover/ingest.hpp"
#include "spillover/io/manifest.hpp"
#include "spillover/irfmatch.hpp"

namespace spillover::io {

static_assert(std::endian::native == std::endian::little, "posterior artifacts are stored little-endian");

inline constexpr const char* kPosteriorFormat = "spillover-posterior";
inline constexpr int kPosteriorVersion = 1;

struct PosteriorMeta {
  std::string var_hash;
  std::uint64_t seed = 0;
  int draws = 0;
  int lags = 0;
  int n_surprise = 0;
  std::vector<ColumnInfo> variables;
  MonthRange sample;
  int effective_observations = 0;
};

inline json to_json(const PosteriorMeta& m) {
  json vars = json::array();
  for (const auto& c : m.variables)
    vars.push_back({{"name", c.name}, {"role", to_string(c.role)}, {"transform", to_string(c.transform)}});
  return {{"format", kPosteriorFormat},
          {"version", kPosteriorVersion},
          {"var_config_sha256", m.var_hash},
          {"seed", m.seed},
          {"draws", m.draws},
          {"lags", m.lags},
          {"n_surprise", m.n_surprise},
          {"variables", vars},
          {"sample", {{"start", m.sample.first.str()}, {"end", m.sample.last.str()}}},
          {"effective_observations", m.effective_observations},
          {"layout",
           "float64 little-endian; per draw: lag coefficients N x NP column-major, constant N, sigma N x N "
           "column-major"}};
}

inline std::size_t doubles_per_draw(int N, int P) {
  return static_cast<std::size_t>(N) * static_cast<std::size_t>(N * P + 1 + N);
}

/// Writes <stem>.bin and its <stem>.json manifest; returns both paths.
inline std::pair<fs::path, fs::path> write_posterior(const fs::path& dir, const std::vector<bvar::PosteriorDraw>& draws,
                                                     const PosteriorMeta& meta, const std::string& stem = "posterior") {
  const fs::path bin = dir / (stem + ".bin"), man = dir / (stem + ".json");
  {
    std::ofstream out(bin, std::ios::binary);
    if (!out) throw DataError("cannot write '" + bin.string() + "'");
    auto put = [&](const Eigen::MatrixXd& m) {
      out.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double)));
    };
    for (const auto& d : draws) {
      put(d.lag_coef);
      put(d.constant);
      put(d.sigma);
    }
    if (!out) throw DataError("write failed for '" + bin.string() + "'");
  }
  json j = to_json(meta);
  j["file"] = bin.filename().string();
  j["sha256"] = sha256_file(bin);
  std::ofstream f(man);
  if (!f) throw DataError("cannot write '" + man.string() + "'");
  f << j.dump(2) << '\n';
  return {bin, man};
}

inline json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

/// Validates the manifest against what the caller expects, then loads the
/// draws. Every schema check happens before the binary is touched.
inline std::vector<bvar::PosteriorDraw> read_posterior(const fs::path& manifest_path, const std::string& expected_hash,
                                                       const std::vector<std::string>& expected_variables,
                                                       PosteriorMeta* meta_out = nullptr) {
  const json j = read_json(manifest_path);
  const std::string src = manifest_path.string();
  if (j.value("format", "") != kPosteriorFormat || j.value("version", 0) != kPosteriorVersion)
    throw DataError(src + ": not a version " + std::to_string(kPosteriorVersion) + " posterior manifest");
  PosteriorMeta m;
  try {
    m.var_hash = j.at("var_config_sha256").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.draws = j.at("draws").get<int>();
    m.lags = j.at("lags").get<int>();
    m.n_surprise = j.at("n_surprise").get<int>();
    for (const auto& v : j.at("variables"))
      m.variables.push_back({v.at("name").get<std::string>(), parse_role(v.at("role").get<std::string>()),
                             parse_transform(v.at("transform").get<std::string>())});
    m.sample = {parse_month(j.at("sample").at("start").get<std::string>()),
                parse_month(j.at("sample").at("end").get<std::string>())};
    m.effective_observations = j.at("effective_observations").get<int>();
  } catch (const json::exception& e) {
    throw DataError(src + ": malformed manifest (" + e.what() + ")");
  }
  if (!expected_hash.empty() && m.var_hash != expected_hash)
    throw DataError(src + ": schema mismatch: posterior was estimated under a different var configuration");
  std::vector<std::string> names;
  for (const auto& c : m.variables) names.push_back(c.name);
  if (!expected_variables.empty() && names != expected_variables) {
    std::string have, want;
    for (const auto& n : names) have += (have.empty() ? "" : ",") + n;
    for (const auto& n : expected_variables) want += (want.empty() ? "" : ",") + n;
    throw DataError(src + ": schema mismatch: artifact variables [" + have + "] vs config [" + want + "]");
  }
  const int N = static_cast<int>(m.variables.size()), P = m.lags;
  if (N < 2 || P < 1 || m.draws < 1 || m.n_surprise < 1 || m.n_surprise >= N)
    throw DataError(src + ": inconsistent dimensions in manifest");

  const fs::path bin = manifest_path.parent_path() / j.at("file").get<std::string>();
  const std::size_t per = doubles_per_draw(N, P);
  const std::uintmax_t expected_bytes = per * sizeof(double) * static_cast<std::size_t>(m.draws);
  if (!fs::exists(bin)) throw DataError("posterior file '" + bin.string() + "' is missing");
  if (fs::file_size(bin) != expected_bytes)
    throw DataError(bin.string() + ": size does not match the manifest (" + std::to_string(fs::file_size(bin)) +
                    " bytes, expected " + std::to_string(expected_bytes) + ")");
  if (sha256_file(bin) != j.value("sha256", ""))
    throw DataError(bin.string() + ": digest does not match the manifest");

  std::ifstream in(bin, std::ios::binary);
  std::vector<bvar::PosteriorDraw> draws(static_cast<std::size_t>(m.draws));
  auto get = [&](Eigen::MatrixXd& mat, Eigen::Index r, Eigen::Index c) {
    mat.resize(r, c);
    in.read(reinterpret_cast<char*>(mat.data()), static_cast<std::streamsize>(r * c * sizeof(double)));
  };
  for (auto& d : draws) {
    d.n_surprise = m.n_surprise;
    d.lags = P;
    Eigen::MatrixXd constant;
    get(d.lag_coef, N, N * P);
    get(constant, N, 1);
    d.constant = constant.col(0);
    get(d.sigma, N, N);
  }
  if (!in) throw DataError(bin.string() + ": truncated");
  if (meta_out) *meta_out = m;
  return draws;
}

inline std::string quantile_column(double p) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "q%02d", static_cast<int>(std::lround(p * 100.0)));
  return buf;
}

/// Long IRF table: scheme, shock, variable, horizon, then one column per quantile.
inline void write_irf_csv(const fs::path& path, const std::string& scheme, const identify::Bands& bands) {
  csv::Writer w(path);
  std::vector<std::string> header{"scheme", "shock", "variable", "horizon"};
  for (double p : bands.probs) header.push_back(quantile_column(p));
  w.row(header);
  const auto& q0 = bands.quantiles.front();
  for (int s = 0; s < q0.shocks(); ++s)
    for (int v = 0; v < q0.variables(); ++v)
      for (int h = 0; h < q0.horizons(); ++h) {
        std::vector<std::string> row{scheme, q0.shock_names[static_cast<std::size_t>(s)],
                                     q0.variable_names[static_cast<std::size_t>(v)], std::to_string(h)};
        for (const auto& q : bands.quantiles) row.push_back(csv::format_double(q.at(0, s, v, h)));
        w.row(row);
      }
}

/// Rows of a target-moments table: quarterly IRF mean and variance across draws.
struct MomentRow {
  std::string scheme, shock, variable;
  int quarter = 0;
  double mean = 0.0, variance = 0.0;
};

inline void write_moments(const fs::path& path, const std::vector<MomentRow>& rows) {
  csv::Writer w(path);
  w.row("scheme", "shock", "variable", "quarter", "mean", "variance");
  for (const auto& r : rows) w.row(r.scheme, r.shock, r.variable, r.quarter, r.mean, r.variance);
}

/// Quarterly means and variances across draws for every shock and variable
/// of an IRF set (horizons 0.. are months).
inline std::vector<MomentRow> quarterly_moments(const identify::IrfSet& irfs, const std::string& scheme) {
  std::vector<MomentRow> rows;
  const int nq = irfs.horizons() / 3;
  const auto D = static_cast<Eigen::Index>(irfs.draws());
  Eigen::MatrixXd q(D, nq);
  for (int s = 0; s < irfs.shocks(); ++s)
    for (int v = 0; v < irfs.variables(); ++v) {
      for (Eigen::Index d = 0; d < D; ++d) {
        Eigen::VectorXd monthly(irfs.horizons());
        for (int h = 0; h < irfs.horizons(); ++h) monthly[h] = irfs.at(static_cast<std::size_t>(d), s, v, h);
        q.row(d) = irfmatch::monthly_to_quarterly(monthly).transpose();
      }
      for (int k = 0; k < nq; ++k) {
        const Eigen::VectorXd col = q.col(k);
        const double mean = col.mean();
        const double var = D > 1 ? (col.array() - mean).square().sum() / static_cast<double>(D - 1) : 0.0;
        rows.push_back({scheme, irfs.shock_names[static_cast<std::size_t>(s)],
                        irfs.variable_names[static_cast<std::size_t>(v)], k, mean, var});
      }
    }
  return rows;
}

/// Builds a MatchTarget from a moments table. `mapping` pairs each model
/// observable with the table variable it is matched to.
inline irfmatch::MatchTarget read_target(const fs::path& path, const std::string& scheme, const std::string& shock,
                                         const std::vector<std::pair<std::string, std::string>>& mapping) {
  const auto table = csv::read_file(path);
  const std::string src = path.string();
  const auto c_scheme = table.require_column("scheme", src), c_shock = table.require_column("shock", src),
             c_var = table.require_column("variable", src), c_q = table.require_column("quarter", src),
             c_mean = table.require_column("mean", src), c_var2 = table.require_column("variance", src);

  std::map<std::string, int> col_of;
  irfmatch::MatchTarget t;
  for (const auto& [model_name, data_name] : mapping) {
    col_of[data_name] = static_cast<int>(t.variables.size());
    t.variables.push_back(model_name);
  }
  const auto nv = static_cast<Eigen::Index>(mapping.size());
  t.mean = Eigen::MatrixXd::Constant(irfmatch::kQuarters, nv, NAN);
  t.variance = Eigen::MatrixXd::Constant(irfmatch::kQuarters, nv, NAN);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row[c_scheme] != scheme || row[c_shock] != shock) continue;
    auto it = col_of.find(row[c_var]);
    if (it == col_of.end()) continue;
    const auto qv = csv::parse_double(row[c_q]);
    const auto mean = csv::parse_double(row[c_mean]);
    const auto var = csv::parse_double(row[c_var2]);
    const std::string where = src + " line " + std::to_string(table.line_numbers[r]);
    if (!qv || !mean || !var) throw DataError(where + ": malformed moment row");
    const int k = static_cast<int>(*qv);
    if (k < 0 || k >= irfmatch::kQuarters) continue;
    t.mean(k, it->second) = *mean;
    t.variance(k, it->second) = *var;
  }
  for (const auto& [model_name, data_name] : mapping) {
    const int j = col_of[data_name];
    if (!t.mean.col(j).allFinite())
      throw DataError(src + ": no complete " + std::to_string(irfmatch::kQuarters) + "-quarter response of '" +
                      data_name + "' to " + scheme + "/" + shock);
  }
  t.validate();
  return t;
}

}  // namespace spillover::io
