#pragma once

#include <openssl/evp.h>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <memory>
#include <string>
#include <vector>

#include "spillover/core/parallel.hpp"
#include "spillover/error.hpp"

#ifndef SPILLOVER_VERSION
#define SPILLOVER_VERSION "0.1.0"
#endif

namespace spillover::io {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) throw Error("SHA-256 init failed");
  }
  void update(const void* data, std::size_t n) {
    if (EVP_DigestUpdate(ctx_.get(), data, n) != 1) throw Error("SHA-256 update failed");
  }
  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), md, &len) != 1) throw Error("SHA-256 final failed");
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
      out += digits[md[i] >> 4];
      out += digits[md[i] & 15];
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

inline std::string sha256(std::string_view s) {
  Sha256 h;
  h.update(s.data(), s.size());
  return h.hex();
}

inline std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  Sha256 h;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    h.update(buf, static_cast<std::size_t>(in.gcount()));
  }
  return h.hex();
}

inline std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Provenance record written next to the outputs of every subcommand.
class RunManifest {
 public:
  RunManifest(std::string command, std::string config_hash, std::uint64_t seed)
      : command_(std::move(command)), config_hash_(std::move(config_hash)), seed_(seed), started_(utc_now()) {}

  void input(const fs::path& p) { inputs_.push_back(p); }
  void output(const fs::path& p) { outputs_.push_back(p); }
  json& extra() { return extra_; }
  std::string file_name() const { return "manifest_" + command_ + ".json"; }

  fs::path write(const fs::path& out_dir) const {
    json j;
    j["command"] = command_;
    j["config_sha256"] = config_hash_;
    j["seed"] = seed_;
    j["versions"] = {{"spillover", SPILLOVER_VERSION},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)},
                     {"boost", BOOST_LIB_VERSION},
                     {"compiler", __VERSION__}};
    j["threads"] = worker_count();
    j["started"] = started_;
    j["finished"] = utc_now();
    json in = json::array(), out = json::array();
    for (const auto& p : inputs_) in.push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
    for (const auto& p : outputs_) out.push_back({{"path", p.filename().string()}, {"sha256", sha256_file(p)}});
    j["inputs"] = in;
    j["outputs"] = out;
    if (!extra_.is_null()) j["details"] = extra_;
    const fs::path path = out_dir / file_name();
    std::ofstream f(path);
    if (!f) throw DataError("cannot write '" + path.string() + "'");
    f << j.dump(2) << '\n';
    return path;
  }

 private:
  std::string command_, config_hash_;
  std::uint64_t seed_;
  std::string started_;
  std::vector<fs::path> inputs_, outputs_;
  json extra_;
};

}  // namespace spillover::io
