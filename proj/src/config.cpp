// SPDX-License-Identifier: Apache-2.0
//
// beampomdp: adaptive pilot-beam design for sparse mmWave channels
// Copyright (C) 2026 The beampomdp authors
// ------------------------------------------------------------------------

#include "beampomdp/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "beampomdp/errors.hpp"

namespace beampomdp {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (!text.empty() && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("config: cannot parse value '" + text + "' for key '" + key + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string to_string(PriorKind kind) { return kind == PriorKind::uniform ? "uniform" : "known"; }

std::string to_string(RewardKind kind) { return kind == RewardKind::mrc ? "mrc" : "path_count"; }

void ChannelConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("config: " + what); };
  if (n_tx < 1) fail("n_tx must be positive");
  if (n_rx < 1) fail("n_rx must be positive");
  if (n_paths < 1) fail("n_paths must be at least 1");
  if (n_pilots < n_paths || n_pilots > n_tx) fail("need n_paths <= n_pilots <= n_tx");
  if (n_pilots > 20) fail("n_pilots above 20 gives an unmanageable observation space");
  if (!(beta >= 0.0 && beta < 1.0)) fail("beta must lie in [0, 1)");
  if (band < 0 || band >= n_tx) fail("band must satisfy 0 <= band < n_tx");
  if (!(gain_var > 0.0)) fail("gain_var must be positive");
  if (!(noise_var > 0.0)) fail("noise_var must be positive");
  if (!std::isfinite(tx_power_db)) fail("tx_power_db must be finite");
  if (horizon < 1) fail("horizon must be positive");
  if (!(false_alarm > 0.0 && false_alarm < 1.0)) fail("false_alarm must lie in (0, 1)");
}

std::string ChannelConfig::canonical_text() const {
  std::map<std::string, std::string> kv{
      {"n_tx", std::to_string(n_tx)},
      {"n_rx", std::to_string(n_rx)},
      {"n_paths", std::to_string(n_paths)},
      {"n_pilots", std::to_string(n_pilots)},
      {"beta", format_double(beta)},
      {"band", std::to_string(band)},
      {"gain_var", format_double(gain_var)},
      {"noise_var", format_double(noise_var)},
      {"tx_power_db", format_double(tx_power_db)},
      {"horizon", std::to_string(horizon)},
      {"seed", std::to_string(seed)},
      {"prior", to_string(prior)},
      {"reward", to_string(reward)},
      {"false_alarm", format_double(false_alarm)},
  };
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::uint64_t ChannelConfig::hash() const { return fnv1a64(canonical_text()); }

ChannelConfig parse_config(std::istream& in) {
  ChannelConfig cfg;
  using Setter = std::function<void(ChannelConfig&, const std::string&, const std::string&)>;
  auto int_field = [](int ChannelConfig::*field) -> Setter {
    return [field](ChannelConfig& c, const std::string& k, const std::string& v) {
      c.*field = parse_number<int>(k, v);
    };
  };
  auto real_field = [](double ChannelConfig::*field) -> Setter {
    return [field](ChannelConfig& c, const std::string& k, const std::string& v) {
      c.*field = parse_number<double>(k, v);
    };
  };
  const std::map<std::string, Setter> setters{
      {"n_tx", int_field(&ChannelConfig::n_tx)},
      {"n_rx", int_field(&ChannelConfig::n_rx)},
      {"n_paths", int_field(&ChannelConfig::n_paths)},
      {"n_pilots", int_field(&ChannelConfig::n_pilots)},
      {"beta", real_field(&ChannelConfig::beta)},
      {"band", int_field(&ChannelConfig::band)},
      {"gain_var", real_field(&ChannelConfig::gain_var)},
      {"noise_var", real_field(&ChannelConfig::noise_var)},
      {"tx_power_db", real_field(&ChannelConfig::tx_power_db)},
      {"horizon", int_field(&ChannelConfig::horizon)},
      {"false_alarm", real_field(&ChannelConfig::false_alarm)},
      {"seed",
       [](ChannelConfig& c, const std::string& k, const std::string& v) {
         c.seed = parse_number<std::uint64_t>(k, v);
       }},
      {"prior",
       [](ChannelConfig& c, const std::string&, const std::string& v) {
         if (v == "uniform") c.prior = PriorKind::uniform;
         else if (v == "known") c.prior = PriorKind::known;
         else throw ConfigError("config: prior must be 'uniform' or 'known', got '" + v + "'");
       }},
      {"reward",
       [](ChannelConfig& c, const std::string&, const std::string& v) {
         if (v == "path_count") c.reward = RewardKind::path_count;
         else if (v == "mrc") c.reward = RewardKind::mrc;
         else throw ConfigError("config: reward must be 'path_count' or 'mrc', got '" + v + "'");
       }},
  };

  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    it->second(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

ChannelConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ChannelConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  return parse_config(in);
}

}  // namespace beampomdp
