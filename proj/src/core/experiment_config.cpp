#include "experiment_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "error.hpp"

namespace smoothrl {

std::string_view to_string(EnvironmentId id) {
  switch (id) {
    case EnvironmentId::kLqrLeft: return "lqr_left";
    case EnvironmentId::kLqrRight: return "lqr_right";
    case EnvironmentId::kSyntheticSmooth: return "synthetic_smooth";
  }
  return "?";
}

std::string_view to_string(AlgorithmId id) {
  switch (id) {
    case AlgorithmId::kLegendreLsvi: return "legendre_lsvi";
    case AlgorithmId::kMonomialLsvi: return "monomial_lsvi";
    case AlgorithmId::kLegendreEleanor: return "legendre_eleanor";
  }
  return "?";
}

std::optional<EnvironmentId> parse_environment(std::string_view name) {
  for (auto id : {EnvironmentId::kLqrLeft, EnvironmentId::kLqrRight, EnvironmentId::kSyntheticSmooth})
    if (to_string(id) == name) return id;
  return std::nullopt;
}

std::optional<AlgorithmId> parse_algorithm(std::string_view name) {
  for (auto id : {AlgorithmId::kLegendreLsvi, AlgorithmId::kMonomialLsvi, AlgorithmId::kLegendreEleanor})
    if (to_string(id) == name) return id;
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  if (environments.empty()) throw ConfigError("config: at least one environment is required");
  if (algorithms.empty()) throw ConfigError("config: at least one algorithm is required");
  if (episodes < 1) throw ConfigError("config: episodes must be at least 1");
  if (seeds.empty()) throw ConfigError("config: seeds must be non-empty");
  if (std::set<std::int64_t>(seeds.begin(), seeds.end()).size() != seeds.size())
    throw ConfigError("config: seeds must be distinct");
  for (unsigned d : degrees)
    if (d < 1) throw ConfigError("config: explicit degrees must be at least 1");
  if (!(c_beta >= 0.0)) throw ConfigError("config: c_beta must be non-negative");
  if (!(lambda > 0.0)) throw ConfigError("config: lambda must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("config: delta must lie in (0, 1)");
  if (action_points < 1) throw ConfigError("config: action_grid must be at least 1");
  if (!(eleanor_base > 1.0)) throw ConfigError("config: eleanor_c must exceed 1");
  if (!(eleanor_slack >= 0.0)) throw ConfigError("config: eleanor_slack must be non-negative");
  if (!(noise_std >= 0.0) || !(reward_noise_std >= 0.0)) throw ConfigError("config: noise levels must be non-negative");
  if (output_dir.empty()) throw ConfigError("config: output_dir must be non-empty");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = value.find(',');
    const auto item = trim(value.substr(0, comma));
    if (item.empty()) throw ConfigError("config: empty list item in '" + std::string(value) + "'");
    out.push_back(item);
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  return out;
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw ConfigError("config: invalid value '" + std::string(text) + "' for key '" + std::string(key) + "'");
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("config: invalid boolean '" + std::string(text) + "' for key '" + std::string(key) + "'");
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view text) {
  std::map<std::string, std::string, std::less<>> entries;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config: line " + std::to_string(line_no) + " is not of the form key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty() || value.empty())
      throw ConfigError("config: line " + std::to_string(line_no) + " has an empty key or value");
    if (!entries.emplace(key, value).second) throw ConfigError("config: duplicate key '" + key + "'");
  }

  ExperimentConfig cfg;
  for (const auto& [key, value] : entries) {
    if (key == "environment") {
      for (auto item : split_list(value)) {
        const auto id = parse_environment(item);
        if (!id) throw ConfigError("config: unknown environment '" + std::string(item) + "'");
        cfg.environments.push_back(*id);
      }
    } else if (key == "algorithm") {
      for (auto item : split_list(value)) {
        const auto id = parse_algorithm(item);
        if (!id) throw ConfigError("config: unknown algorithm '" + std::string(item) + "'");
        cfg.algorithms.push_back(*id);
      }
    } else if (key == "degree") {
      if (value != "auto")
        for (auto item : split_list(value)) cfg.degrees.push_back(parse_number<unsigned>(key, item));
      if (value != "auto" && cfg.degrees.empty()) throw ConfigError("config: degree list is empty");
    } else if (key == "nu") {
      cfg.smoothness = parse_number<unsigned>(key, value);
    } else if (key == "episodes") {
      cfg.episodes = parse_number<std::size_t>(key, value);
    } else if (key == "seeds") {
      for (auto item : split_list(value)) cfg.seeds.push_back(parse_number<std::int64_t>(key, item));
    } else if (key == "master_seed") {
      cfg.master_seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "c_beta") {
      cfg.c_beta = parse_number<double>(key, value);
    } else if (key == "lambda") {
      cfg.lambda = parse_number<double>(key, value);
    } else if (key == "delta") {
      cfg.delta = parse_number<double>(key, value);
    } else if (key == "action_grid") {
      cfg.action_points = parse_number<std::size_t>(key, value);
    } else if (key == "eleanor_budget") {
      cfg.eleanor_budget = parse_number<std::size_t>(key, value);
    } else if (key == "eleanor_c") {
      cfg.eleanor_base = parse_number<double>(key, value);
    } else if (key == "eleanor_slack") {
      cfg.eleanor_slack = parse_number<double>(key, value);
    } else if (key == "noise_std") {
      cfg.noise_std = parse_number<double>(key, value);
    } else if (key == "reward_noise_std") {
      cfg.reward_noise_std = parse_number<double>(key, value);
    } else if (key == "horizon") {
      cfg.horizon = parse_number<std::size_t>(key, value);
    } else if (key == "smoothing_window") {
      cfg.smoothing_window = parse_number<std::size_t>(key, value);
    } else if (key == "regret") {
      cfg.regret = parse_bool(key, value);
    } else if (key == "svg") {
      cfg.svg = parse_bool(key, value);
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str());
}

}  // namespace smoothrl
