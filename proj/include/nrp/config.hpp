// Copyright 2026 The NRP Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment configuration files: one flat JSON object whose keys mirror
// ExperimentConfig. Precedence, lowest to highest: built-in defaults, the
// file, NRP_<KEY> environment variables, command-line flags.

#ifndef NRP_CONFIG_HPP_
#define NRP_CONFIG_HPP_

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "nrp/error.hpp"
#include "nrp/simulation.hpp"

namespace nrp {

/// Every key accepted in a config file. Sweep keys are only read by `sweep`.
inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "agent_count",     "observations_per_agent", "n",
      "q",               "m",                      "private_count",
      "epsilon",         "gamma",                  "cell_side",
      "noise_sigma",     "mechanism",              "adversary",
      "entry_distribution", "repetitions",         "master_seed",
      "radius_fraction", "breach_mode",            "absolute_radius",
      "k_neighbors",     "resemblance_mode",       "private_only_metrics",
      "asup_noise_scale", "inverse_draws",         "normalize",
      "threads",         "dataset_csv",            "dataset_schema",
      "sweep_agents",    "sweep_mechanisms",       "sweep_epsilon",
      "sweep_m",         "description"};
  return keys;
}

namespace detail {

[[noreturn]] inline void config_error(const std::string& key, const std::string& why) {
  fail(ErrorCode::kConfigInvalid, "key '" + key + "': " + why);
}

inline std::size_t get_count(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    config_error(key, "expected a nonnegative integer");
  }
  return v.get<std::size_t>();
}

inline double get_real(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) config_error(key, "expected a number");
  return v.get<double>();
}

inline std::string get_text(const nlohmann::json& v, const std::string& key) {
  if (!v.is_string()) config_error(key, "expected a string");
  return v.get<std::string>();
}

inline bool get_flag(const nlohmann::json& v, const std::string& key) {
  if (!v.is_boolean()) config_error(key, "expected true or false");
  return v.get<bool>();
}

}  // namespace detail

/// Applies the keys present in `j` on top of `cfg`. Unknown keys are errors.
inline void apply_config(const nlohmann::json& j, ExperimentConfig& cfg,
                         SweepSpec* sweep = nullptr) {
  using namespace detail;
  if (!j.is_object()) fail(ErrorCode::kConfigInvalid, "config must be a JSON object");
  const auto& keys = config_keys();
  for (const auto& [key, v] : j.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      config_error(key, "unknown key");
    }
    if (key == "agent_count") cfg.agent_count = get_count(v, key);
    else if (key == "observations_per_agent") cfg.observations_per_agent = get_count(v, key);
    else if (key == "n") cfg.n = get_count(v, key);
    else if (key == "q") cfg.q = get_count(v, key);
    else if (key == "m") cfg.m = get_count(v, key);
    else if (key == "private_count") cfg.private_count = get_count(v, key);
    else if (key == "epsilon") cfg.epsilon = get_real(v, key);
    else if (key == "gamma") cfg.gamma = get_real(v, key);
    else if (key == "cell_side") cfg.cell_side = get_real(v, key);
    else if (key == "noise_sigma") cfg.noise_sigma = get_real(v, key);
    else if (key == "mechanism") {
      const auto m = parse_mechanism(get_text(v, key));
      if (!m) config_error(key, "unknown mechanism");
      cfg.mechanism = *m;
    } else if (key == "adversary") {
      const auto a = parse_attack(get_text(v, key));
      if (!a) config_error(key, "unknown adversary");
      cfg.adversary = *a;
    } else if (key == "entry_distribution") {
      const auto d = parse_distribution(get_text(v, key));
      if (!d) config_error(key, "unknown distribution");
      cfg.entry_distribution = *d;
    } else if (key == "repetitions") cfg.repetitions = get_count(v, key);
    else if (key == "master_seed") {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        config_error(key, "expected a nonnegative integer");
      }
      cfg.master_seed = v.get<std::uint64_t>();
    } else if (key == "radius_fraction") {
      cfg.breach.mode = BreachMode::kRelative;
      cfg.breach.radius = get_real(v, key);
    } else if (key == "breach_mode") {
      const std::string s = get_text(v, key);
      if (s == "relative") cfg.breach.mode = BreachMode::kRelative;
      else if (s == "absolute") cfg.breach.mode = BreachMode::kAbsolute;
      else config_error(key, "expected 'relative' or 'absolute'");
    } else if (key == "absolute_radius") {
      cfg.breach.mode = BreachMode::kAbsolute;
      cfg.breach.radius = get_real(v, key);
    } else if (key == "k_neighbors") cfg.k_neighbors = get_count(v, key);
    else if (key == "resemblance_mode") {
      const std::string s = get_text(v, key);
      if (s == "reconstructed-cloud") cfg.resemblance_mode = ResemblanceMode::kReconstructedCloud;
      else if (s == "actual-cloud") cfg.resemblance_mode = ResemblanceMode::kActualCloud;
      else config_error(key, "expected 'reconstructed-cloud' or 'actual-cloud'");
    } else if (key == "private_only_metrics") cfg.private_only_metrics = get_flag(v, key);
    else if (key == "asup_noise_scale") cfg.asup_noise_scale = get_real(v, key);
    else if (key == "inverse_draws") cfg.inverse_draws = get_count(v, key);
    else if (key == "normalize") cfg.normalize = get_flag(v, key);
    else if (key == "threads") cfg.threads = get_count(v, key);
    else if (key == "dataset_csv") cfg.dataset_csv = get_text(v, key);
    else if (key == "dataset_schema") cfg.dataset_schema = get_text(v, key);
    else if (key == "description") get_text(v, key);
    else if (key.rfind("sweep_", 0) == 0) {
      if (!v.is_array()) config_error(key, "expected an array");
      if (!sweep) continue;
      if (key == "sweep_agents") {
        sweep->agent_counts.clear();
        for (const auto& e : v) sweep->agent_counts.push_back(get_count(e, key));
      } else if (key == "sweep_mechanisms") {
        sweep->mechanisms.clear();
        for (const auto& e : v) {
          const auto m = parse_mechanism(get_text(e, key));
          if (!m) config_error(key, "unknown mechanism");
          sweep->mechanisms.push_back(*m);
        }
      } else if (key == "sweep_epsilon") {
        sweep->epsilons.clear();
        for (const auto& e : v) sweep->epsilons.push_back(get_real(e, key));
      } else if (key == "sweep_m") {
        sweep->dims.clear();
        for (const auto& e : v) sweep->dims.push_back(get_count(e, key));
      }
    }
  }
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kFileNotFound, "cannot open config " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kConfigInvalid, "config " + path + " is not valid JSON: " + e.what());
  }
}

/// Looks up NRP_<KEY> (key upper-cased) for every config key. Values are
/// parsed as JSON, falling back to a plain string.
inline nlohmann::json environment_overrides(
    const std::function<const char*(const char*)>& getenv_fn = [](const char* k) {
      return std::getenv(k);
    }) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& key : config_keys()) {
    std::string var = "NRP_";
    for (char c : key) var += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    const char* raw = getenv_fn(var.c_str());
    if (!raw) continue;
    try {
      out[key] = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::exception&) {
      out[key] = std::string(raw);
    }
  }
  return out;
}

/// Serializes the effective configuration (for manifests and digests).
inline nlohmann::json config_to_json(const ExperimentConfig& c) {
  return {
      {"agent_count", c.agent_count},
      {"observations_per_agent", c.observations_per_agent},
      {"n", c.n},
      {"q", c.q},
      {"m", c.m},
      {"private_count", c.private_count},
      {"epsilon", c.epsilon},
      {"gamma", c.gamma},
      {"cell_side", c.cell_side},
      {"noise_sigma", c.noise_sigma},
      {"mechanism", std::string(mechanism_name(c.mechanism))},
      {"adversary", std::string(attack_name(c.adversary))},
      {"entry_distribution", std::string(distribution_name(c.entry_distribution))},
      {"repetitions", c.repetitions},
      {"master_seed", c.master_seed},
      {"breach_mode", c.breach.mode == BreachMode::kRelative ? "relative" : "absolute"},
      {c.breach.mode == BreachMode::kRelative ? "radius_fraction" : "absolute_radius",
       c.breach.radius},
      {"k_neighbors", c.k_neighbors},
      {"resemblance_mode", c.resemblance_mode == ResemblanceMode::kReconstructedCloud
                               ? "reconstructed-cloud"
                               : "actual-cloud"},
      {"private_only_metrics", c.private_only_metrics},
      {"asup_noise_scale", c.asup_noise_scale},
      {"inverse_draws", c.inverse_draws},
      {"normalize", c.normalize},
      {"dataset_csv", c.dataset_csv},
      {"dataset_schema", c.dataset_schema},
  };
}

}  // namespace nrp

#endif  // NRP_CONFIG_HPP_
