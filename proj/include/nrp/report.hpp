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

// Result files. A results CSV starts with "# manifest=<digest>" and then a
// fixed header; a manifest.json next to it records the configuration, the
// digest, timestamps and versions. Result files hold no timestamps, so equal
// configurations give byte-identical results.

#ifndef NRP_REPORT_HPP_
#define NRP_REPORT_HPP_

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "nrp/dataio.hpp"
#include "nrp/error.hpp"
#include "nrp/metrics.hpp"
#include "nrp/rng.hpp"

namespace nrp {

inline constexpr std::string_view kVersion = "1.0.0";

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Digest of a command and its effective configuration.
inline std::string config_digest(std::string_view command, const nlohmann::json& config) {
  return hex64(fnv1a(std::string(command) + "\n" + std::string(kVersion) + "\n" +
                     config.dump()));
}

inline const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> cols{
      "mechanism",   "N",           "epsilon",    "m",
      "breach",      "displacement", "resemblance", "utility",
      "privacy",     "attack",      "utility_in_range", "fusion_gap",
      "modification", "repetitions"};
  return cols;
}

inline void write_results_csv(std::ostream& out, const std::string& digest,
                              const std::vector<MetricReport>& rows) {
  out << "# manifest=" << digest << '\n';
  const auto& cols = result_columns();
  for (std::size_t j = 0; j < cols.size(); ++j) out << (j ? "," : "") << cols[j];
  out << '\n';
  for (const auto& r : rows) {
    out << r.mechanism << ',' << r.agent_count << ',' << format_double(r.epsilon) << ','
        << r.m << ',' << format_double(r.breach_count) << ','
        << format_double(r.displacement) << ',' << format_double(r.resemblance) << ','
        << format_double(r.utility) << ',' << format_double(r.privacy) << ',' << r.attack
        << ',' << format_double(r.utility_in_range) << ','
        << format_double(r.fusion_gap) << ',' << format_double(r.modification) << ','
        << r.repetitions << '\n';
  }
}

/// Reads back the numeric columns of a results CSV written above.
inline std::vector<MetricReport> read_results_csv(std::istream& in) {
  std::string line;
  std::vector<MetricReport> rows;
  bool header_seen = false;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != result_columns().size()) {
      fail(ErrorCode::kParseError, "results row " + std::to_string(row) + " has " +
                                       std::to_string(cells.size()) + " cells");
    }
    auto num = [&](std::size_t k) {
      double v = 0.0;
      const std::string s(cells[k]);
      if (s == "nan" || s == "-nan") return std::nan("");
      if (!detail::parse_double(cells[k], v)) {
        throw ParseError(row, result_columns()[k], "not a number");
      }
      return v;
    };
    MetricReport r;
    r.mechanism = std::string(cells[0]);
    r.agent_count = static_cast<std::size_t>(num(1));
    r.epsilon = num(2);
    r.m = static_cast<std::size_t>(num(3));
    r.breach_count = num(4);
    r.displacement = num(5);
    r.resemblance = num(6);
    r.utility = num(7);
    r.privacy = num(8);
    r.attack = std::string(cells[9]);
    r.utility_in_range = num(10);
    r.fusion_gap = num(11);
    r.modification = num(12);
    r.repetitions = static_cast<std::size_t>(num(13));
    rows.push_back(std::move(r));
  }
  return rows;
}

inline nlohmann::json report_to_json(const MetricReport& r) {
  auto num = [](double v) -> nlohmann::json {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
  };
  return {{"mechanism", r.mechanism},
          {"attack", r.attack},
          {"N", r.agent_count},
          {"epsilon", r.epsilon},
          {"m", r.m},
          {"breach_count", num(r.breach_count)},
          {"displacement", num(r.displacement)},
          {"resemblance", num(r.resemblance)},
          {"utility", num(r.utility)},
          {"privacy", num(r.privacy)},
          {"utility_in_range", num(r.utility_in_range)},
          {"fusion_gap", num(r.fusion_gap)},
          {"modification", num(r.modification)},
          {"neighborhood_radius_rule", r.neighborhood_radius_rule},
          {"resemblance_mode", r.resemblance_mode},
          {"k_neighbors", r.k_neighbors},
          {"repetitions", r.repetitions}};
}

inline std::string utc_timestamp(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::string digest;
  std::chrono::system_clock::time_point started;
  std::chrono::system_clock::time_point finished;
  std::vector<std::string> outputs;

  nlohmann::json to_json() const {
    return {{"command", command},
            {"config_digest", digest},
            {"config", config},
            {"started_at", utc_timestamp(started)},
            {"finished_at", utc_timestamp(finished)},
            {"versions",
             {{"nrp", std::string(kVersion)},
              {"rng", std::string(Rng::kAlgorithm)},
              {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_PATCH)}}},
            {"outputs", outputs}};
  }
};

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorCode::kIoError, "write failed for " + path);
}

}  // namespace nrp

#endif  // NRP_REPORT_HPP_
