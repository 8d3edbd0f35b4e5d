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

// Tabular ingestion. CSV dialect: comma separated, UTF-8, header row first,
// '.' as decimal point, no quoting. A schema declares each column as
// numeric, binary (mapped through a value table) or dropped.

#ifndef NRP_DATAIO_HPP_
#define NRP_DATAIO_HPP_

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "nrp/error.hpp"
#include "nrp/numkit.hpp"
#include "nrp/rng.hpp"
#include "nrp/sanitizers.hpp"

namespace nrp {

enum class ColumnKind { kNumeric, kBinary, kDrop };

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;
  bool is_private = false;
  std::map<std::string, double> value_map;  // binary columns only
};

struct DatasetSchema {
  std::string name;
  std::vector<ColumnSpec> columns;

  std::vector<std::string> retained_names() const {
    std::vector<std::string> out;
    for (const auto& c : columns) {
      if (c.kind != ColumnKind::kDrop) out.push_back(c.name);
    }
    return out;
  }

  /// Positions of private columns among the retained ones.
  std::vector<std::size_t> private_indices() const {
    std::vector<std::size_t> out;
    std::size_t k = 0;
    for (const auto& c : columns) {
      if (c.kind == ColumnKind::kDrop) continue;
      if (c.is_private) out.push_back(k);
      ++k;
    }
    return out;
  }
};

inline std::string_view column_kind_name(ColumnKind k) {
  switch (k) {
    case ColumnKind::kNumeric: return "numeric";
    case ColumnKind::kBinary: return "binary-categorical";
    case ColumnKind::kDrop: return "drop";
  }
  return "unknown";
}

/// Schema document: {"name": ..., "columns": [{"name", "kind", "private",
/// "value_map"}]}.
inline DatasetSchema schema_from_json(const nlohmann::json& j) {
  auto bad = [](const std::string& why) { fail(ErrorCode::kSchemaMismatch, why); };
  if (!j.is_object() || !j.contains("columns") || !j["columns"].is_array()) {
    bad("schema needs a 'columns' array");
  }
  DatasetSchema s;
  s.name = j.value("name", std::string("dataset"));
  for (const auto& c : j["columns"]) {
    if (!c.is_object() || !c.contains("name") || !c["name"].is_string()) {
      bad("every column needs a string 'name'");
    }
    ColumnSpec spec;
    spec.name = c["name"].get<std::string>();
    const std::string kind = c.value("kind", std::string("numeric"));
    if (kind == "numeric") {
      spec.kind = ColumnKind::kNumeric;
    } else if (kind == "binary-categorical" || kind == "binary") {
      spec.kind = ColumnKind::kBinary;
    } else if (kind == "drop") {
      spec.kind = ColumnKind::kDrop;
    } else {
      bad("column '" + spec.name + "' has unknown kind '" + kind + "'");
    }
    if (c.contains("private")) {
      if (!c["private"].is_boolean()) bad("'private' must be boolean");
      spec.is_private = c["private"].get<bool>();
    }
    if (spec.kind == ColumnKind::kBinary) {
      if (!c.contains("value_map") || !c["value_map"].is_object() ||
          c["value_map"].size() != 2) {
        bad("binary column '" + spec.name + "' needs a two-entry value_map");
      }
      for (const auto& [key, value] : c["value_map"].items()) {
        if (!value.is_number()) bad("value_map entries must be numbers");
        spec.value_map[key] = value.get<double>();
      }
    }
    if (spec.kind == ColumnKind::kDrop && spec.is_private) {
      bad("dropped column '" + spec.name + "' cannot be private");
    }
    s.columns.push_back(std::move(spec));
  }
  if (s.retained_names().empty()) bad("schema retains no columns");
  return s;
}

inline nlohmann::json schema_to_json(const DatasetSchema& s) {
  nlohmann::json cols = nlohmann::json::array();
  for (const auto& c : s.columns) {
    nlohmann::json col{{"name", c.name},
                       {"kind", std::string(column_kind_name(c.kind))},
                       {"private", c.is_private}};
    if (c.kind == ColumnKind::kBinary) col["value_map"] = c.value_map;
    cols.push_back(std::move(col));
  }
  return {{"name", s.name}, {"columns", std::move(cols)}};
}

inline DatasetSchema load_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kFileNotFound, "cannot open schema " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kSchemaMismatch, "schema " + path + ": " + e.what());
  }
  return schema_from_json(j);
}

struct LoadOptions {
  bool shift_negative = true;  // per-column shift so every value is >= 0
};

struct LoadedDataset {
  std::vector<DataTuple> tuples;
  std::vector<std::string> column_names;  // retained, in schema order
  Vec column_shift;                       // added to each retained column
};

namespace detail {

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace detail

/// Parses CSV text. Rows are numbered from 1 with the header as row 1; row k
/// of the file (k >= 2) becomes tuple k - 2 with agent_id k - 2.
inline LoadedDataset parse_csv(std::istream& in, const DatasetSchema& schema,
                               const LoadOptions& options = {}) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::kSchemaMismatch, "missing header row");
  std::vector<std::string> header;
  for (auto cell : detail::split_csv_line(line)) header.emplace_back(detail::trim(cell));
  if (!header.empty() && header.front().rfind("\xEF\xBB\xBF", 0) == 0) {
    header.front().erase(0, 3);
  }
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!position.emplace(header[i], i).second) {
      fail(ErrorCode::kSchemaMismatch, "duplicate header column '" + header[i] + "'");
    }
  }
  for (const auto& c : schema.columns) {
    if (!position.count(c.name)) {
      fail(ErrorCode::kSchemaMismatch, "declared column '" + c.name + "' not in header");
    }
  }
  if (header.size() != schema.columns.size()) {
    for (const auto& h : header) {
      const bool declared = std::any_of(schema.columns.begin(), schema.columns.end(),
                                        [&](const ColumnSpec& c) { return c.name == h; });
      if (!declared) fail(ErrorCode::kSchemaMismatch, "undeclared column '" + h + "'");
    }
  }

  LoadedDataset out;
  out.column_names = schema.retained_names();
  const auto priv = schema.private_indices();
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != header.size()) {
      fail(ErrorCode::kParseError, "row " + std::to_string(row) + ": expected " +
                                       std::to_string(header.size()) + " cells, got " +
                                       std::to_string(cells.size()));
    }
    DataTuple t;
    t.agent_id = out.tuples.size();
    t.private_indices = priv;
    t.values.reserve(out.column_names.size());
    for (const auto& c : schema.columns) {
      if (c.kind == ColumnKind::kDrop) continue;
      const std::string_view cell = detail::trim(cells[position.at(c.name)]);
      if (c.kind == ColumnKind::kBinary) {
        const auto it = c.value_map.find(std::string(cell));
        if (it == c.value_map.end()) {
          throw ParseError(row, c.name, "value '" + std::string(cell) + "' not in value_map");
        }
        t.values.push_back(it->second);
      } else {
        double v = 0.0;
        if (!detail::parse_double(cell, v)) {
          throw ParseError(row, c.name, "not a finite number: '" + std::string(cell) + "'");
        }
        t.values.push_back(v);
      }
    }
    out.tuples.push_back(std::move(t));
  }

  out.column_shift.assign(out.column_names.size(), 0.0);
  if (options.shift_negative) {
    for (std::size_t j = 0; j < out.column_names.size(); ++j) {
      double lo = 0.0;
      for (const auto& t : out.tuples) lo = std::min(lo, t.values[j]);
      if (lo < 0.0) {
        out.column_shift[j] = -lo;
        for (auto& t : out.tuples) t.values[j] -= lo;
      }
    }
  }
  return out;
}

inline LoadedDataset load_csv(const std::string& path, const DatasetSchema& schema,
                              const LoadOptions& options = {}) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kFileNotFound, "cannot open " + path);
  return parse_csv(in, schema, options);
}

/// 17 significant digits, which round-trips every double exactly.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_csv(std::ostream& out, const std::vector<std::string>& names,
                      const std::vector<DataTuple>& tuples) {
  for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
  out << '\n';
  for (const auto& t : tuples) {
    if (t.values.size() != names.size()) {
      fail(ErrorCode::kDimensionMismatch, "tuple width differs from header");
    }
    for (std::size_t j = 0; j < t.values.size(); ++j) {
      out << (j ? "," : "") << format_double(t.values[j]);
    }
    out << '\n';
  }
}

inline void write_csv(const std::string& path, const std::vector<std::string>& names,
                      const std::vector<DataTuple>& tuples) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path);
  write_csv(out, names, tuples);
  if (!out) fail(ErrorCode::kIoError, "write failed for " + path);
}

struct DatasetSummary {
  std::size_t count = 0;
  Vec min;
  Vec max;
  Vec mean;
  double alpha = 0.0;  // largest tuple norm
};

inline DatasetSummary summarize(std::span<const DataTuple> tuples) {
  if (tuples.empty()) fail(ErrorCode::kEmptyDataset, "summarize of empty dataset");
  const std::size_t n = tuples.front().size();
  DatasetSummary s;
  s.count = tuples.size();
  s.min.assign(n, std::numeric_limits<double>::infinity());
  s.max.assign(n, -std::numeric_limits<double>::infinity());
  std::vector<CompensatedSum> sums(n);
  for (const auto& t : tuples) {
    if (t.size() != n) fail(ErrorCode::kDimensionMismatch, "tuples differ in width");
    for (std::size_t j = 0; j < n; ++j) {
      s.min[j] = std::min(s.min[j], t.values[j]);
      s.max[j] = std::max(s.max[j], t.values[j]);
      sums[j].add(t.values[j]);
    }
    s.alpha = std::max(s.alpha, norm(t.values));
  }
  s.mean.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    s.mean[j] = sums[j].value() / static_cast<double>(tuples.size());
  }
  return s;
}

struct Lookalike {
  DatasetSchema schema;
  std::string csv;
};

/// Synthetic stand-in for a hospital admissions table: 50 retained columns
/// (6 binary, 44 numeric, 12 of them private) plus two free-text columns that
/// the schema drops. Values are plausible in range only; no correlations
/// beyond a shared severity factor are modelled.
inline Lookalike generate_lookalike(std::size_t rows, Rng& rng) {
  Lookalike out;
  auto& s = out.schema;
  s.name = "hospital-lookalike";
  s.columns.push_back({"patient_ref", ColumnKind::kDrop, false, {}});
  s.columns.push_back({"age", ColumnKind::kNumeric, true, {}});
  s.columns.push_back({"sex", ColumnKind::kBinary, true, {{"F", 1.0}, {"M", 0.0}}});
  s.columns.push_back({"length_of_stay", ColumnKind::kNumeric, true, {}});
  s.columns.push_back({"weight_kg", ColumnKind::kNumeric, true, {}});
  s.columns.push_back({"height_cm", ColumnKind::kNumeric, true, {}});
  s.columns.push_back({"smoker", ColumnKind::kBinary, true, {{"yes", 1.0}, {"no", 0.0}}});
  s.columns.push_back({"diabetic", ColumnKind::kBinary, true, {{"yes", 1.0}, {"no", 0.0}}});
  s.columns.push_back({"prior_admissions", ColumnKind::kNumeric, true, {}});
  s.columns.push_back({"insured", ColumnKind::kBinary, true, {{"yes", 1.0}, {"no", 0.0}}});
  s.columns.push_back({"postcode_band", ColumnKind::kNumeric, true, {}});
  s.columns.push_back({"income_band", ColumnKind::kNumeric, true, {}});
  s.columns.push_back({"dependents", ColumnKind::kNumeric, true, {}});
  s.columns.push_back({"ward_note", ColumnKind::kDrop, false, {}});
  s.columns.push_back({"icu", ColumnKind::kBinary, false, {{"yes", 1.0}, {"no", 0.0}}});
  s.columns.push_back({"readmitted", ColumnKind::kBinary, false, {{"yes", 1.0}, {"no", 0.0}}});
  for (int k = 1; k <= 36; ++k) {
    char name[16];
    std::snprintf(name, sizeof(name), "lab_%02d", k);
    s.columns.push_back({name, ColumnKind::kNumeric, false, {}});
  }

  std::ostringstream csv;
  for (std::size_t j = 0; j < s.columns.size(); ++j) csv << (j ? "," : "") << s.columns[j].name;
  csv << '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    const double severity = rng.gaussian();
    auto yes_no = [&](double p) { return rng.uniform() < p ? "yes" : "no"; };
    csv << "P" << r;
    csv << ',' << format_double(std::round(std::clamp(55.0 + 18.0 * rng.gaussian(), 0.0, 100.0)));
    csv << ',' << (rng.uniform() < 0.5 ? "F" : "M");
    csv << ',' << format_double(std::max(1.0, std::round(5.0 + 3.0 * severity + 2.0 * rng.gaussian())));
    csv << ',' << format_double(std::round(75.0 + 15.0 * rng.gaussian()));
    csv << ',' << format_double(std::round(170.0 + 10.0 * rng.gaussian()));
    csv << ',' << yes_no(0.2);
    csv << ',' << yes_no(0.1 + 0.05 * std::max(0.0, severity));
    csv << ',' << format_double(std::floor(-std::log(rng.uniform_open()) * 1.5));
    csv << ',' << yes_no(0.85);
    csv << ',' << format_double(std::floor(rng.uniform(1.0, 11.0)));
    csv << ',' << format_double(std::floor(rng.uniform(1.0, 6.0)));
    csv << ',' << format_double(std::floor(rng.uniform(0.0, 4.0)));
    csv << ",note-" << (r % 7);
    csv << ',' << yes_no(0.05 + 0.1 * std::max(0.0, severity));
    csv << ',' << yes_no(0.15);
    for (int k = 0; k < 36; ++k) {
      // Lab values centered near zero so some columns need the load shift.
      csv << ',' << format_double(0.5 * severity + rng.gaussian());
    }
    csv << '\n';
  }
  out.csv = csv.str();
  return out;
}

}  // namespace nrp

#endif  // NRP_DATAIO_HPP_
