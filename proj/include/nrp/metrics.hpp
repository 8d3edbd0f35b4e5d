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

#ifndef NRP_METRICS_HPP_
#define NRP_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nrp/bounds.hpp"
#include "nrp/error.hpp"
#include "nrp/numkit.hpp"
#include "nrp/sanitizers.hpp"

namespace nrp {

struct UtilityPrivacyScore {
  double utility = 0.0;
  double privacy = 1.0;
  std::size_t agent_id = 0;
  bool in_range = true;  // raw cosine was inside [0, 1]
};

/// u = cos(y, zero_pad(t)), p = 1 - u. With `same_quadrant` the mechanism
/// guarantees a nonnegative cosine and u is clamped into [0, 1]; otherwise
/// the raw cosine is reported and `in_range` says whether it fell in [0, 1].
/// Dimension-preserving outputs are compared without padding.
inline UtilityPrivacyScore utility(std::span<const double> y, std::span<const double> t,
                                   bool same_quadrant, std::size_t agent_id = 0) {
  const double raw =
      t.size() == y.size() ? cosine(y, t) : cosine(y, zero_pad(t, y.size()));
  UtilityPrivacyScore s;
  s.agent_id = agent_id;
  s.in_range = raw >= 0.0 && raw <= 1.0;
  s.utility = same_quadrant ? std::clamp(raw, 0.0, 1.0) : raw;
  s.privacy = 1.0 - s.utility;
  return s;
}

inline UtilityPrivacyScore utility(const DataTuple& y, const SanitizedTuple& t,
                                   bool same_quadrant) {
  return utility(y.values, t.values, same_quadrant, y.agent_id);
}

enum class BreachMode { kRelative, kAbsolute };

/// Neighborhood used by breach_count. Relative: radius = fraction * |actual_i|.
struct BreachRule {
  BreachMode mode = BreachMode::kRelative;
  double radius = 0.20;

  std::string describe() const {
    return mode == BreachMode::kRelative
               ? "relative:" + std::to_string(radius) + "*|actual|"
               : "absolute:" + std::to_string(radius);
  }
};

namespace detail {

inline void require_aligned(std::span<const Vec> a, std::span<const Vec> b) {
  if (a.empty()) fail(ErrorCode::kEmptyDataset, "metric over an empty list");
  if (a.size() != b.size()) {
    fail(ErrorCode::kDimensionMismatch, "actual and reconstructed lists differ in size");
  }
}

}  // namespace detail

inline double breach_count(std::span<const Vec> actual, std::span<const Vec> recon,
                           const BreachRule& rule) {
  detail::require_aligned(actual, recon);
  if (!(rule.radius > 0.0)) fail(ErrorCode::kInvalidArgument, "breach radius must be > 0");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double r =
        rule.mode == BreachMode::kRelative ? rule.radius * norm(actual[i]) : rule.radius;
    if (distance(recon[i], actual[i]) <= r) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(actual.size());
}

inline double breach_count(std::span<const Vec> actual, std::span<const Vec> recon,
                           double fraction = 0.20) {
  return breach_count(actual, recon, BreachRule{BreachMode::kRelative, fraction});
}

inline double displacement(std::span<const Vec> actual, std::span<const Vec> recon) {
  detail::require_aligned(actual, recon);
  CompensatedSum s;
  for (std::size_t i = 0; i < actual.size(); ++i) s.add(distance(actual[i], recon[i]));
  return s.value() / static_cast<double>(actual.size());
}

/// Indices of the k nearest points to `query` within `cloud`, skipping
/// `exclude`. Order: squared distance, then lower index.
inline std::vector<std::size_t> nearest_neighbors(std::span<const Vec> cloud,
                                                  std::span<const double> query,
                                                  std::size_t k,
                                                  std::optional<std::size_t> exclude) {
  std::vector<std::pair<double, std::size_t>> d;
  d.reserve(cloud.size());
  for (std::size_t j = 0; j < cloud.size(); ++j) {
    if (exclude && *exclude == j) continue;
    d.emplace_back(squared_distance(cloud[j], query), j);
  }
  if (d.size() < k) fail(ErrorCode::kInsufficientPoints, "fewer than k candidates");
  std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = d[i].second;
  return out;
}

enum class ResemblanceMode {
  kReconstructedCloud,  // neighbors of recon_i among the reconstructed points
  kActualCloud,         // neighbors of recon_i among the actual points
};

/// Mean |S_i intersect S'_i| / k, where S_i holds the k nearest neighbors of
/// actual_i among the actual points (i itself excluded).
inline double resemblance(std::span<const Vec> actual, std::span<const Vec> recon,
                          std::size_t k = 10,
                          ResemblanceMode mode = ResemblanceMode::kReconstructedCloud) {
  detail::require_aligned(actual, recon);
  if (k == 0 || actual.size() <= k) {
    fail(ErrorCode::kInsufficientPoints, "resemblance needs more than k points");
  }
  const std::span<const Vec> second =
      mode == ResemblanceMode::kReconstructedCloud ? recon : actual;
  std::size_t common = 0;
  std::vector<char> mark(actual.size(), 0);
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const auto s = nearest_neighbors(actual, actual[i], k, i);
    const auto s2 = nearest_neighbors(second, recon[i], k, i);
    for (std::size_t j : s) mark[j] = 1;
    for (std::size_t j : s2) common += static_cast<std::size_t>(mark[j]);
    for (std::size_t j : s) mark[j] = 0;
  }
  return static_cast<double>(common) /
         (static_cast<double>(k) * static_cast<double>(actual.size()));
}

/// Fraction of unordered pairs whose squared distance after projection lies
/// within [e^-g, e^g] times the original squared distance.
inline double distance_preservation_fraction(std::span<const Vec> points,
                                             std::span<const Vec> projected,
                                             double gamma) {
  detail::require_gamma(gamma);
  if (points.size() != projected.size()) {
    fail(ErrorCode::kDimensionMismatch, "point and projection counts differ");
  }
  if (points.size() < 2) fail(ErrorCode::kEmptyDataset, "need at least two points");
  const double lo = std::exp(-gamma);
  const double hi = std::exp(gamma);
  std::size_t kept = 0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double d = squared_distance(points[i], points[j]);
      const double q = squared_distance(projected[i], projected[j]);
      if (lo * d <= q && q <= hi * d) ++kept;
      ++pairs;
    }
  }
  return static_cast<double>(kept) / static_cast<double>(pairs);
}

/// Repetition-averaged evaluation of one mechanism/attack pairing.
struct MetricReport {
  std::string mechanism;
  std::string attack;
  std::size_t agent_count = 0;
  double epsilon = 0.0;
  std::size_t m = 0;
  double breach_count = 0.0;
  double displacement = 0.0;
  double resemblance = 0.0;
  double utility = 0.0;
  double privacy = 0.0;
  double utility_in_range = 0.0;  // fraction of raw cosines inside [0, 1]
  double fusion_gap = 0.0;        // |F(raw) - F(reconstructed)|
  double modification = 0.0;      // mean |zero_pad(T(y)) - y|
  std::string neighborhood_radius_rule;
  std::string resemblance_mode;
  std::size_t k_neighbors = 10;
  std::size_t repetitions = 0;
};

}  // namespace nrp

#endif  // NRP_METRICS_HPP_
