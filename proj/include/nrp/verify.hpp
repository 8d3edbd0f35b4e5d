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

// Empirical checks of the distance-preservation bounds. This path is kept
// apart from the production sanitizers: projections here use the unit-
// variance convention the probability bounds assume (orthonormal projections
// scaled by sqrt(n/m), centered bounded entries scaled by 1/sqrt(m var)),
// whereas production NRP rescales to the Frobenius budget.

#ifndef NRP_VERIFY_HPP_
#define NRP_VERIFY_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "nrp/bounds.hpp"
#include "nrp/error.hpp"
#include "nrp/metrics.hpp"
#include "nrp/numkit.hpp"
#include "nrp/rng.hpp"
#include "nrp/sanitizers.hpp"

namespace nrp {

/// Coordinates Q^T p of every point in the Q factor of a Gaussian n x m
/// matrix G = Q R, computed as L^{-1} G^T p with G^T G = L L^T (R = L^T).
/// This avoids forming Q, which dominates the cost at the dimensions the
/// distance bound asks for.
inline std::vector<Vec> orthonormal_coordinates(std::span<const Vec> points, std::size_t m,
                                                Rng& rng) {
  const std::size_t n = points.front().size();
  detail::require_output_dim(n, m);
  for (int attempt = 0; attempt < detail::kMaxResamples; ++attempt) {
    Mat g(n, m);
    for (double& x : g.values()) x = rng.gaussian();
    const auto chol = Cholesky::factor(gram(g));
    if (!chol) continue;
    std::vector<Vec> out;
    out.reserve(points.size());
    for (const Vec& p : points) out.push_back(chol->solve_lower(matvec_transposed(g, p)));
    return out;
  }
  fail(ErrorCode::kRankDeficient, "Gaussian sample stayed rank deficient");
}

/// Orthonormal projection to m dimensions, scaled by sqrt(n/m) so squared
/// distances are preserved in expectation.
inline std::vector<Vec> project_orthonormal_normalized(std::span<const Vec> points,
                                                       std::size_t m, Rng& rng) {
  auto q = orthonormal_coordinates(points, m, rng);
  const double s = std::sqrt(static_cast<double>(points.front().size()) /
                             static_cast<double>(m));
  for (auto& v : q) {
    for (double& x : v) x *= s;
  }
  return q;
}

/// Bounded i.i.d. entries, centered and scaled to unit variance, divided by
/// sqrt(m): E|A^T p|^2 = |p|^2.
inline std::vector<Vec> project_bounded_normalized(std::span<const Vec> points,
                                                   std::size_t m, EntryDistribution dist,
                                                   Rng& rng) {
  const std::size_t n = points.front().size();
  Mat a = sample_bounded_entries(n, m, dist, rng);
  const double center = dist == EntryDistribution::kUnitUniform ? 0.5 : 0.0;
  const double var = dist == EntryDistribution::kUnitUniform ? 1.0 / 12.0 : 1.0 / 3.0;
  const double s = 1.0 / std::sqrt(var * static_cast<double>(m));
  for (double& x : a.values()) x = (x - center) * s;
  std::vector<Vec> out;
  out.reserve(points.size());
  for (const Vec& p : points) out.push_back(matvec_transposed(a, p));
  return out;
}

struct LemmaTrial {
  double orthonormal_fraction;
  double bounded_fraction;
};

struct LemmaReport {
  double gamma = 0.0;
  std::size_t point_count = 0;
  std::size_t m = 0;  // projected dimension
  std::size_t n = 0;  // data dimension, 2m
  std::vector<LemmaTrial> trials;
  double orthonormal_bound = 0.0;  // probability lower bound at m
  double bounded_bound = 0.0;

  double min_orthonormal() const {
    double v = 1.0;
    for (const auto& t : trials) v = std::min(v, t.orthonormal_fraction);
    return v;
  }
  double min_bounded() const {
    double v = 1.0;
    for (const auto& t : trials) v = std::min(v, t.bounded_fraction);
    return v;
  }
  std::size_t violations(double threshold = 0.5) const {
    std::size_t c = 0;
    for (const auto& t : trials) {
      c += (t.orthonormal_fraction < threshold) + (t.bounded_fraction < threshold);
    }
    return c;
  }
};

/// Each trial draws point_count Gaussian points in R^(2m), with m from
/// jl_min_dimension unless overridden, and projects them both ways.
inline LemmaReport run_lemma_trials(double gamma, std::size_t point_count,
                                    std::size_t trials, std::uint64_t seed,
                                    std::optional<std::size_t> m_override = std::nullopt,
                                    EntryDistribution dist =
                                        EntryDistribution::kSymmetricUniform) {
  DistancePreservationParams params(gamma, point_count,
                                    m_override ? *m_override
                                               : jl_min_dimension(point_count, gamma));
  LemmaReport r;
  r.gamma = gamma;
  r.point_count = point_count;
  r.m = params.projected_dim;
  r.n = 2 * r.m;
  r.orthonormal_bound = orthonormal_preservation_bound(r.m, gamma);
  r.bounded_bound = bounded_entry_preservation_bound(r.m, gamma);
  const Rng master(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = master.child(t);
    std::vector<Vec> pts(point_count, Vec(r.n));
    for (auto& p : pts) {
      for (double& x : p) x = rng.gaussian();
    }
    Rng rb = rng.child(1);
    Rng rn = rng.child(2);
    const auto qb = project_orthonormal_normalized(pts, r.m, rb);
    const auto qn = project_bounded_normalized(pts, r.m, dist, rn);
    r.trials.push_back({distance_preservation_fraction(pts, qb, gamma),
                        distance_preservation_fraction(pts, qn, gamma)});
  }
  return r;
}

struct EquivalencePoint {
  std::size_t m1 = 0;
  double gamma = 0.0;
  double m2_real = 0.0;
  std::optional<std::size_t> m2;  // empty when the formula gives < 1
  bool violation = false;         // m2 > m1
};

struct EquivalenceTable {
  std::vector<EquivalencePoint> points;

  std::size_t violations() const {
    return static_cast<std::size_t>(
        std::count_if(points.begin(), points.end(), [](const auto& p) { return p.violation; }));
  }
  std::size_t nonpositive() const {
    return static_cast<std::size_t>(
        std::count_if(points.begin(), points.end(), [](const auto& p) { return !p.m2; }));
  }
};

/// `count` gammas at the midpoints of equal cells covering (lo, hi).
inline std::vector<double> gamma_grid(double lo, double hi, std::size_t count) {
  std::vector<double> g(count);
  for (std::size_t k = 0; k < count; ++k) {
    g[k] = lo + (hi - lo) * (static_cast<double>(k) + 0.5) / static_cast<double>(count);
  }
  return g;
}

inline EquivalenceTable check_equivalence(const std::vector<std::size_t>& m1s,
                                          const std::vector<double>& gammas) {
  EquivalenceTable t;
  for (std::size_t m1 : m1s) {
    for (double g : gammas) {
      EquivalencePoint p;
      p.m1 = m1;
      p.gamma = g;
      p.m2_real = nrp_equivalent_dimension_real(m1, g);
      try {
        p.m2 = nrp_equivalent_dimension(m1, g);
        p.violation = *p.m2 > m1;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kNonPositiveResult) throw;
      }
      t.points.push_back(p);
    }
  }
  return t;
}

}  // namespace nrp

#endif  // NRP_VERIFY_HPP_
