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

#include "nrp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "nrp/rng.hpp"

namespace nrp {
namespace {

std::vector<Vec> cloud(std::size_t count, std::size_t dim, Rng& rng) {
  std::vector<Vec> pts(count, Vec(dim));
  for (auto& p : pts) {
    for (double& v : p) v = rng.uniform();
  }
  return pts;
}

// Brute force: full sort of every other index by (distance, index).
std::set<std::size_t> brute_knn(const std::vector<Vec>& pts, const Vec& q, std::size_t k,
                                std::size_t self) {
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    if (j != self) idx.push_back(j);
  }
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    double da = 0.0, db = 0.0;
    for (std::size_t d = 0; d < q.size(); ++d) {
      da += (pts[a][d] - q[d]) * (pts[a][d] - q[d]);
      db += (pts[b][d] - q[d]) * (pts[b][d] - q[d]);
    }
    return da < db;
  });
  return {idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k)};
}

double brute_resemblance(const std::vector<Vec>& actual, const std::vector<Vec>& recon,
                         std::size_t k, bool actual_cloud) {
  double total = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const auto s = brute_knn(actual, actual[i], k, i);
    const auto s2 = brute_knn(actual_cloud ? actual : recon, recon[i], k, i);
    std::size_t common = 0;
    for (std::size_t j : s2) common += s.count(j);
    total += static_cast<double>(common) / static_cast<double>(k);
  }
  return total / static_cast<double>(actual.size());
}

TEST(UtilityTest, Examples) {
  const auto a = utility(Vec{1.0, 0.0}, Vec{1.0}, true);
  EXPECT_DOUBLE_EQ(a.utility, 1.0);
  EXPECT_DOUBLE_EQ(a.privacy, 0.0);
  const auto b = utility(Vec{0.0, 1.0}, Vec{1.0}, true);
  EXPECT_DOUBLE_EQ(b.utility, 0.0);
  EXPECT_DOUBLE_EQ(b.privacy, 1.0);
  const auto c = utility(Vec{3.0, 4.0}, Vec{4.0, 3.0}, false);
  EXPECT_NEAR(c.utility, 0.96, 1e-15);
  EXPECT_TRUE(c.in_range);
}

TEST(UtilityTest, NegativeCosine) {
  const auto raw = utility(Vec{1.0, 0.0}, Vec{-1.0}, false);
  EXPECT_DOUBLE_EQ(raw.utility, -1.0);
  EXPECT_DOUBLE_EQ(raw.privacy, 2.0);
  EXPECT_FALSE(raw.in_range);
  const auto clamped = utility(Vec{1.0, 0.0}, Vec{-1.0}, true);
  EXPECT_DOUBLE_EQ(clamped.utility, 0.0);
  EXPECT_FALSE(clamped.in_range);
}

TEST(UtilityTest, ZeroNormRaises) {
  EXPECT_THROW(utility(Vec{1.0, 2.0}, Vec{0.0}, true), Error);
}

TEST(UtilityTest, SumIsOneAndPositiveInputsInRange) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    Vec y(8), t(3);
    for (double& v : y) v = rng.uniform_open();
    for (double& v : t) v = rng.uniform_open();
    const auto s = utility(y, t, true);
    EXPECT_DOUBLE_EQ(s.utility + s.privacy, 1.0);
    EXPECT_TRUE(s.in_range);
    EXPECT_GE(s.utility, 0.0);
    EXPECT_LE(s.utility, 1.0);
  }
}

TEST(BreachTest, RelativeAndAbsolute) {
  const std::vector<Vec> actual{{10.0, 0.0}, {1.0, 0.0}, {0.0, 5.0}};
  const std::vector<Vec> recon{{11.0, 0.0}, {2.0, 0.0}, {0.0, 5.0}};
  // Relative radii 2, 0.2, 1 against distances 1, 1, 0.
  EXPECT_DOUBLE_EQ(breach_count(actual, recon), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(breach_count(actual, recon, BreachRule{BreachMode::kAbsolute, 1.0}), 1.0);
  EXPECT_DOUBLE_EQ(breach_count(actual, recon, BreachRule{BreachMode::kAbsolute, 0.5}),
                   1.0 / 3.0);
  EXPECT_THROW(breach_count(actual, recon, BreachRule{BreachMode::kAbsolute, 0.0}), Error);
  EXPECT_EQ(BreachRule{}.describe(), "relative:0.200000*|actual|");
}

TEST(BreachTest, SelfIsFullBreach) {
  Rng rng(2);
  const auto pts = cloud(30, 4, rng);
  EXPECT_DOUBLE_EQ(breach_count(pts, pts), 1.0);
  EXPECT_DOUBLE_EQ(displacement(pts, pts), 0.0);
  EXPECT_DOUBLE_EQ(resemblance(pts, pts), 1.0);
  EXPECT_DOUBLE_EQ(resemblance(pts, pts, 10, ResemblanceMode::kActualCloud), 1.0);
}

TEST(DisplacementTest, BruteForce) {
  Rng rng(3);
  const auto a = cloud(25, 6, rng);
  const auto b = cloud(25, 6, rng);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = 0.0;
    for (std::size_t j = 0; j < 6; ++j) d += (a[i][j] - b[i][j]) * (a[i][j] - b[i][j]);
    s += std::sqrt(d);
  }
  EXPECT_NEAR(displacement(a, b), s / 25.0, 1e-14);
}

TEST(MetricErrorsTest, EmptyAndMisaligned) {
  const std::vector<Vec> none;
  const std::vector<Vec> one{{1.0}};
  const std::vector<Vec> two{{1.0}, {2.0}};
  EXPECT_THROW(breach_count(none, none), Error);
  EXPECT_THROW(displacement(one, two), Error);
  EXPECT_THROW(resemblance(two, two, 2), Error);
}

TEST(NearestNeighborsTest, TiesBreakByIndex) {
  const std::vector<Vec> pts{{1.0}, {-1.0}, {0.0}, {1.0}, {-1.0}};
  EXPECT_EQ(nearest_neighbors(pts, Vec{0.0}, 3, 2), (std::vector<std::size_t>{0, 1, 3}));
  EXPECT_EQ(nearest_neighbors(pts, Vec{0.0}, 2, std::nullopt),
            (std::vector<std::size_t>{2, 0}));
  EXPECT_THROW(nearest_neighbors(pts, Vec{0.0}, 5, 0), Error);
}

TEST(ResemblanceTest, MatchesBruteForceOracle) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t count = 15 + static_cast<std::size_t>(rng.uniform() * 40);
    const auto actual = cloud(count, 5, rng);
    std::vector<Vec> recon = actual;
    for (auto& p : recon) {
      for (double& v : p) v += 0.2 * rng.gaussian();
    }
    for (std::size_t k : {1u, 3u, 10u}) {
      EXPECT_NEAR(resemblance(actual, recon, k), brute_resemblance(actual, recon, k, false),
                  1e-15);
      EXPECT_NEAR(resemblance(actual, recon, k, ResemblanceMode::kActualCloud),
                  brute_resemblance(actual, recon, k, true), 1e-15);
    }
  }
}

TEST(ResemblanceTest, InvariantUnderCommonTranslationAndScale) {
  Rng rng(5);
  const auto actual = cloud(40, 3, rng);
  auto moved = actual;
  for (auto& p : moved) {
    for (double& v : p) v = 3.0 * v + 7.0;
  }
  EXPECT_DOUBLE_EQ(resemblance(actual, moved), 1.0);
}

TEST(DistancePreservationTest, IdentityAndScaling) {
  Rng rng(6);
  const auto pts = cloud(20, 4, rng);
  EXPECT_DOUBLE_EQ(distance_preservation_fraction(pts, pts, 0.1), 1.0);
  auto far = pts;
  for (auto& p : far) {
    for (double& v : p) v *= 2.0;  // squared distances scale by 4 > e^0.4
  }
  EXPECT_DOUBLE_EQ(distance_preservation_fraction(pts, far, 0.4), 0.0);
  auto near = pts;
  for (auto& p : near) {
    for (double& v : p) v *= 1.01;
  }
  EXPECT_DOUBLE_EQ(distance_preservation_fraction(pts, near, 0.1), 1.0);
  EXPECT_THROW(distance_preservation_fraction(pts, pts, 0.5), Error);
}

}  // namespace
}  // namespace nrp
