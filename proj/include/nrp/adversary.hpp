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

// Honest-but-curious reconstruction at the fusion center. The adversary knows
// which mechanism and entry distribution are in use, never the per-tuple
// matrix, and attacks one sanitized tuple at a time.

#ifndef NRP_ADVERSARY_HPP_
#define NRP_ADVERSARY_HPP_

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nrp/error.hpp"
#include "nrp/numkit.hpp"
#include "nrp/rng.hpp"
#include "nrp/sanitizers.hpp"

namespace nrp {

struct ReconstructionResult {
  Vec reconstructed;
  std::size_t agent_id = 0;
  std::string_view attack_tag;
};

enum class AttackKind {
  kAuto,
  kRandomInverse,
  kAveragedInverse,
  kNaiveRandom,
  kKnownMatrix,
  kIdentity,
  kMeanCorrected,
};

constexpr std::string_view attack_name(AttackKind a) {
  switch (a) {
    case AttackKind::kAuto: return "auto";
    case AttackKind::kRandomInverse: return "random-inverse";
    case AttackKind::kAveragedInverse: return "averaged-inverse";
    case AttackKind::kNaiveRandom: return "naive-random";
    case AttackKind::kKnownMatrix: return "known-matrix";
    case AttackKind::kIdentity: return "identity";
    case AttackKind::kMeanCorrected: return "mean-corrected";
  }
  return "unknown";
}

inline std::optional<AttackKind> parse_attack(std::string_view s) {
  for (auto a : {AttackKind::kAuto, AttackKind::kRandomInverse,
                 AttackKind::kAveragedInverse, AttackKind::kNaiveRandom,
                 AttackKind::kKnownMatrix, AttackKind::kIdentity,
                 AttackKind::kMeanCorrected}) {
    if (s == attack_name(a)) return a;
  }
  return std::nullopt;
}

/// Default attack for each mechanism: the averaged inverse against the
/// per-tuple random matrices of NRP, the exact pseudo-inverse where the
/// matrix is fixed and therefore learnable, identity against noise.
constexpr AttackKind default_attack(Mechanism m) {
  switch (m) {
    case Mechanism::kNrp:
    case Mechanism::kNrpUnbounded: return AttackKind::kAveragedInverse;
    case Mechanism::kBrp:
    case Mechanism::kPca: return AttackKind::kKnownMatrix;
    case Mechanism::kAsup:
    case Mechanism::kIdentity: return AttackKind::kIdentity;
  }
  return AttackKind::kIdentity;
}

namespace detail {

inline constexpr int kMaxSingularRetries = 8;

/// n x m sample from the family the sanitizer is known to draw from.
inline Mat sample_family(std::size_t n, std::size_t m, EntryDistribution dist, Rng& rng) {
  if (dist == EntryDistribution::kGaussianQR) return random_orthonormal(n, m, rng);
  return sample_bounded_entries(n, m, dist, rng);
}

// B (B^T B)^{-1}, or nothing when B^T B is numerically singular.
inline std::optional<Mat> right_inverse_of_transpose(const Mat& b) {
  const auto chol = Cholesky::factor(gram(b));
  if (!chol) return std::nullopt;
  const std::size_t n = b.rows();
  const std::size_t m = b.cols();
  Mat out(n, m);
  Vec e(m);
  for (std::size_t j = 0; j < m; ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    e[j] = 1.0;
    const Vec col = chol->solve(e);  // column j of (B^T B)^{-1}
    const Vec bc = matvec(b, col);
    for (std::size_t i = 0; i < n; ++i) out(i, j) = bc[i];
  }
  return out;
}

inline Mat sample_inverse(std::size_t n, std::size_t m, EntryDistribution dist, Rng& rng) {
  if (m < 1 || m > n) {
    fail(ErrorCode::kDimensionMismatch, "sanitized length " + std::to_string(m) +
                                            " exceeds data dimension " + std::to_string(n));
  }
  for (int attempt = 0; attempt < kMaxSingularRetries; ++attempt) {
    if (auto inv = right_inverse_of_transpose(sample_family(n, m, dist, rng))) {
      return *inv;
    }
  }
  fail(ErrorCode::kSingularSample, "B^T B stayed singular after 8 samples");
}

}  // namespace detail

/// y_hat = (B^T)^+ t = B (B^T B)^{-1} t with B freshly drawn from the
/// sanitizer's entry distribution.
inline ReconstructionResult attack_random_inverse(const SanitizedTuple& t, std::size_t n,
                                                  EntryDistribution dist, Rng& rng) {
  const Mat inv = detail::sample_inverse(n, t.size(), dist, rng);
  return {matvec(inv, t.values), t.agent_id, attack_name(AttackKind::kRandomInverse)};
}

/// y_hat = B (B^T B)^{-1} t for a supplied B (white-box oracle mode).
inline ReconstructionResult reconstruct_with(const SanitizedTuple& t, const Mat& b) {
  if (b.cols() != t.size()) {
    fail(ErrorCode::kDimensionMismatch, "matrix and sanitized tuple differ in m");
  }
  auto inv = detail::right_inverse_of_transpose(b);
  if (!inv) fail(ErrorCode::kSingularSample, "supplied matrix has singular B^T B");
  return {matvec(*inv, t.values), t.agent_id, attack_name(AttackKind::kRandomInverse)};
}

/// Monte-Carlo estimate of E[B (B^T B)^{-1}] over the sanitizer's family,
/// drawn once and applied to every tuple. This is the minimum-variance
/// linear guess when the per-tuple matrix is unknown, and it is at least as
/// strong as any single random draw.
class AveragedInverseAttack {
 public:
  AveragedInverseAttack(std::size_t n, std::size_t m, EntryDistribution dist,
                        std::size_t draws, Rng& rng)
      : operator_(n, m) {
    if (draws == 0) fail(ErrorCode::kInvalidArgument, "averaged inverse needs draws >= 1");
    for (std::size_t k = 0; k < draws; ++k) {
      const Mat inv = detail::sample_inverse(n, m, dist, rng);
      for (std::size_t i = 0; i < inv.values().size(); ++i) {
        operator_.values()[i] += inv.values()[i];
      }
    }
    for (double& x : operator_.values()) x /= static_cast<double>(draws);
  }

  ReconstructionResult operator()(const SanitizedTuple& t) const {
    return {matvec(operator_, t.values), t.agent_id,
            attack_name(AttackKind::kAveragedInverse)};
  }

  const Mat& matrix() const noexcept { return operator_; }

 private:
  Mat operator_;
};

/// Ablation baseline: left-multiplies t by a raw n x m sample, no inversion.
inline ReconstructionResult attack_naive_random(const SanitizedTuple& t, std::size_t n,
                                                EntryDistribution dist, Rng& rng) {
  if (t.size() > n) fail(ErrorCode::kDimensionMismatch, "sanitized tuple longer than n");
  const Mat b = detail::sample_family(n, t.size(), dist, rng);
  return {matvec(b, t.values), t.agent_id, attack_name(AttackKind::kNaiveRandom)};
}

/// White-box attack for fixed-matrix mechanisms: y_hat = (A^T)^+ t, plus the
/// training mean for PCA.
class KnownMatrixAttack {
 public:
  explicit KnownMatrixAttack(const ProjectionMatrix& a)
      : inverse_(pseudo_inverse(a.matrix.transpose())), offset_(a.input_dim(), 0.0) {
    if (!(frobenius_norm(inverse_) > 0.0)) {
      fail(ErrorCode::kSingularSample, "known matrix is zero");
    }
  }

  explicit KnownMatrixAttack(const PcaModel& model) : KnownMatrixAttack(model.projection) {
    offset_ = model.mean;
  }

  ReconstructionResult operator()(const SanitizedTuple& t) const {
    if (t.size() != inverse_.cols()) {
      fail(ErrorCode::kDimensionMismatch, "known matrix and tuple differ in m");
    }
    Vec y = matvec(inverse_, t.values);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += offset_[i];
    return {std::move(y), t.agent_id, attack_name(AttackKind::kKnownMatrix)};
  }

 private:
  Mat inverse_;  // n x m
  Vec offset_;
};

inline ReconstructionResult attack_known_matrix(const SanitizedTuple& t,
                                                const ProjectionMatrix& a) {
  return KnownMatrixAttack(a)(t);
}

inline ReconstructionResult attack_known_matrix(const SanitizedTuple& t,
                                                const PcaModel& model) {
  return KnownMatrixAttack(model)(t);
}

inline ReconstructionResult attack_identity(const SanitizedTuple& t, std::size_t n) {
  if (t.size() != n) {
    fail(ErrorCode::kDimensionMismatch, "identity attack needs an n-dimensional tuple");
  }
  return {t.values, t.agent_id, attack_name(AttackKind::kIdentity)};
}

/// Per-coordinate shrinkage toward the cohort mean for dimension-preserving
/// noise: y_hat_j = mu_j + w_j (t_j - mu_j) with w_j = max(0, v_j - s2) / v_j,
/// where v_j is the cohort variance of coordinate j and s2 the per-coordinate
/// variance of rotated noise, noise_scale^2 * |private| / n.
class MeanCorrectedAttack {
 public:
  MeanCorrectedAttack(std::span<const SanitizedTuple> cohort, double noise_scale,
                      std::size_t private_count) {
    if (cohort.size() < 2) {
      fail(ErrorCode::kInsufficientData, "mean-corrected attack needs >= 2 tuples");
    }
    const std::size_t n = cohort.front().size();
    const double k = static_cast<double>(cohort.size());
    mean_.assign(n, 0.0);
    weight_.assign(n, 0.0);
    std::vector<CompensatedSum> sums(n);
    for (const auto& t : cohort) {
      if (t.size() != n) fail(ErrorCode::kDimensionMismatch, "cohort lengths differ");
      for (std::size_t j = 0; j < n; ++j) sums[j].add(t.values[j]);
    }
    for (std::size_t j = 0; j < n; ++j) mean_[j] = sums[j].value() / k;
    const double s2 = noise_scale * noise_scale * static_cast<double>(private_count) /
                      static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
      CompensatedSum v;
      for (const auto& t : cohort) {
        const double d = t.values[j] - mean_[j];
        v.add(d * d);
      }
      const double var = v.value() / (k - 1.0);
      weight_[j] = var > 0.0 ? std::max(0.0, var - s2) / var : 0.0;
    }
  }

  ReconstructionResult operator()(const SanitizedTuple& t) const {
    if (t.size() != mean_.size()) fail(ErrorCode::kDimensionMismatch, "cohort size");
    Vec y(mean_.size());
    for (std::size_t j = 0; j < y.size(); ++j) {
      y[j] = mean_[j] + weight_[j] * (t.values[j] - mean_[j]);
    }
    return {std::move(y), t.agent_id, attack_name(AttackKind::kMeanCorrected)};
  }

 private:
  Vec mean_;
  Vec weight_;
};

}  // namespace nrp

#endif  // NRP_ADVERSARY_HPP_
