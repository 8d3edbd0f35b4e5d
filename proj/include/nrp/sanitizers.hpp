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

// Sanitization mechanisms. Every mechanism maps a DataTuple y in R^n to a
// SanitizedTuple; the projection mechanisms return A^T y for an n x m matrix
// A, the noise mechanism returns y + U z.

#ifndef NRP_SANITIZERS_HPP_
#define NRP_SANITIZERS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nrp/bounds.hpp"
#include "nrp/error.hpp"
#include "nrp/numkit.hpp"
#include "nrp/rng.hpp"

namespace nrp {

struct DataTuple {
  Vec values;
  std::vector<std::size_t> private_indices;  // sorted, unique
  std::size_t agent_id = 0;

  std::size_t size() const noexcept { return values.size(); }
};

inline void validate(const DataTuple& y) {
  if (y.values.empty()) fail(ErrorCode::kInvalidArgument, "empty tuple");
  if (!all_finite(y.values)) fail(ErrorCode::kInvalidArgument, "non-finite tuple entry");
  for (std::size_t k = 0; k < y.private_indices.size(); ++k) {
    if (y.private_indices[k] >= y.values.size() ||
        (k > 0 && y.private_indices[k] <= y.private_indices[k - 1])) {
      fail(ErrorCode::kInvalidArgument,
           "private indices must be sorted, unique and below n");
    }
  }
}

struct SanitizedTuple {
  Vec values;
  std::size_t agent_id = 0;
  std::string_view mechanism_tag;

  std::size_t size() const noexcept { return values.size(); }
};

enum class Mechanism { kNrp, kNrpUnbounded, kBrp, kPca, kAsup, kIdentity };

/// Command-line spelling.
constexpr std::string_view mechanism_name(Mechanism m) {
  switch (m) {
    case Mechanism::kNrp: return "nrp";
    case Mechanism::kNrpUnbounded: return "nrp-unbounded";
    case Mechanism::kBrp: return "brp";
    case Mechanism::kPca: return "pca";
    case Mechanism::kAsup: return "asup";
    case Mechanism::kIdentity: return "identity";
  }
  return "unknown";
}

/// Tag written into every SanitizedTuple and report row.
constexpr std::string_view mechanism_tag(Mechanism m) {
  return m == Mechanism::kAsup ? std::string_view("asup-style") : mechanism_name(m);
}

inline std::optional<Mechanism> parse_mechanism(std::string_view s) {
  for (Mechanism m : {Mechanism::kNrp, Mechanism::kNrpUnbounded, Mechanism::kBrp,
                      Mechanism::kPca, Mechanism::kAsup, Mechanism::kIdentity}) {
    if (s == mechanism_name(m) || s == mechanism_tag(m)) return m;
  }
  return std::nullopt;
}

enum class EntryDistribution {
  kUnitUniform,       // [0, 1)
  kSymmetricUniform,  // (-1, 1)
  kGaussianQR,        // orthonormal columns from QR of a Gaussian matrix
  kPrincipalAxes,     // top eigenvectors of a sample covariance
};

constexpr std::string_view distribution_name(EntryDistribution d) {
  switch (d) {
    case EntryDistribution::kUnitUniform: return "unit-uniform";
    case EntryDistribution::kSymmetricUniform: return "symmetric-uniform";
    case EntryDistribution::kGaussianQR: return "gaussian-qr";
    case EntryDistribution::kPrincipalAxes: return "principal-axes";
  }
  return "unknown";
}

inline std::optional<EntryDistribution> parse_distribution(std::string_view s) {
  for (auto d : {EntryDistribution::kUnitUniform, EntryDistribution::kSymmetricUniform,
                 EntryDistribution::kGaussianQR, EntryDistribution::kPrincipalAxes}) {
    if (s == distribution_name(d)) return d;
  }
  return std::nullopt;
}

constexpr bool is_bounded(EntryDistribution d) {
  return d == EntryDistribution::kUnitUniform ||
         d == EntryDistribution::kSymmetricUniform;
}

struct ProjectionMatrix {
  Mat matrix;  // n x m
  EntryDistribution distribution = EntryDistribution::kUnitUniform;
  double frobenius = 0.0;
  std::optional<NormBoundCertificate> certificate;

  std::size_t input_dim() const noexcept { return matrix.rows(); }
  std::size_t output_dim() const noexcept { return matrix.cols(); }
};

namespace detail {

inline constexpr int kMaxDegenerateRetries = 8;

inline void require_output_dim(std::size_t n, std::size_t m) {
  if (m < 1 || m > n) {
    fail(ErrorCode::kInvalidArgument,
         "projection needs 1 <= m <= n, got m=" + std::to_string(m) +
             ", n=" + std::to_string(n));
  }
}

}  // namespace detail

/// n x m matrix of i.i.d. entries from a bounded distribution.
inline Mat sample_bounded_entries(std::size_t n, std::size_t m, EntryDistribution dist,
                                  Rng& rng) {
  Mat a(n, m);
  switch (dist) {
    case EntryDistribution::kUnitUniform:
      for (double& x : a.values()) x = rng.uniform();
      break;
    case EntryDistribution::kSymmetricUniform:
      for (double& x : a.values()) x = 2.0 * rng.uniform_open() - 1.0;
      break;
    default:
      fail(ErrorCode::kInvalidArgument,
           "NRP needs a bounded entry distribution, got " +
               std::string(distribution_name(dist)));
  }
  return a;
}

/// Fresh NRP matrix. With a certificate the matrix is rescaled so that its
/// Frobenius norm equals beta; without one it is returned as sampled.
inline ProjectionMatrix draw_nrp_matrix(std::size_t n, std::size_t m,
                                        EntryDistribution dist,
                                        const std::optional<NormBoundCertificate>& cert,
                                        Rng& rng) {
  detail::require_output_dim(n, m);
  for (int attempt = 0; attempt < detail::kMaxDegenerateRetries; ++attempt) {
    Mat a = sample_bounded_entries(n, m, dist, rng);
    const double f = frobenius_norm(a);
    if (!(f > 0.0)) continue;
    if (cert) {
      const double scale = cert->beta() / f;
      for (double& x : a.values()) x *= scale;
    }
    ProjectionMatrix p{std::move(a), dist, 0.0, cert};
    p.frobenius = frobenius_norm(p.matrix);
    return p;
  }
  fail(ErrorCode::kDegenerateMatrix, "sampled an all-zero NRP matrix 8 times");
}

struct NrpTrace {
  SanitizedTuple tuple;
  ProjectionMatrix matrix;
};

/// Norm-bounded NRP, returning the matrix that was used alongside the output.
inline NrpTrace sanitize_nrp_traced(const DataTuple& y, std::size_t m,
                                    const NormBoundCertificate& cert, Rng& rng,
                                    EntryDistribution dist = EntryDistribution::kUnitUniform) {
  ProjectionMatrix a = draw_nrp_matrix(y.size(), m, dist, cert, rng);
  SanitizedTuple t{matvec_transposed(a.matrix, y.values), y.agent_id,
                   mechanism_tag(Mechanism::kNrp)};
  return {std::move(t), std::move(a)};
}

inline SanitizedTuple sanitize_nrp(const DataTuple& y, std::size_t m,
                                   const NormBoundCertificate& cert, Rng& rng,
                                   EntryDistribution dist = EntryDistribution::kUnitUniform) {
  return sanitize_nrp_traced(y, m, cert, rng, dist).tuple;
}

inline NrpTrace sanitize_nrp_unbounded_traced(
    const DataTuple& y, std::size_t m, Rng& rng,
    EntryDistribution dist = EntryDistribution::kUnitUniform) {
  ProjectionMatrix a = draw_nrp_matrix(y.size(), m, dist, std::nullopt, rng);
  SanitizedTuple t{matvec_transposed(a.matrix, y.values), y.agent_id,
                   mechanism_tag(Mechanism::kNrpUnbounded)};
  return {std::move(t), std::move(a)};
}

inline SanitizedTuple sanitize_nrp_unbounded(
    const DataTuple& y, std::size_t m, Rng& rng,
    EntryDistribution dist = EntryDistribution::kUnitUniform) {
  return sanitize_nrp_unbounded_traced(y, m, rng, dist).tuple;
}

/// The single orthonormal matrix a BRP deployment reuses for every tuple.
inline ProjectionMatrix make_brp_matrix(std::size_t n, std::size_t m, Rng& rng) {
  detail::require_output_dim(n, m);
  ProjectionMatrix p{random_orthonormal(n, m, rng), EntryDistribution::kGaussianQR, 0.0,
                     std::nullopt};
  p.frobenius = frobenius_norm(p.matrix);
  return p;
}

inline SanitizedTuple sanitize_brp(const DataTuple& y, const ProjectionMatrix& p) {
  if (p.distribution != EntryDistribution::kGaussianQR) {
    fail(ErrorCode::kInvalidArgument, "BRP needs an orthonormal gaussian-qr matrix");
  }
  if (p.input_dim() != y.size()) {
    fail(ErrorCode::kDimensionMismatch, "BRP matrix has " +
                                            std::to_string(p.input_dim()) +
                                            " rows, tuple has " +
                                            std::to_string(y.size()));
  }
  return {matvec_transposed(p.matrix, y.values), y.agent_id,
          mechanism_tag(Mechanism::kBrp)};
}

struct PcaModel {
  ProjectionMatrix projection;  // n x m, orthonormal columns
  Vec mean;
  Vec eigenvalues;  // all n, descending
};

/// Flips each column so its first entry of magnitude above 1e-12 is positive.
inline void canonicalize_signs(Mat& v) {
  for (std::size_t c = 0; c < v.cols(); ++c) {
    for (std::size_t r = 0; r < v.rows(); ++r) {
      const double x = v(r, c);
      if (std::abs(x) <= 1e-12) continue;
      if (x < 0.0) {
        for (std::size_t i = 0; i < v.rows(); ++i) v(i, c) = -v(i, c);
      }
      break;
    }
  }
}

inline PcaModel fit_pca(std::span<const Vec> points, std::size_t m) {
  if (points.size() < 2) fail(ErrorCode::kInsufficientData, "PCA needs at least 2 points");
  const std::size_t n = points.front().size();
  detail::require_output_dim(n, m);
  std::vector<CompensatedSum> sums(n);
  for (const Vec& p : points) {
    if (p.size() != n) fail(ErrorCode::kDimensionMismatch, "PCA points differ in length");
    for (std::size_t j = 0; j < n; ++j) sums[j].add(p[j]);
  }
  Vec mean(n);
  for (std::size_t j = 0; j < n; ++j) {
    mean[j] = sums[j].value() / static_cast<double>(points.size());
  }
  Mat cov(n, n);
  Vec centered(n);
  for (const Vec& p : points) {
    for (std::size_t j = 0; j < n; ++j) centered[j] = p[j] - mean[j];
    for (std::size_t i = 0; i < n; ++i) {
      const double ci = centered[i];
      for (std::size_t j = i; j < n; ++j) cov(i, j) += ci * centered[j];
    }
  }
  const double denom = static_cast<double>(points.size() - 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      cov(i, j) /= denom;
      cov(j, i) = cov(i, j);
    }
  }
  EigenDecomposition eig = sym_eigendecompose(cov);
  canonicalize_signs(eig.vectors);
  Mat top(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < m; ++k) top(i, k) = eig.vectors(i, k);
  }
  PcaModel model{{std::move(top), EntryDistribution::kPrincipalAxes, 0.0, std::nullopt},
                 std::move(mean), std::move(eig.values)};
  model.projection.frobenius = frobenius_norm(model.projection.matrix);
  return model;
}

inline PcaModel fit_pca(std::span<const DataTuple> dataset, std::size_t m) {
  std::vector<Vec> points;
  points.reserve(dataset.size());
  for (const auto& y : dataset) points.push_back(y.values);
  return fit_pca(std::span<const Vec>(points), m);
}

inline SanitizedTuple sanitize_pca(const DataTuple& y, const ProjectionMatrix& p,
                                   std::span<const double> mean) {
  if (p.input_dim() != y.size() || mean.size() != y.size()) {
    fail(ErrorCode::kDimensionMismatch, "PCA model and tuple differ in dimension");
  }
  const Vec centered = subtract(y.values, mean);
  return {matvec_transposed(p.matrix, centered), y.agent_id,
          mechanism_tag(Mechanism::kPca)};
}

inline SanitizedTuple sanitize_pca(const DataTuple& y, const PcaModel& model) {
  return sanitize_pca(y, model.projection, model.mean);
}

/// y + U z with z ~ N(0, noise_scale^2) on the private coordinates, zero
/// elsewhere, and U a fresh n x n orthogonal matrix.
inline SanitizedTuple sanitize_asup(const DataTuple& y, double noise_scale, Rng& rng) {
  if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale)) {
    fail(ErrorCode::kInvalidArgument, "noise scale must be finite and >= 0");
  }
  SanitizedTuple out{y.values, y.agent_id, mechanism_tag(Mechanism::kAsup)};
  if (noise_scale == 0.0 || y.private_indices.empty()) return out;
  const std::size_t n = y.size();
  const Mat u = random_orthonormal(n, n, rng);
  for (std::size_t idx : y.private_indices) {
    const double z = noise_scale * rng.gaussian();
    for (std::size_t r = 0; r < n; ++r) out.values[r] += u(r, idx) * z;
  }
  return out;
}

/// Debug mechanism: no sanitization at all.
inline SanitizedTuple sanitize_identity(const DataTuple& y) {
  return {y.values, y.agent_id, mechanism_tag(Mechanism::kIdentity)};
}

/// Embeds t into R^n by appending zeros.
inline Vec zero_pad(std::span<const double> t, std::size_t n) {
  if (t.size() > n) {
    fail(ErrorCode::kDimensionMismatch, "cannot pad length " + std::to_string(t.size()) +
                                            " down to " + std::to_string(n));
  }
  Vec out(n, 0.0);
  std::copy(t.begin(), t.end(), out.begin());
  return out;
}

/// 64-bit FNV-1a over the raw bytes of the entries, shape included.
inline std::uint64_t matrix_digest(const Mat& a) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  const std::uint64_t shape[2] = {a.rows(), a.cols()};
  feed(shape, sizeof(shape));
  feed(a.values().data(), a.values().size() * sizeof(double));
  return h;
}

/// Audit log with one JSON object per line per sanitization.
class ReplayLog {
 public:
  explicit ReplayLog(std::ostream& out) : out_(out) {}

  void record(std::size_t agent_id, std::uint64_t seed, const ProjectionMatrix& p) {
    char buf[256];
    const double beta = p.certificate ? p.certificate->beta() : 0.0;
    std::snprintf(buf, sizeof(buf),
                  "{\"agent_id\":%zu,\"seed\":%llu,\"distribution\":\"%s\","
                  "\"beta\":%.17g,\"frobenius\":%.17g,\"digest\":\"%016llx\"}\n",
                  agent_id, static_cast<unsigned long long>(seed),
                  std::string(distribution_name(p.distribution)).c_str(), beta,
                  p.frobenius, static_cast<unsigned long long>(matrix_digest(p.matrix)));
    out_ << buf;
    ++count_;
  }

  std::size_t count() const noexcept { return count_; }

 private:
  std::ostream& out_;
  std::size_t count_ = 0;
};

}  // namespace nrp

#endif  // NRP_SANITIZERS_HPP_
