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

// Dense numeric kernels shared by every other module. Everything here is a
// pure function of its inputs (plus an explicit Rng where re-sampling is
// needed), and every reduction runs in a fixed order so results are
// bit-reproducible on a given platform.

#ifndef NRP_NUMKIT_HPP_
#define NRP_NUMKIT_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nrp/error.hpp"
#include "nrp/rng.hpp"

namespace nrp {

using Vec = std::vector<double>;

/// Row-major dense matrix.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Mat(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) {
        fail(ErrorCode::kDimensionMismatch, "ragged matrix literal");
      }
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Mat identity(std::size_t n) { return identity(n, n); }

  /// Leading n x m slice of the identity.
  static Mat identity(std::size_t rows, std::size_t cols) {
    Mat out(rows, cols);
    for (std::size_t i = 0; i < std::min(rows, cols); ++i) out(i, i) = 1.0;
    return out;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  Vec col(std::size_t c) const {
    Vec out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  Mat transpose() const {
    Mat out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    }
    return out;
  }

  friend bool operator==(const Mat&, const Mat&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// ---------------------------------------------------------------------------
// Vector helpers

inline bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

inline void require_same_length(std::span<const double> a,
                                std::span<const double> b,
                                const char* what) {
  if (a.size() != b.size()) {
    fail(ErrorCode::kDimensionMismatch,
         std::string(what) + ": lengths " + std::to_string(a.size()) + " and " +
             std::to_string(b.size()));
  }
}

/// Four interleaved partial sums, combined in a fixed order.
inline double dot(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b, "dot");
  const std::size_t n = a.size();
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < n; ++i) s0 += a[i] * b[i];
  return (s0 + s1) + (s2 + s3);
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double squared_distance(std::span<const double> a,
                               std::span<const double> b) {
  require_same_length(a, b, "squared_distance");
  double s0 = 0.0, s1 = 0.0;
  std::size_t i = 0;
  for (; i + 2 <= a.size(); i += 2) {
    const double d0 = a[i] - b[i];
    const double d1 = a[i + 1] - b[i + 1];
    s0 += d0 * d0;
    s1 += d1 * d1;
  }
  for (; i < a.size(); ++i) s0 += (a[i] - b[i]) * (a[i] - b[i]);
  return s0 + s1;
}

inline double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

/// y += alpha * x
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline Vec scaled(std::span<const double> a, double s) {
  Vec out(a.begin(), a.end());
  for (double& x : out) x *= s;
  return out;
}

inline Vec subtract(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b, "subtract");
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

inline double compensated_mean(std::span<const double> xs) {
  if (xs.empty()) fail(ErrorCode::kEmptyDataset, "mean of empty sequence");
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value() / static_cast<double>(xs.size());
}

/// (a . b) / (|a| |b|), clamped into [-1, 1] against rounding.
inline double cosine(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b, "cosine");
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 || nb == 0.0) {
    fail(ErrorCode::kZeroNormInput, "cosine of a zero-norm vector");
  }
  return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

// ---------------------------------------------------------------------------
// Matrix helpers

inline double frobenius_norm(const Mat& a) { return norm(a.values()); }

inline double max_abs_diff(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    fail(ErrorCode::kDimensionMismatch, "max_abs_diff shape");
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  }
  return m;
}

/// A x
inline Vec matvec(const Mat& a, std::span<const double> x) {
  if (x.size() != a.cols()) {
    fail(ErrorCode::kDimensionMismatch, "matvec: A has " +
                                            std::to_string(a.cols()) +
                                            " cols, x has " +
                                            std::to_string(x.size()));
  }
  Vec out(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) out[r] = dot(a.row(r), x);
  return out;
}

/// A^T x, accumulated row by row.
inline Vec matvec_transposed(const Mat& a, std::span<const double> x) {
  if (x.size() != a.rows()) {
    fail(ErrorCode::kDimensionMismatch, "matvec_transposed: A has " +
                                            std::to_string(a.rows()) +
                                            " rows, x has " +
                                            std::to_string(x.size()));
  }
  Vec out(a.cols(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) axpy(x[r], a.row(r), out);
  return out;
}

inline Mat matmul(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) {
    fail(ErrorCode::kDimensionMismatch, "matmul inner dimensions");
  }
  Mat out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out_row = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik != 0.0) axpy(aik, b.row(k), out_row);
    }
  }
  return out;
}

/// A^T A
inline Mat gram(const Mat& a) {
  Mat out(a.cols(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto row = a.row(r);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double ri = row[i];
      if (ri == 0.0) continue;
      for (std::size_t j = i; j < a.cols(); ++j) out(i, j) += ri * row[j];
    }
  }
  for (std::size_t i = 0; i < a.cols(); ++i) {
    for (std::size_t j = 0; j < i; ++j) out(i, j) = out(j, i);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Orthonormalization

namespace detail {

inline constexpr int kMaxResamples = 8;

// Column-major modified Gram-Schmidt with one re-orthogonalization pass.
// Returns false when a column collapses (rank deficiency).
inline bool mgs_columns(std::vector<Vec>& cols) {
  for (std::size_t j = 0; j < cols.size(); ++j) {
    Vec& v = cols[j];
    const double original = norm(v);
    if (!(original > 0.0)) return false;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        const double r = dot(cols[k], v);
        axpy(-r, cols[k], v);
      }
    }
    const double remaining = norm(v);
    if (!(remaining > 1e-10 * original)) return false;
    const double inv = 1.0 / remaining;
    for (double& x : v) x *= inv;
  }
  return true;
}

}  // namespace detail

/// Orthonormal basis Q (same shape as A) for the column span of A. A rank-
/// deficient input is replaced by a fresh Gaussian matrix drawn from `rng`
/// (up to 8 attempts).
inline Mat orthonormalize(const Mat& a, Rng& rng) {
  if (a.rows() < a.cols() || a.cols() == 0) {
    fail(ErrorCode::kInvalidArgument,
         "orthonormalize needs rows >= cols >= 1, got " +
             std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  std::vector<Vec> cols(m, Vec(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) cols[j][i] = a(i, j);
  }
  for (int attempt = 0;; ++attempt) {
    if (detail::mgs_columns(cols)) break;
    if (attempt + 1 >= detail::kMaxResamples) {
      fail(ErrorCode::kRankDeficient,
           "orthonormalize: input stayed rank deficient after re-sampling");
    }
    for (auto& c : cols) {
      for (double& x : c) x = rng.gaussian();
    }
  }
  Mat q(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) q(i, j) = cols[j][i];
  }
  return q;
}

/// n x m matrix with orthonormal columns spanning a uniformly random
/// m-dimensional subspace (QR of an i.i.d. Gaussian matrix).
inline Mat random_orthonormal(std::size_t n, std::size_t m, Rng& rng) {
  Mat g(n, m);
  for (double& x : g.values()) x = rng.gaussian();
  return orthonormalize(g, rng);
}

// ---------------------------------------------------------------------------
// Symmetric eigendecomposition (cyclic Jacobi)

struct EigenDecomposition {
  Vec values;    // descending
  Mat vectors;   // column k pairs with values[k]
};

inline EigenDecomposition sym_eigendecompose(const Mat& s) {
  if (s.rows() != s.cols() || s.rows() == 0) {
    fail(ErrorCode::kDimensionMismatch, "sym_eigendecompose needs a square matrix");
  }
  const std::size_t n = s.rows();
  double scale = 0.0;
  for (double x : s.values()) scale = std::max(scale, std::abs(x));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(s(i, j) - s(j, i)) > 1e-9 * std::max(1.0, scale)) {
        fail(ErrorCode::kNotSymmetric,
             "entries (" + std::to_string(i) + "," + std::to_string(j) +
                 ") differ by more than 1e-9");
      }
    }
  }

  Mat a = s;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) a(j, i) = a(i, j);
  }
  Mat v = Mat::identity(n);

  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        const double g = 100.0 * std::abs(apq);
        if (std::abs(app) + g == std::abs(app) &&
            std::abs(aqq) + g == std::abs(aqq)) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        rotated = true;
        const double theta = (aqq - app) / (2.0 * apq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        const double tau = sn / (1.0 + c);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = a(p, k) = akp - sn * (akq + tau * akp);
          a(k, q) = a(q, k) = akq + sn * (akp - tau * akq);
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = vkp - sn * (vkq + tau * vkp);
          v(k, q) = vkq + sn * (vkp - tau * vkq);
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x) > a(y, y);
  });
  EigenDecomposition out{Vec(n), Mat(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pseudo-inverse

namespace detail {

// One-sided Jacobi (Hestenes) on a tall matrix: orthogonalizes the columns of
// A by plane rotations, which diagonalizes A^T A without forming it.
inline Mat pinv_tall(const Mat& a) {
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  std::vector<Vec> u(m, Vec(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) u[j][i] = a(i, j);
  }
  std::vector<Vec> v(m, Vec(m, 0.0));
  for (std::size_t j = 0; j < m; ++j) v[j][j] = 1.0;

  constexpr double kEps = std::numeric_limits<double>::epsilon();
  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < m; ++p) {
      for (std::size_t q = p + 1; q < m; ++q) {
        const double alpha = dot(u[p], u[p]);
        const double beta = dot(u[q], u[q]);
        const double gamma = dot(u[p], u[q]);
        if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha * beta)) {
          continue;
        }
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < n; ++i) {
          const double up = u[p][i];
          const double uq = u[q][i];
          u[p][i] = c * up - s * uq;
          u[q][i] = s * up + c * uq;
        }
        for (std::size_t i = 0; i < m; ++i) {
          const double vp = v[p][i];
          const double vq = v[q][i];
          v[p][i] = c * vp - s * vq;
          v[q][i] = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  Vec sigma(m);
  double sigma_max = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    sigma[j] = norm(u[j]);
    sigma_max = std::max(sigma_max, sigma[j]);
  }
  Mat out(m, n);
  if (sigma_max == 0.0) return out;
  const double cutoff = 1e-10 * sigma_max;
  for (std::size_t j = 0; j < m; ++j) {
    if (!(sigma[j] > cutoff)) continue;
    const double w = 1.0 / (sigma[j] * sigma[j]);
    for (std::size_t r = 0; r < m; ++r) {
      const double coeff = w * v[j][r];
      if (coeff == 0.0) continue;
      axpy(coeff, u[j], out.row(r));
    }
  }
  return out;
}

}  // namespace detail

/// Moore-Penrose pseudo-inverse. Singular values at or below
/// 1e-10 * (largest singular value) are treated as zero.
inline Mat pseudo_inverse(const Mat& a) {
  if (a.empty()) fail(ErrorCode::kInvalidArgument, "pseudo_inverse of empty matrix");
  if (a.rows() >= a.cols()) return detail::pinv_tall(a);
  return detail::pinv_tall(a.transpose()).transpose();
}

// ---------------------------------------------------------------------------
// Cholesky for symmetric positive-definite systems

class Cholesky {
 public:
  /// Empty when a pivot is not positive relative to the largest diagonal.
  static std::optional<Cholesky> factor(const Mat& g) {
    if (g.rows() != g.cols()) {
      fail(ErrorCode::kDimensionMismatch, "Cholesky needs a square matrix");
    }
    const std::size_t n = g.rows();
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, g(i, i));
    if (!(max_diag > 0.0)) return std::nullopt;
    Mat l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      double d = g(j, j);
      for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
      if (!(d > 1e-13 * max_diag)) return std::nullopt;
      const double ljj = std::sqrt(d);
      l(j, j) = ljj;
      for (std::size_t i = j + 1; i < n; ++i) {
        double s = g(i, j);
        for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
        l(i, j) = s / ljj;
      }
    }
    return Cholesky(std::move(l));
  }

  Vec solve(std::span<const double> b) const {
    const std::size_t n = lower_.rows();
    if (b.size() != n) fail(ErrorCode::kDimensionMismatch, "Cholesky::solve");
    Vec y(b.begin(), b.end());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < i; ++k) y[i] -= lower_(i, k) * y[k];
      y[i] /= lower_(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
      for (std::size_t k = ii + 1; k < n; ++k) y[ii] -= lower_(k, ii) * y[k];
      y[ii] /= lower_(ii, ii);
    }
    return y;
  }

  /// L^{-1} b for the lower factor L of G = L L^T.
  Vec solve_lower(std::span<const double> b) const {
    const std::size_t n = lower_.rows();
    if (b.size() != n) fail(ErrorCode::kDimensionMismatch, "Cholesky::solve_lower");
    Vec y(b.begin(), b.end());
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = lower_.row(i);
      double s = y[i];
      for (std::size_t k = 0; k < i; ++k) s -= row[k] * y[k];
      y[i] = s / row[i];
    }
    return y;
  }

  std::size_t size() const { return lower_.rows(); }

 private:
  explicit Cholesky(Mat lower) : lower_(std::move(lower)) {}
  Mat lower_;
};

}  // namespace nrp

#endif  // NRP_NUMKIT_HPP_
