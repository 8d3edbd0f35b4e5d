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

// Closed-form quantities behind norm-bounded projection: the collinearity
// scalar t, the Frobenius-norm certificate for a compression matrix, the
// Johnson-Lindenstrauss dimension bound and the orthonormal/bounded-entry
// dimension equivalence.

#ifndef NRP_BOUNDS_HPP_
#define NRP_BOUNDS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "nrp/error.hpp"

namespace nrp {

/// Exclusive upper end of the admissible distortion parameter gamma.
inline constexpr double kGammaUpper = 0.405;

/// Square area of side L split into cells of side l, one agent per cell.
/// The robustness radius r of the fused concept is the cell side.
class GridSpec {
 public:
  GridSpec(double area_side, double cell_side, std::size_t agent_count)
      : area_side_(area_side), cell_side_(cell_side), agent_count_(agent_count) {
    if (!(area_side > 0.0) || !(cell_side > 0.0) || !std::isfinite(area_side)) {
      fail(ErrorCode::kNonPositiveInput, "grid sides must be positive");
    }
    if (cell_side > area_side) {
      fail(ErrorCode::kInvalidArgument, "cell side exceeds area side");
    }
    if (agent_count == 0 || agent_count > cell_count()) {
      fail(ErrorCode::kInvalidArgument,
           "agent count " + std::to_string(agent_count) + " does not fit " +
               std::to_string(cell_count()) + " cells");
    }
  }

  /// Agent count derived as (L/l)^2; L must be a whole number of cells.
  static GridSpec auto_derived(double area_side, double cell_side) {
    if (!(area_side > 0.0) || !(cell_side > 0.0)) {
      fail(ErrorCode::kNonPositiveInput, "grid sides must be positive");
    }
    const double per_side = area_side / cell_side;
    const double rounded = std::round(per_side);
    if (rounded < 1.0 || std::abs(per_side - rounded) > 1e-9 * per_side) {
      fail(ErrorCode::kInvalidArgument, "area side is not a multiple of the cell side");
    }
    const auto k = static_cast<std::size_t>(rounded);
    return GridSpec(area_side, cell_side, k * k);
  }

  /// Smallest square grid of the given cell side that holds `agents` cells.
  static GridSpec covering(double cell_side, std::size_t agents) {
    auto per_side = static_cast<std::size_t>(
        std::ceil(std::sqrt(static_cast<double>(agents)) - 1e-12));
    if (per_side * per_side < agents) ++per_side;
    return GridSpec(cell_side * static_cast<double>(per_side), cell_side, agents);
  }

  double area_side() const noexcept { return area_side_; }
  double cell_side() const noexcept { return cell_side_; }
  double robustness() const noexcept { return cell_side_; }
  std::size_t agent_count() const noexcept { return agent_count_; }
  std::size_t cells_per_side() const noexcept {
    return static_cast<std::size_t>(std::round(area_side_ / cell_side_ + 1e-9));
  }
  std::size_t cell_count() const noexcept {
    return cells_per_side() * cells_per_side();
  }

 private:
  double area_side_;
  double cell_side_;
  std::size_t agent_count_;
};

/// t = l / alpha + 1: the largest collinear scaling that keeps a tuple of
/// norm alpha inside its grid cell.
inline double compute_t(double cell_side, double alpha) {
  if (!(cell_side > 0.0) || !(alpha > 0.0) || !std::isfinite(cell_side) ||
      !std::isfinite(alpha)) {
    fail(ErrorCode::kNonPositiveInput, "compute_t needs l > 0 and alpha > 0");
  }
  return cell_side / alpha + 1.0;
}

class NormBoundCertificate;
NormBoundCertificate compute_norm_bound(double epsilon, double cell_side,
                                        double alpha);

/// Frobenius-norm budget for one agent's compression matrix. Only
/// `compute_norm_bound` creates these, and only for a feasible discriminant.
class NormBoundCertificate {
 public:
  double epsilon() const noexcept { return epsilon_; }
  double alpha() const noexcept { return alpha_; }
  double cell_side() const noexcept { return cell_side_; }
  double t() const noexcept { return t_; }
  /// Exact root eps + sqrt(eps^2 - 1 + t^2/alpha^2) of the utility quadratic.
  double root() const noexcept { return root_; }
  /// root - 2 eps, clamped at zero.
  double delta() const noexcept { return delta_; }
  /// min{t, root}; the Frobenius norm every matrix under this certificate gets.
  double beta() const noexcept { return beta_; }

 private:
  friend NormBoundCertificate compute_norm_bound(double, double, double);
  NormBoundCertificate() = default;

  double epsilon_ = 0.0;
  double alpha_ = 0.0;
  double cell_side_ = 0.0;
  double t_ = 0.0;
  double root_ = 0.0;
  double delta_ = 0.0;
  double beta_ = 0.0;
};

/// Throws InfeasibleBound when eps^2 - 1 + t^2/alpha^2 < 0: the utility
/// requirement cannot be met inside the grid cell, and no clamping is done.
inline NormBoundCertificate compute_norm_bound(double epsilon, double cell_side,
                                               double alpha) {
  if (!(epsilon > 0.0) || !(epsilon <= 1.0)) {
    fail(ErrorCode::kInvalidArgument, "epsilon must lie in (0, 1]");
  }
  const double t = compute_t(cell_side, alpha);
  const double ratio = t / alpha;
  const double discriminant = epsilon * epsilon - 1.0 + ratio * ratio;
  if (discriminant < 0.0) {
    fail(ErrorCode::kInfeasibleBound,
         "eps^2 - 1 + t^2/alpha^2 = " + std::to_string(discriminant) +
             " < 0 (eps=" + std::to_string(epsilon) + ", l=" +
             std::to_string(cell_side) + ", alpha=" + std::to_string(alpha) + ")");
  }
  NormBoundCertificate cert;
  cert.epsilon_ = epsilon;
  cert.alpha_ = alpha;
  cert.cell_side_ = cell_side;
  cert.t_ = t;
  cert.root_ = epsilon + std::sqrt(discriminant);
  cert.delta_ = std::max(0.0, cert.root_ - 2.0 * epsilon);
  cert.beta_ = std::min(t, cert.root_);
  return cert;
}

namespace detail {

inline void require_gamma(double gamma) {
  if (!(gamma > 0.0) || !(gamma < kGammaUpper)) {
    fail(ErrorCode::kGammaOutOfRange,
         "gamma=" + std::to_string(gamma) + " outside (0, 0.405)");
  }
}

// sinh^2 g - (2/3) sinh^3 g
inline double jl_rate(double gamma) {
  const double s = std::sinh(gamma);
  return s * s - (2.0 / 3.0) * s * s * s;
}

}  // namespace detail

struct DistancePreservationParams {
  double gamma;
  std::size_t point_count;
  std::size_t projected_dim;

  DistancePreservationParams(double g, std::size_t n_points, std::size_t m)
      : gamma(g), point_count(n_points), projected_dim(m) {
    detail::require_gamma(g);
  }
};

/// Smallest integer m with m >= 9 ln N / (sinh^2 g - (2/3) sinh^3 g) + 1.
inline std::size_t jl_min_dimension(std::size_t point_count, double gamma) {
  detail::require_gamma(gamma);
  if (point_count < 2) {
    fail(ErrorCode::kInvalidArgument, "jl_min_dimension needs N >= 2");
  }
  const double rhs =
      9.0 * std::log(static_cast<double>(point_count)) / detail::jl_rate(gamma) + 1.0;
  return static_cast<std::size_t>(std::ceil(rhs));
}

/// Real-valued solution m2 of equating the orthonormal-projection and
/// bounded-entry-projection preservation bounds at m1.
inline double nrp_equivalent_dimension_real(std::size_t m1, double gamma) {
  detail::require_gamma(gamma);
  if (m1 < 2) fail(ErrorCode::kInvalidArgument, "nrp_equivalent_dimension needs m1 >= 2");
  const double s = std::sinh(gamma);
  const double numerator = (static_cast<double>(m1) - 1.0) * detail::jl_rate(gamma) -
                           2.0 * std::log(static_cast<double>(m1));
  return numerator / (s * s - s * s * s);
}

/// floor of the real solution. No clamping to m1 is applied; callers that
/// need m2 <= m1 must check it.
inline std::size_t nrp_equivalent_dimension(std::size_t m1, double gamma) {
  const double m2 = std::floor(nrp_equivalent_dimension_real(m1, gamma));
  if (m2 < 1.0) {
    fail(ErrorCode::kNonPositiveResult,
         "m2 = " + std::to_string(m2) + " for m1=" + std::to_string(m1));
  }
  return static_cast<std::size_t>(m2);
}

/// Lower bound on the pairwise preservation probability for an orthonormal
/// projection to m dimensions: 1 - 2 sqrt(m) exp(-(m-1)(s^2/4 - s^3/6)).
inline double orthonormal_preservation_bound(std::size_t m, double gamma) {
  detail::require_gamma(gamma);
  const double s = std::sinh(gamma);
  const double md = static_cast<double>(m);
  return 1.0 - 2.0 * std::sqrt(md) *
                   std::exp(-(md - 1.0) * (s * s / 4.0 - s * s * s / 6.0));
}

/// Same for i.i.d. bounded entries: 1 - 2 exp(-(s^2 - s^3) m / 4).
inline double bounded_entry_preservation_bound(std::size_t m, double gamma) {
  detail::require_gamma(gamma);
  const double s = std::sinh(gamma);
  return 1.0 - 2.0 * std::exp(-(s * s - s * s * s) * static_cast<double>(m) / 4.0);
}

}  // namespace nrp

#endif  // NRP_BOUNDS_HPP_
