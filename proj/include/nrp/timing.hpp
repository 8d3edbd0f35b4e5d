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

// Wall-clock cost of each mechanism as the data dimension grows.

#ifndef NRP_TIMING_HPP_
#define NRP_TIMING_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#if defined(__linux__)
#include <sched.h>
#endif

#include "nrp/bounds.hpp"
#include "nrp/error.hpp"
#include "nrp/numkit.hpp"
#include "nrp/rng.hpp"
#include "nrp/sanitizers.hpp"

namespace nrp {

/// Pins the calling thread to the CPU it is running on. Returns false where
/// the platform does not support it.
inline bool pin_to_current_cpu() {
#if defined(__linux__)
  const int cpu = sched_getcpu();
  if (cpu < 0) return false;
  cpu_set_t set;
  CPU_ZERO(&set);
  CPU_SET(cpu, &set);
  return sched_setaffinity(0, sizeof(set), &set) == 0;
#else
  return false;
#endif
}

struct TimingOptions {
  std::size_t samples = 31;
  std::size_t preprocess_samples = 5;
  double min_batch_seconds = 2e-3;  // each sample repeats the call until this long
};

/// Median seconds per call of `fn`, after one warmup call.
template <typename Fn>
double median_seconds(Fn&& fn, std::size_t samples, double min_batch_seconds) {
  using clock = std::chrono::steady_clock;
  fn();
  std::size_t batch = 1;
  while (true) {
    const auto t0 = clock::now();
    for (std::size_t i = 0; i < batch; ++i) fn();
    const double dt = std::chrono::duration<double>(clock::now() - t0).count();
    if (dt >= min_batch_seconds || batch >= (std::size_t{1} << 20)) break;
    batch *= 2;
  }
  std::vector<double> times;
  times.reserve(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    const auto t0 = clock::now();
    for (std::size_t i = 0; i < batch; ++i) fn();
    times.push_back(std::chrono::duration<double>(clock::now() - t0).count() /
                    static_cast<double>(batch));
  }
  std::nth_element(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(samples / 2),
                   times.end());
  return times[samples / 2];
}

struct TimingRow {
  std::string mechanism;
  std::string phase;  // "per-tuple" or "preprocess"
  std::size_t n;
  std::size_t m;
  double seconds;
};

/// Least-squares slope of log(seconds) against log(n) for one series.
inline double loglog_slope(const std::vector<TimingRow>& rows, const std::string& mechanism,
                           const std::string& phase) {
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    if (r.mechanism == mechanism && r.phase == phase && r.seconds > 0.0) {
      xs.push_back(std::log(static_cast<double>(r.n)));
      ys.push_back(std::log(r.seconds));
    }
  }
  if (xs.size() < 2) fail(ErrorCode::kInsufficientData, "slope needs two grid points");
  const double k = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

/// Times the listed mechanisms at every n in `n_grid` with output dimension
/// m (ASUP keeps all n dimensions).
inline std::vector<TimingRow> run_timing(const std::vector<std::size_t>& n_grid,
                                         std::size_t m,
                                         const std::vector<Mechanism>& mechanisms,
                                         const TimingOptions& opt = {},
                                         std::uint64_t seed = 7) {
  std::vector<TimingRow> rows;
  Rng rng(seed);
  for (std::size_t n : n_grid) {
    if (m > n) fail(ErrorCode::kInvalidArgument, "timing needs m <= n");
    DataTuple y{Vec(n), {}, 0};
    for (std::size_t j = 0; j < std::min<std::size_t>(12, n); ++j) {
      y.private_indices.push_back(j);
    }
    for (double& v : y.values) v = rng.uniform();
    y.values = scaled(y.values, 1.0 / norm(y.values));  // the bound needs ||y|| near 1
    const auto cert = compute_norm_bound(0.5, 0.1, 1.0);
    volatile double sink = 0.0;
    for (Mechanism mech : mechanisms) {
      const std::string name(mechanism_tag(mech));
      auto per_tuple = [&](auto&& fn) {
        rows.push_back({name, "per-tuple", n, m,
                        median_seconds(fn, opt.samples, opt.min_batch_seconds)});
      };
      auto preprocess = [&](auto&& fn) {
        rows.push_back({name, "preprocess", n, m,
                        median_seconds(fn, opt.preprocess_samples, opt.min_batch_seconds)});
      };
      switch (mech) {
        case Mechanism::kNrp:
          per_tuple([&] { sink = sink + sanitize_nrp(y, m, cert, rng).values[0]; });
          break;
        case Mechanism::kNrpUnbounded:
          per_tuple([&] { sink = sink + sanitize_nrp_unbounded(y, m, rng).values[0]; });
          break;
        case Mechanism::kBrp: {
          const ProjectionMatrix p = make_brp_matrix(n, m, rng);
          preprocess([&] { sink = sink + make_brp_matrix(n, m, rng).frobenius; });
          per_tuple([&] { sink = sink + sanitize_brp(y, p).values[0]; });
          break;
        }
        case Mechanism::kPca: {
          std::vector<Vec> train(2 * n, Vec(n));
          for (auto& p : train) {
            for (double& v : p) v = rng.gaussian();
          }
          const PcaModel model = fit_pca(std::span<const Vec>(train), m);
          preprocess([&] {
            sink = sink + fit_pca(std::span<const Vec>(train), m).eigenvalues[0];
          });
          per_tuple([&] { sink = sink + sanitize_pca(y, model).values[0]; });
          break;
        }
        case Mechanism::kAsup:
          per_tuple([&] { sink = sink + sanitize_asup(y, 0.1, rng).values[0]; });
          break;
        case Mechanism::kIdentity:
          per_tuple([&] { sink = sink + sanitize_identity(y).values[0]; });
          break;
      }
    }
    (void)sink;
  }
  return rows;
}

}  // namespace nrp

#endif  // NRP_TIMING_HPP_
