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

// The multi-agent world and the repeated-experiment runner.
//
// Each repetition r draws from Rng(master_seed).child(r): child 0 generates
// the data, child 1 + mechanism index drives sanitization and attack. Data is
// therefore shared between mechanisms evaluated in the same repetition, and
// repetition r never depends on how many repetitions are requested.

#ifndef NRP_SIMULATION_HPP_
#define NRP_SIMULATION_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "nrp/adversary.hpp"
#include "nrp/bounds.hpp"
#include "nrp/dataio.hpp"
#include "nrp/error.hpp"
#include "nrp/metrics.hpp"
#include "nrp/numkit.hpp"
#include "nrp/rng.hpp"
#include "nrp/sanitizers.hpp"

namespace nrp {

struct ExperimentConfig {
  std::size_t agent_count = 200;
  std::size_t observations_per_agent = 50;
  std::size_t n = 50;
  std::size_t q = 50;
  std::size_t m = 20;
  std::size_t private_count = 12;  // the first private_count coordinates
  double epsilon = 0.5;
  double gamma = 0.2;
  double cell_side = 0.0;  // 0: one tenth of the largest tuple norm
  double noise_sigma = 0.1;
  Mechanism mechanism = Mechanism::kNrp;
  AttackKind adversary = AttackKind::kAuto;
  EntryDistribution entry_distribution = EntryDistribution::kUnitUniform;
  std::size_t repetitions = 100;
  std::uint64_t master_seed = 20260101;
  BreachRule breach{};
  std::size_t k_neighbors = 10;
  ResemblanceMode resemblance_mode = ResemblanceMode::kReconstructedCloud;
  bool private_only_metrics = false;
  double asup_noise_scale = -1.0;  // negative: 2 l / sqrt(private_count)
  std::size_t inverse_draws = 256;
  bool normalize = true;  // divide by the largest tuple norm after the shift
  std::size_t threads = 1;
  std::string dataset_csv;     // empty: synthetic data
  std::string dataset_schema;  // required with dataset_csv

  void validate() const {
    auto bad = [](const std::string& why) { fail(ErrorCode::kConfigInvalid, why); };
    if (agent_count < 2) bad("agent_count must be >= 2");
    if (dataset_csv.empty()) {
      if (n < 1 || q < 1) bad("n and q must be >= 1");
      if (observations_per_agent < 1) bad("observations_per_agent must be >= 1");
      if (private_count > n) bad("private_count exceeds n");
      if (!(noise_sigma >= 0.0)) bad("noise_sigma must be >= 0");
    } else if (dataset_schema.empty()) {
      bad("dataset_csv needs dataset_schema");
    }
    if (m < 1) bad("m must be >= 1");
    if (dataset_csv.empty() && m > n) bad("m must not exceed n");
    if (!(epsilon > 0.0) || !(epsilon <= 1.0)) bad("epsilon must lie in (0, 1]");
    if (!(gamma > 0.0) || !(gamma < kGammaUpper)) bad("gamma must lie in (0, 0.405)");
    if (!(cell_side >= 0.0) || !std::isfinite(cell_side)) bad("cell_side must be >= 0");
    if (repetitions < 1) bad("repetitions must be >= 1");
    if (!(breach.radius > 0.0)) bad("breach radius must be > 0");
    if (k_neighbors < 1) bad("k_neighbors must be >= 1");
    if (k_neighbors >= agent_count) bad("k_neighbors must be below agent_count");
    if (!std::isfinite(asup_noise_scale)) bad("asup_noise_scale must be finite");
    if (inverse_draws < 1) bad("inverse_draws must be >= 1");
    if (threads < 1) bad("threads must be >= 1");
    if (is_nrp() && !is_bounded(entry_distribution)) {
      bad("NRP entry distribution must be unit-uniform or symmetric-uniform");
    }
    check_attack(mechanism, adversary);
  }

  bool is_nrp() const {
    return mechanism == Mechanism::kNrp || mechanism == Mechanism::kNrpUnbounded;
  }

  static void check_attack(Mechanism mech, AttackKind attack) {
    const bool fixed = mech == Mechanism::kBrp || mech == Mechanism::kPca;
    const bool full_dim = mech == Mechanism::kAsup || mech == Mechanism::kIdentity;
    if (attack == AttackKind::kKnownMatrix && !fixed) {
      fail(ErrorCode::kConfigInvalid, "known-matrix attack needs brp or pca");
    }
    if ((attack == AttackKind::kIdentity || attack == AttackKind::kMeanCorrected) &&
        !full_dim) {
      fail(ErrorCode::kConfigInvalid,
           std::string(attack_name(attack)) + " attack needs asup or identity");
    }
  }
};

/// Affine map applied to raw synthetic values: y = (raw + offset) * scale.
struct DataTransform {
  double offset = 0.0;
  double scale = 1.0;

  double to_raw(double y) const { return y / scale - offset; }
};

struct ObservationModel {
  Mat h;  // n x q
  double noise_sigma = 0.0;
};

struct AgentPlacement {
  std::size_t agent_id;
  double x;
  double y;
};

/// One agent per cell, row-major from the origin corner, at cell centers.
inline std::vector<AgentPlacement> place_agents(const GridSpec& grid) {
  const std::size_t k = grid.cells_per_side();
  const double l = grid.cell_side();
  std::vector<AgentPlacement> out;
  out.reserve(grid.agent_count());
  for (std::size_t id = 0; id < grid.agent_count(); ++id) {
    out.push_back({id, (static_cast<double>(id % k) + 0.5) * l,
                   (static_cast<double>(id / k) + 0.5) * l});
  }
  return out;
}

/// Least-squares fusion x_hat = argmin sum_i |y_i - H_i x|^2 for a fixed set
/// of per-agent models. The normal matrix is factored once.
class FusionCenter {
 public:
  explicit FusionCenter(std::vector<const Mat*> models) : models_(std::move(models)) {
    if (models_.empty()) fail(ErrorCode::kInsufficientData, "fusion needs a model");
    const std::size_t q = models_.front()->cols();
    Mat normal(q, q);
    for (const Mat* h : models_) {
      if (h->cols() != q) fail(ErrorCode::kDimensionMismatch, "models differ in q");
      const Mat g = gram(*h);
      for (std::size_t i = 0; i < g.values().size(); ++i) {
        normal.values()[i] += g.values()[i];
      }
    }
    auto chol = Cholesky::factor(normal);
    if (!chol) fail(ErrorCode::kRankDeficient, "stacked observation models lack full column rank");
    chol_.emplace(std::move(*chol));
  }

  /// tuples[i] is observed through models[i], in raw (untransformed) units.
  Vec estimate(std::span<const Vec> tuples) const {
    if (tuples.size() != models_.size()) {
      fail(ErrorCode::kDimensionMismatch, "one tuple per model expected");
    }
    Vec rhs(chol_->size(), 0.0);
    for (std::size_t i = 0; i < tuples.size(); ++i) {
      const Vec hy = matvec_transposed(*models_[i], tuples[i]);
      for (std::size_t j = 0; j < rhs.size(); ++j) rhs[j] += hy[j];
    }
    return chol_->solve(rhs);
  }

 private:
  std::vector<const Mat*> models_;
  std::optional<Cholesky> chol_;
};

inline Vec estimate_parameters(std::span<const Vec> tuples,
                               std::span<const ObservationModel> models) {
  std::vector<const Mat*> ptrs;
  ptrs.reserve(models.size());
  for (const auto& m : models) ptrs.push_back(&m.h);
  return FusionCenter(std::move(ptrs)).estimate(tuples);
}

/// Raw observations y = H_i x + w, w ~ N(0, sigma^2 I), for every agent.
inline std::vector<std::vector<Vec>> observe(std::span<const double> x,
                                             std::span<const ObservationModel> models,
                                             std::size_t per_agent, Rng& rng) {
  std::vector<std::vector<Vec>> out(models.size());
  for (std::size_t i = 0; i < models.size(); ++i) {
    out[i].reserve(per_agent);
    for (std::size_t k = 0; k < per_agent; ++k) {
      Vec y = matvec(models[i].h, x);
      if (models[i].noise_sigma > 0.0) {
        for (double& v : y) v += models[i].noise_sigma * rng.gaussian();
      }
      out[i].push_back(std::move(y));
    }
  }
  return out;
}

struct SyntheticWorld {
  Vec x;
  std::vector<ObservationModel> models;
  std::vector<std::vector<DataTuple>> observations;  // [agent][k], transformed
  DataTransform transform;
};

/// Shifts raw observations to be nonnegative (offset = -min entry when that is
/// positive) and, when requested, scales so the largest tuple norm is 1.
inline DataTransform fit_transform(const std::vector<std::vector<Vec>>& raw, bool normalize) {
  double lo = 0.0;
  for (const auto& agent : raw) {
    for (const auto& y : agent) {
      for (double v : y) lo = std::min(lo, v);
    }
  }
  DataTransform t;
  t.offset = -lo;
  if (normalize) {
    double alpha = 0.0;
    Vec shifted;
    for (const auto& agent : raw) {
      for (const auto& y : agent) {
        shifted = y;
        for (double& v : shifted) v += t.offset;
        alpha = std::max(alpha, norm(shifted));
      }
    }
    if (alpha > 0.0) t.scale = 1.0 / alpha;
  }
  return t;
}

inline std::vector<std::size_t> leading_indices(std::size_t count) {
  std::vector<std::size_t> idx(count);
  for (std::size_t i = 0; i < count; ++i) idx[i] = i;
  return idx;
}

inline SyntheticWorld generate_synthetic(const ExperimentConfig& cfg, Rng& rng) {
  if (!cfg.dataset_csv.empty()) {
    fail(ErrorCode::kConfigInvalid, "generate_synthetic called for a dataset config");
  }
  if (cfg.agent_count < 1 || cfg.n < 1 || cfg.q < 1 || cfg.private_count > cfg.n ||
      cfg.observations_per_agent < 1 || !(cfg.noise_sigma >= 0.0)) {
    fail(ErrorCode::kConfigInvalid, "invalid synthetic data parameters");
  }
  SyntheticWorld w;
  w.x.resize(cfg.q);
  for (double& v : w.x) v = rng.gaussian();
  w.models.reserve(cfg.agent_count);
  for (std::size_t i = 0; i < cfg.agent_count; ++i) {
    ObservationModel om{Mat(cfg.n, cfg.q), cfg.noise_sigma};
    for (double& v : om.h.values()) v = rng.uniform(-0.5, 0.5);
    w.models.push_back(std::move(om));
  }
  const auto raw = observe(w.x, w.models, cfg.observations_per_agent, rng);
  w.transform = fit_transform(raw, cfg.normalize);
  const auto priv = leading_indices(cfg.private_count);
  w.observations.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    for (const Vec& y : raw[i]) {
      DataTuple t{y, priv, i};
      for (double& v : t.values) v = (v + w.transform.offset) * w.transform.scale;
      w.observations[i].push_back(std::move(t));
    }
  }
  return w;
}

/// Everything a mechanism needs from one repetition's data.
struct RepetitionData {
  std::vector<DataTuple> snapshots;  // latest observation per agent
  std::vector<Vec> pca_training;     // every observation of every agent
  Vec alpha;                         // per-agent largest tuple norm
  double cell_side = 0.0;
  std::optional<SyntheticWorld> world;
  std::optional<FusionCenter> fusion;
  std::optional<Vec> fused_raw;  // F over the raw snapshots

  std::size_t dim() const { return snapshots.front().size(); }
};

inline RepetitionData prepare_synthetic(const ExperimentConfig& cfg, Rng data_rng) {
  RepetitionData d;
  d.world = generate_synthetic(cfg, data_rng);
  const SyntheticWorld& w = *d.world;
  d.alpha.assign(cfg.agent_count, 0.0);
  for (std::size_t i = 0; i < cfg.agent_count; ++i) {
    for (const auto& y : w.observations[i]) {
      d.alpha[i] = std::max(d.alpha[i], norm(y.values));
      d.pca_training.push_back(y.values);
    }
    d.snapshots.push_back(w.observations[i].back());
  }
  std::vector<const Mat*> hs;
  for (const auto& om : w.models) hs.push_back(&om.h);
  d.fusion.emplace(std::move(hs));
  std::vector<Vec> raw;
  for (const auto& s : d.snapshots) {
    Vec r = s.values;
    for (double& v : r) v = w.transform.to_raw(v);
    raw.push_back(std::move(r));
  }
  d.fused_raw = d.fusion->estimate(raw);
  return d;
}

/// Dataset mode: one tuple per agent, taken from the first agent_count rows.
inline RepetitionData prepare_dataset(const ExperimentConfig& cfg, const LoadedDataset& ds) {
  if (ds.tuples.size() < 2) fail(ErrorCode::kInsufficientData, "dataset has < 2 rows");
  RepetitionData d;
  const std::size_t count = std::min(cfg.agent_count, ds.tuples.size());
  double scale = 1.0;
  if (cfg.normalize) {
    double a = 0.0;
    for (std::size_t i = 0; i < count; ++i) a = std::max(a, norm(ds.tuples[i].values));
    if (a > 0.0) scale = 1.0 / a;
  }
  for (std::size_t i = 0; i < count; ++i) {
    DataTuple t = ds.tuples[i];
    t.agent_id = i;
    for (double& v : t.values) v *= scale;
    d.alpha.push_back(norm(t.values));
    d.pca_training.push_back(t.values);
    d.snapshots.push_back(std::move(t));
  }
  return d;
}

inline void finish_preparation(const ExperimentConfig& cfg, RepetitionData& d) {
  const double alpha_max = *std::max_element(d.alpha.begin(), d.alpha.end());
  d.cell_side = cfg.cell_side > 0.0 ? cfg.cell_side : 0.1 * alpha_max;
  if (!(d.cell_side > 0.0)) fail(ErrorCode::kNonPositiveInput, "all tuples are zero");
}

/// Per-repetition metric values; MetricReport holds their averages.
struct RepetitionResult {
  double breach_count = 0.0;
  double displacement = 0.0;
  double resemblance = 0.0;
  double utility = 0.0;
  double privacy = 0.0;
  double utility_in_range = 0.0;
  double fusion_gap = std::numeric_limits<double>::quiet_NaN();
  double modification = 0.0;
};

struct Variant {
  Mechanism mechanism;
  double epsilon;
  std::size_t m;
};

inline std::size_t mechanism_index(Mechanism m) { return static_cast<std::size_t>(m); }

inline double asup_scale(const ExperimentConfig& cfg, const RepetitionData& d) {
  if (cfg.asup_noise_scale >= 0.0) return cfg.asup_noise_scale;
  const std::size_t p = d.snapshots.front().private_indices.size();
  return p == 0 ? 0.0 : 2.0 * d.cell_side / std::sqrt(static_cast<double>(p));
}

inline EntryDistribution attack_family(const ExperimentConfig& cfg, Mechanism m) {
  return (m == Mechanism::kNrp || m == Mechanism::kNrpUnbounded)
             ? cfg.entry_distribution
             : EntryDistribution::kGaussianQR;
}

namespace detail {

inline std::vector<Vec> restrict_to(const std::vector<Vec>& pts,
                                    std::span<const std::size_t> idx) {
  std::vector<Vec> out;
  out.reserve(pts.size());
  for (const auto& p : pts) {
    Vec r;
    r.reserve(idx.size());
    for (std::size_t j : idx) r.push_back(p[j]);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace detail

/// Sanitize every agent's snapshot, attack it and score the result.
inline RepetitionResult evaluate_variant(const ExperimentConfig& cfg,
                                         const RepetitionData& d, const Variant& v,
                                         const Rng& rep_rng) {
  const std::size_t n = d.dim();
  const std::size_t agents = d.snapshots.size();
  if (v.m < 1 || v.m > n) fail(ErrorCode::kConfigInvalid, "m must lie in [1, n]");
  const Rng mech_rng = rep_rng.child(1 + mechanism_index(v.mechanism));
  Rng matrix_rng = mech_rng.child(1'000'000);
  Rng attack_rng = mech_rng.child(2'000'000);

  std::vector<SanitizedTuple> sanitized;
  sanitized.reserve(agents);
  std::optional<ProjectionMatrix> brp;
  std::optional<PcaModel> pca;
  const double noise = asup_scale(cfg, d);
  if (v.mechanism == Mechanism::kBrp) brp = make_brp_matrix(n, v.m, matrix_rng);
  if (v.mechanism == Mechanism::kPca) pca = fit_pca(std::span<const Vec>(d.pca_training), v.m);

  for (std::size_t i = 0; i < agents; ++i) {
    const DataTuple& y = d.snapshots[i];
    Rng rng = mech_rng.child(i);
    switch (v.mechanism) {
      case Mechanism::kNrp: {
        const auto cert = compute_norm_bound(v.epsilon, d.cell_side, d.alpha[i]);
        sanitized.push_back(sanitize_nrp(y, v.m, cert, rng, cfg.entry_distribution));
        break;
      }
      case Mechanism::kNrpUnbounded:
        sanitized.push_back(sanitize_nrp_unbounded(y, v.m, rng, cfg.entry_distribution));
        break;
      case Mechanism::kBrp: sanitized.push_back(sanitize_brp(y, *brp)); break;
      case Mechanism::kPca: sanitized.push_back(sanitize_pca(y, *pca)); break;
      case Mechanism::kAsup: sanitized.push_back(sanitize_asup(y, noise, rng)); break;
      case Mechanism::kIdentity: sanitized.push_back(sanitize_identity(y)); break;
    }
  }

  AttackKind attack = cfg.adversary == AttackKind::kAuto ? default_attack(v.mechanism)
                                                         : cfg.adversary;
  ExperimentConfig::check_attack(v.mechanism, attack);
  const EntryDistribution family = attack_family(cfg, v.mechanism);
  std::vector<Vec> recon;
  recon.reserve(agents);
  switch (attack) {
    case AttackKind::kAveragedInverse: {
      const std::size_t out_dim = sanitized.front().size();
      AveragedInverseAttack avg(n, out_dim, family, cfg.inverse_draws, attack_rng);
      for (const auto& t : sanitized) recon.push_back(avg(t).reconstructed);
      break;
    }
    case AttackKind::kRandomInverse:
      for (std::size_t i = 0; i < agents; ++i) {
        Rng r = attack_rng.child(i);
        recon.push_back(attack_random_inverse(sanitized[i], n, family, r).reconstructed);
      }
      break;
    case AttackKind::kNaiveRandom:
      for (std::size_t i = 0; i < agents; ++i) {
        Rng r = attack_rng.child(i);
        recon.push_back(attack_naive_random(sanitized[i], n, family, r).reconstructed);
      }
      break;
    case AttackKind::kKnownMatrix: {
      const KnownMatrixAttack known = pca ? KnownMatrixAttack(*pca) : KnownMatrixAttack(*brp);
      for (const auto& t : sanitized) recon.push_back(known(t).reconstructed);
      break;
    }
    case AttackKind::kIdentity:
      for (const auto& t : sanitized) recon.push_back(attack_identity(t, n).reconstructed);
      break;
    case AttackKind::kMeanCorrected: {
      const MeanCorrectedAttack mc(sanitized,
                                   v.mechanism == Mechanism::kAsup ? noise : 0.0,
                                   d.snapshots.front().private_indices.size());
      for (const auto& t : sanitized) recon.push_back(mc(t).reconstructed);
      break;
    }
    case AttackKind::kAuto: break;
  }

  std::vector<Vec> actual;
  actual.reserve(agents);
  for (const auto& y : d.snapshots) actual.push_back(y.values);

  RepetitionResult r;
  {
    const auto& priv = d.snapshots.front().private_indices;
    const bool restrict = cfg.private_only_metrics && !priv.empty();
    const std::vector<Vec> a = restrict ? detail::restrict_to(actual, priv) : actual;
    const std::vector<Vec> b = restrict ? detail::restrict_to(recon, priv) : recon;
    r.breach_count = breach_count(a, b, cfg.breach);
    r.displacement = displacement(a, b);
    r.resemblance = resemblance(a, b, cfg.k_neighbors, cfg.resemblance_mode);
  }

  const bool same_quadrant =
      v.mechanism == Mechanism::kIdentity ||
      ((v.mechanism == Mechanism::kNrp || v.mechanism == Mechanism::kNrpUnbounded) &&
       cfg.entry_distribution == EntryDistribution::kUnitUniform);
  CompensatedSum u, in_range, modification;
  for (std::size_t i = 0; i < agents; ++i) {
    const auto s = utility(d.snapshots[i], sanitized[i], same_quadrant);
    u.add(s.utility);
    in_range.add(s.in_range ? 1.0 : 0.0);
    modification.add(distance(zero_pad(sanitized[i].values, n), d.snapshots[i].values));
  }
  const double count = static_cast<double>(agents);
  r.utility = u.value() / count;
  r.privacy = 1.0 - r.utility;
  r.utility_in_range = in_range.value() / count;
  r.modification = modification.value() / count;

  if (d.fusion && d.world) {
    std::vector<Vec> raw;
    raw.reserve(agents);
    for (const auto& y : recon) {
      Vec v2 = y;
      for (double& x : v2) x = d.world->transform.to_raw(x);
      raw.push_back(std::move(v2));
    }
    r.fusion_gap = distance(d.fusion->estimate(raw), *d.fused_raw);
  }
  return r;
}

namespace detail {

/// Runs body(rep) for rep in [0, count) on up to `threads` workers; every
/// result lands in its own slot, so the output does not depend on scheduling.
template <typename Body>
void for_each_repetition(std::size_t count, std::size_t threads, Body body) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t r = 0; r < count; ++r) body(r);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r; (r = next.fetch_add(1)) < count;) {
      try {
        body(r);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(threads, count); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace detail

/// Evaluates every variant on the same data for each repetition.
/// Returns results[variant][repetition].
inline std::vector<std::vector<RepetitionResult>> evaluate_variants(
    const ExperimentConfig& cfg, std::span<const Variant> variants,
    const LoadedDataset* dataset = nullptr) {
  std::vector<std::vector<RepetitionResult>> out(
      variants.size(), std::vector<RepetitionResult>(cfg.repetitions));
  const Rng master(cfg.master_seed);
  detail::for_each_repetition(cfg.repetitions, cfg.threads, [&](std::size_t rep) {
    const Rng rep_rng = master.child(rep);
    RepetitionData d = dataset ? prepare_dataset(cfg, *dataset)
                               : prepare_synthetic(cfg, rep_rng.child(0));
    finish_preparation(cfg, d);
    for (std::size_t k = 0; k < variants.size(); ++k) {
      out[k][rep] = evaluate_variant(cfg, d, variants[k], rep_rng);
    }
  });
  return out;
}

inline MetricReport summarize_repetitions(const ExperimentConfig& cfg, const Variant& v,
                                          std::size_t agent_count,
                                          std::span<const RepetitionResult> reps) {
  CompensatedSum b, dsp, res, u, inr, fg, mod;
  for (const auto& r : reps) {
    b.add(r.breach_count);
    dsp.add(r.displacement);
    res.add(r.resemblance);
    u.add(r.utility);
    inr.add(r.utility_in_range);
    fg.add(r.fusion_gap);
    mod.add(r.modification);
  }
  const double k = static_cast<double>(reps.size());
  MetricReport m;
  m.mechanism = std::string(mechanism_tag(v.mechanism));
  const AttackKind attack =
      cfg.adversary == AttackKind::kAuto ? default_attack(v.mechanism) : cfg.adversary;
  m.attack = std::string(attack_name(attack));
  m.agent_count = agent_count;
  m.epsilon = v.epsilon;
  m.m = v.m;
  m.breach_count = b.value() / k;
  m.displacement = dsp.value() / k;
  m.resemblance = res.value() / k;
  m.utility = u.value() / k;
  m.privacy = 1.0 - m.utility;
  m.utility_in_range = inr.value() / k;
  m.fusion_gap = fg.value() / k;
  m.modification = mod.value() / k;
  m.neighborhood_radius_rule = cfg.breach.describe();
  m.resemblance_mode = cfg.resemblance_mode == ResemblanceMode::kReconstructedCloud
                           ? "reconstructed-cloud"
                           : "actual-cloud";
  m.k_neighbors = cfg.k_neighbors;
  m.repetitions = reps.size();
  return m;
}

struct ExperimentResult {
  MetricReport report;
  std::vector<RepetitionResult> repetitions;
};

inline std::optional<LoadedDataset> load_configured_dataset(const ExperimentConfig& cfg) {
  if (cfg.dataset_csv.empty()) return std::nullopt;
  return load_csv(cfg.dataset_csv, load_schema(cfg.dataset_schema));
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto dataset = load_configured_dataset(cfg);
  const Variant v{cfg.mechanism, cfg.epsilon, cfg.m};
  auto results = evaluate_variants(cfg, std::span<const Variant>(&v, 1),
                                   dataset ? &*dataset : nullptr);
  const std::size_t agents =
      dataset ? std::min(cfg.agent_count, dataset->tuples.size()) : cfg.agent_count;
  ExperimentResult out{summarize_repetitions(cfg, v, agents, results[0]),
                       std::move(results[0])};
  return out;
}

struct SweepSpec {
  std::vector<std::size_t> agent_counts{50, 100, 200, 300, 400, 500, 600};
  std::vector<Mechanism> mechanisms{Mechanism::kNrp, Mechanism::kBrp, Mechanism::kPca,
                                    Mechanism::kAsup};
  std::vector<double> epsilons;    // empty: the config's epsilon
  std::vector<std::size_t> dims;   // empty: the config's m
};

/// One report per (N, epsilon, m, mechanism), in that nesting order. All
/// mechanisms at one N see the same data in every repetition.
inline std::vector<MetricReport> run_sweep(const ExperimentConfig& base,
                                           const SweepSpec& spec) {
  const std::vector<double> eps =
      spec.epsilons.empty() ? std::vector<double>{base.epsilon} : spec.epsilons;
  const std::vector<std::size_t> dims =
      spec.dims.empty() ? std::vector<std::size_t>{base.m} : spec.dims;
  if (spec.agent_counts.empty() || spec.mechanisms.empty()) {
    fail(ErrorCode::kConfigInvalid, "sweep needs agent counts and mechanisms");
  }
  const auto dataset = load_configured_dataset(base);
  std::vector<MetricReport> rows;
  for (std::size_t agents : spec.agent_counts) {
    ExperimentConfig cfg = base;
    cfg.agent_count = agents;
    std::vector<Variant> variants;
    for (double e : eps) {
      for (std::size_t m : dims) {
        for (Mechanism mech : spec.mechanisms) {
          cfg.mechanism = mech;
          cfg.epsilon = e;
          cfg.m = m;
          if (cfg.adversary != AttackKind::kAuto) {
            ExperimentConfig::check_attack(mech, cfg.adversary);
          }
          cfg.validate();
          variants.push_back({mech, e, m});
        }
      }
    }
    const auto results = evaluate_variants(cfg, variants, dataset ? &*dataset : nullptr);
    const std::size_t used =
        dataset ? std::min(agents, dataset->tuples.size()) : agents;
    for (std::size_t k = 0; k < variants.size(); ++k) {
      rows.push_back(summarize_repetitions(cfg, variants[k], used, results[k]));
    }
  }
  return rows;
}

}  // namespace nrp

#endif  // NRP_SIMULATION_HPP_
