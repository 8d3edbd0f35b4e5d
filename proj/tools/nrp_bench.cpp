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

// nrp_bench: run, sweep, verify, timing and ingest front-end.
// Exit codes: 0 success, 2 configuration error, 3 runtime error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nrp/nrp.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  std::optional<std::string> mechanism;
  std::optional<double> radius_fraction;
  std::optional<std::size_t> k_neighbors;
  std::optional<std::size_t> repetitions;
  std::optional<std::size_t> threads;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file");
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--out", f.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--mechanism", f.mechanism, "nrp|nrp-unbounded|brp|pca|asup|identity")
      ->check(CLI::IsMember({"nrp", "nrp-unbounded", "brp", "pca", "asup", "identity"}));
  cmd->add_option("--radius-fraction", f.radius_fraction, "breach radius as a fraction of |y|");
  cmd->add_option("--k-neighbors", f.k_neighbors, "neighbors for resemblance");
  cmd->add_option("--repetitions", f.repetitions, "repetitions per grid point");
  cmd->add_option("--threads", f.threads, "worker threads for repetitions");
}

/// Defaults, then file, then environment, then flags.
nrp::ExperimentConfig resolve_config(const CommonFlags& f, nrp::SweepSpec* sweep) {
  nrp::ExperimentConfig cfg;
  if (!f.config_path.empty()) {
    const auto j = nrp::read_json_file(f.config_path);
    nrp::apply_config(j, cfg, sweep);
  }
  nrp::apply_config(nrp::environment_overrides(), cfg, sweep);
  if (f.seed) cfg.master_seed = *f.seed;
  if (f.mechanism) cfg.mechanism = *nrp::parse_mechanism(*f.mechanism);
  if (f.radius_fraction) {
    cfg.breach.mode = nrp::BreachMode::kRelative;
    cfg.breach.radius = *f.radius_fraction;
  }
  if (f.k_neighbors) cfg.k_neighbors = *f.k_neighbors;
  if (f.repetitions) cfg.repetitions = *f.repetitions;
  if (f.threads) cfg.threads = *f.threads;
  cfg.validate();
  return cfg;
}

std::string ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) nrp::fail(nrp::ErrorCode::kIoError, "cannot create " + dir + ": " + ec.message());
  return dir;
}

void write_outputs(const std::string& command, const nrp::ExperimentConfig& cfg,
                   const nrp::SweepSpec* sweep, const std::vector<nrp::MetricReport>& rows,
                   const std::string& out_dir,
                   std::chrono::system_clock::time_point started) {
  nlohmann::json cfg_json = nrp::config_to_json(cfg);
  if (sweep) {
    std::vector<std::string> mechs;
    for (auto m : sweep->mechanisms) mechs.emplace_back(nrp::mechanism_name(m));
    cfg_json["sweep_agents"] = sweep->agent_counts;
    cfg_json["sweep_mechanisms"] = mechs;
    cfg_json["sweep_epsilon"] = sweep->epsilons;
    cfg_json["sweep_m"] = sweep->dims;
  }
  const std::string digest = nrp::config_digest(command, cfg_json);
  ensure_dir(out_dir);
  const std::string csv_path = out_dir + "/results.csv";
  const std::string json_path = out_dir + "/report.json";
  std::ostringstream csv;
  nrp::write_results_csv(csv, digest, rows);
  nrp::write_text_file(csv_path, csv.str());
  nlohmann::json reports = nlohmann::json::array();
  for (const auto& r : rows) reports.push_back(nrp::report_to_json(r));
  nrp::write_text_file(json_path,
                       nlohmann::json{{"manifest", digest}, {"reports", reports}}.dump(2) + "\n");
  nrp::RunManifest manifest{command, cfg_json, digest, started,
                            std::chrono::system_clock::now(), {csv_path, json_path}};
  nrp::write_text_file(out_dir + "/manifest.json", manifest.to_json().dump(2) + "\n");
}

void print_report(const nrp::MetricReport& r) {
  std::printf("%-14s N=%-4zu eps=%.3g m=%-3zu breach=%.4f displacement=%.4f "
              "resemblance=%.4f utility=%.4f privacy=%.4f\n",
              r.mechanism.c_str(), r.agent_count, r.epsilon, r.m, r.breach_count,
              r.displacement, r.resemblance, r.utility, r.privacy);
}

int cmd_run(const CommonFlags& f) {
  const auto started = std::chrono::system_clock::now();
  const auto cfg = resolve_config(f, nullptr);
  const auto result = nrp::run_experiment(cfg);
  write_outputs("run", cfg, nullptr, {result.report}, f.out_dir, started);
  print_report(result.report);
  return 0;
}

int cmd_sweep(const CommonFlags& f) {
  const auto started = std::chrono::system_clock::now();
  nrp::SweepSpec spec;
  auto cfg = resolve_config(f, &spec);
  if (f.mechanism) spec.mechanisms = {cfg.mechanism};
  const auto rows = nrp::run_sweep(cfg, spec);
  write_outputs("sweep", cfg, &spec, rows, f.out_dir, started);
  for (const auto& r : rows) print_report(r);
  return 0;
}

struct VerifyFlags {
  double gamma = 0.2;
  std::size_t points = 100;
  std::size_t trials = 50;
  std::uint64_t seed = 20260101;
  std::optional<std::size_t> m;
  std::string out_dir = "out";
};

int cmd_verify(const VerifyFlags& f) {
  const auto started = std::chrono::system_clock::now();
  const auto lemma = nrp::run_lemma_trials(f.gamma, f.points, f.trials, f.seed, f.m);
  std::printf("points=%zu gamma=%.4g m=%zu n=%zu trials=%zu\n", lemma.point_count,
              lemma.gamma, lemma.m, lemma.n, lemma.trials.size());
  std::printf("orthonormal: min fraction %.4f (bound %.4f)\n", lemma.min_orthonormal(),
              lemma.orthonormal_bound);
  std::printf("bounded:     min fraction %.4f (bound %.4f)\n", lemma.min_bounded(),
              lemma.bounded_bound);
  if (lemma.violations() > 0) {
    std::printf("FLAG: %zu trial fractions below 1/2\n", lemma.violations());
  }

  // m2 <= m1 table over the gamma grid, m1 taken from the dimension bound.
  std::vector<double> gammas;
  for (int k = 1; k <= 8; ++k) gammas.push_back(0.05 * k);
  gammas.back() = std::min(gammas.back(), 0.4);
  nlohmann::json table = nlohmann::json::array();
  std::size_t flagged = 0;
  for (double g : gammas) {
    const std::size_t m1 = nrp::jl_min_dimension(f.points, g);
    const auto t = nrp::check_equivalence({m1}, {g});
    const auto& p = t.points.front();
    const bool bad = p.violation || !p.m2;
    flagged += bad;
    std::printf("gamma=%.2f m1=%zu m2=%s%s\n", g, m1,
                p.m2 ? std::to_string(*p.m2).c_str() : "<1",
                p.violation ? "  FLAG m2 > m1" : (!p.m2 ? "  FLAG m2 < 1" : ""));
    table.push_back({{"gamma", g},
                     {"m1", m1},
                     {"m2_real", p.m2_real},
                     {"m2", p.m2 ? nlohmann::json(*p.m2) : nlohmann::json(nullptr)},
                     {"m2_le_m1", !p.violation && p.m2.has_value()}});
  }

  ensure_dir(f.out_dir);
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& t : lemma.trials) {
    trials.push_back({{"orthonormal", t.orthonormal_fraction}, {"bounded", t.bounded_fraction}});
  }
  const nlohmann::json cfg{{"gamma", f.gamma}, {"points", f.points}, {"trials", f.trials},
                           {"seed", f.seed}, {"m", lemma.m}};
  const std::string digest = nrp::config_digest("verify", cfg);
  const nlohmann::json report{{"manifest", digest},
                              {"lemma",
                               {{"m", lemma.m},
                                {"n", lemma.n},
                                {"orthonormal_bound", lemma.orthonormal_bound},
                                {"bounded_bound", lemma.bounded_bound},
                                {"min_orthonormal", lemma.min_orthonormal()},
                                {"min_bounded", lemma.min_bounded()},
                                {"violations", lemma.violations()},
                                {"trials", trials}}},
                              {"equivalence", table},
                              {"equivalence_flags", flagged}};
  const std::string path = f.out_dir + "/verify.json";
  nrp::write_text_file(path, report.dump(2) + "\n");
  nrp::RunManifest manifest{"verify", cfg, digest, started, std::chrono::system_clock::now(),
                            {path}};
  nrp::write_text_file(f.out_dir + "/manifest.json", manifest.to_json().dump(2) + "\n");
  return 0;
}

struct TimingFlags {
  std::vector<std::size_t> n_grid{64, 128, 256, 512};
  std::size_t m = 16;
  std::vector<std::string> mechanisms{"nrp", "brp", "pca", "asup"};
  std::size_t samples = 31;
  std::string out_dir = "out";
};

int cmd_timing(const TimingFlags& f) {
  const auto started = std::chrono::system_clock::now();
  std::vector<nrp::Mechanism> mechs;
  for (const auto& s : f.mechanisms) {
    const auto m = nrp::parse_mechanism(s);
    if (!m) nrp::fail(nrp::ErrorCode::kConfigInvalid, "unknown mechanism " + s);
    mechs.push_back(*m);
  }
  const bool pinned = nrp::pin_to_current_cpu();
  nrp::TimingOptions opt;
  opt.samples = f.samples;
  const auto rows = nrp::run_timing(f.n_grid, f.m, mechs, opt);
  ensure_dir(f.out_dir);
  std::ostringstream csv;
  csv << "mechanism,phase,n,m,median_seconds\n";
  for (const auto& r : rows) {
    csv << r.mechanism << ',' << r.phase << ',' << r.n << ',' << r.m << ','
        << nrp::format_double(r.seconds) << '\n';
    std::printf("%-14s %-10s n=%-4zu m=%-3zu %.3e s\n", r.mechanism.c_str(),
                r.phase.c_str(), r.n, r.m, r.seconds);
  }
  nlohmann::json slopes = nlohmann::json::object();
  for (const auto m : mechs) {
    const std::string name(nrp::mechanism_tag(m));
    for (const char* phase : {"per-tuple", "preprocess"}) {
      try {
        const double s = nrp::loglog_slope(rows, name, phase);
        slopes[name + ":" + phase] = s;
        std::printf("slope %-14s %-10s %.3f\n", name.c_str(), phase, s);
      } catch (const nrp::Error&) {
        // Mechanism has no such phase.
      }
    }
  }
  const std::string path = f.out_dir + "/timing.csv";
  nrp::write_text_file(path, csv.str());
  const nlohmann::json cfg{{"n_grid", f.n_grid}, {"m", f.m}, {"mechanisms", f.mechanisms},
                           {"samples", f.samples}, {"pinned", pinned}};
  nrp::RunManifest manifest{"timing", cfg, nrp::config_digest("timing", cfg), started,
                            std::chrono::system_clock::now(), {path}};
  auto mj = manifest.to_json();
  mj["slopes"] = slopes;
  nrp::write_text_file(f.out_dir + "/manifest.json", mj.dump(2) + "\n");
  return 0;
}

struct IngestFlags {
  std::string schema;
  std::string csv;
  std::size_t lookalike_rows = 0;
  std::uint64_t seed = 20260101;
  bool raw = false;
  std::string out_dir = "out";
};

int cmd_ingest(const IngestFlags& f) {
  const auto started = std::chrono::system_clock::now();
  ensure_dir(f.out_dir);
  std::string schema_path = f.schema;
  std::string csv_path = f.csv;
  std::vector<std::string> outputs;
  if (f.lookalike_rows > 0) {
    nrp::Rng rng(f.seed);
    const auto look = nrp::generate_lookalike(f.lookalike_rows, rng);
    schema_path = f.out_dir + "/lookalike_schema.json";
    csv_path = f.out_dir + "/lookalike.csv";
    nrp::write_text_file(schema_path, nrp::schema_to_json(look.schema).dump(2) + "\n");
    nrp::write_text_file(csv_path, look.csv);
    outputs.push_back(schema_path);
    outputs.push_back(csv_path);
  }
  if (schema_path.empty() || csv_path.empty()) {
    nrp::fail(nrp::ErrorCode::kConfigInvalid, "ingest needs --schema and --csv, or --lookalike");
  }
  const auto schema = nrp::load_schema(schema_path);
  const auto ds = nrp::load_csv(csv_path, schema, {.shift_negative = !f.raw});
  const auto summary = nrp::summarize(ds.tuples);
  const std::string clean = f.out_dir + "/clean.csv";
  nrp::write_csv(clean, ds.column_names, ds.tuples);
  outputs.push_back(clean);
  nlohmann::json columns = nlohmann::json::array();
  for (std::size_t j = 0; j < ds.column_names.size(); ++j) {
    columns.push_back({{"name", ds.column_names[j]},
                       {"min", summary.min[j]},
                       {"max", summary.max[j]},
                       {"mean", summary.mean[j]},
                       {"shift", ds.column_shift[j]}});
  }
  const nlohmann::json out{{"tuples", summary.count},
                           {"n", ds.column_names.size()},
                           {"alpha", summary.alpha},
                           {"private_indices", schema.private_indices()},
                           {"columns", columns}};
  const std::string summary_path = f.out_dir + "/summary.json";
  nrp::write_text_file(summary_path, out.dump(2) + "\n");
  outputs.push_back(summary_path);
  const nlohmann::json cfg{{"schema", schema_path}, {"csv", csv_path}, {"raw", f.raw}};
  nrp::RunManifest manifest{"ingest", cfg, nrp::config_digest("ingest", cfg), started,
                            std::chrono::system_clock::now(), outputs};
  nrp::write_text_file(f.out_dir + "/manifest.json", manifest.to_json().dump(2) + "\n");
  std::printf("tuples=%zu n=%zu alpha=%.6g private=%zu\n", summary.count,
              ds.column_names.size(), summary.alpha, schema.private_indices().size());
  return 0;
}

int exit_code_for(nrp::ErrorCode code) {
  switch (code) {
    case nrp::ErrorCode::kConfigInvalid:
    case nrp::ErrorCode::kFileNotFound:
    case nrp::ErrorCode::kSchemaMismatch:
    case nrp::ErrorCode::kGammaOutOfRange:
      return kExitConfig;
    default:
      return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Norm-bounded random projection benchmark"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  CommonFlags sweep_flags;
  add_common(app.add_subcommand("run", "run one experiment"), run_flags);
  add_common(app.add_subcommand("sweep", "sweep agents, epsilon and m"), sweep_flags);

  VerifyFlags vf;
  auto* verify = app.add_subcommand("verify", "distance-preservation and dimension checks");
  verify->add_option("--gamma", vf.gamma, "distortion parameter")->capture_default_str();
  verify->add_option("--points", vf.points, "point count N")->capture_default_str();
  verify->add_option("--trials", vf.trials, "independent trials")->capture_default_str();
  verify->add_option("--seed", vf.seed, "master seed")->capture_default_str();
  verify->add_option("--m", vf.m, "override the projected dimension");
  verify->add_option("--out", vf.out_dir, "output directory")->capture_default_str();

  TimingFlags tf;
  auto* timing = app.add_subcommand("timing", "per-tuple cost against dimension");
  timing->add_option("--n-grid", tf.n_grid, "data dimensions")->delimiter(',');
  timing->add_option("--m", tf.m, "projected dimension")->capture_default_str();
  timing->add_option("--mechanisms", tf.mechanisms, "mechanisms to time")->delimiter(',');
  timing->add_option("--samples", tf.samples, "samples per median")->capture_default_str();
  timing->add_option("--out", tf.out_dir, "output directory")->capture_default_str();

  IngestFlags inf;
  auto* ingest = app.add_subcommand("ingest", "load and summarize a tabular dataset");
  ingest->add_option("--schema", inf.schema, "schema JSON");
  ingest->add_option("--csv", inf.csv, "CSV file");
  ingest->add_option("--lookalike", inf.lookalike_rows,
                     "generate a synthetic look-alike table with this many rows");
  ingest->add_option("--seed", inf.seed, "seed for --lookalike")->capture_default_str();
  ingest->add_flag("--raw", inf.raw, "keep negative values unshifted");
  ingest->add_option("--out", inf.out_dir, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (app.got_subcommand("run")) return cmd_run(run_flags);
    if (app.got_subcommand("sweep")) return cmd_sweep(sweep_flags);
    if (app.got_subcommand("verify")) return cmd_verify(vf);
    if (app.got_subcommand("timing")) return cmd_timing(tf);
    if (app.got_subcommand("ingest")) return cmd_ingest(inf);
  } catch (const nrp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
