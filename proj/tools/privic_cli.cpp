//
// Copyright 2026 The PRIVIC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Command-line front end for the PRIVIC pipeline. Subcommands:
//   ingest    load a check-in dump onto a grid and report frequencies
//   compare   privacy/utility sweep: BA against grid Laplace at matched eps
//   elastic   obfuscation heatmaps for an isolated vs a well-covered location
//   privic    full multi-cycle collection runs, per-cycle utility tables
//   markov    mesh-projected transition analysis of the estimate sequence
//   metrics   channel diagnostics (leakage, distortion, audit) per beta
//
// Experiments are described by flags and/or a JSON config file (--config);
// flags win. Exit codes: 0 ok, 2 bad configuration, 3 data problem,
// 4 capability exceeded.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "privic/errors.hpp"
#include "privic/estimation.hpp"
#include "privic/geo.hpp"
#include "privic/markov.hpp"
#include "privic/mechanisms.hpp"
#include "privic/metrics.hpp"
#include "privic/presets.hpp"
#include "privic/privic.hpp"
#include "privic/prob.hpp"
#include "privic/rng.hpp"
#include "privic/serialize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string config_path;
  std::string out_dir = "out";
  std::string grid_spec = "12x16";
  std::string bbox_spec;  // empty: Paris preset
  std::string synthetic = "city";
  std::string dataset_path;
  std::string vulnerable = "2,12";
  std::string strong;  // empty: densest cell of the prior
  std::string mechanism = "both";
  std::string truth_weights;  // markov: comma list, empty = uniform
  std::vector<double> betas;
  std::vector<double> epsilons{0.4, 1.2, 1.6, 2.0};
  std::vector<std::uint64_t> seeds;
  std::size_t cycles = 15;
  std::size_t n = 10000;
  std::size_t ba_iters = 0;  // 0: tolerance-driven
  std::size_t ibu_iters = 0;
  double ba_tol = 1e-10;
  double ibu_tol = 1e-10;
  std::size_t ba_max_iters = 5000;
  std::size_t ibu_max_iters = 5000;
  bool fixed_dataset = false;
  int radius = 2;
  std::size_t mesh_m = 2;
  std::size_t mesh_k = 4;
  std::size_t trials = 2000;
  std::size_t chain_steps = 100000;
  std::size_t excursions = 10000;
  double spacing = 0.5;
};

std::vector<double> parse_double_list(const std::string& s, const char* what) {
  std::vector<double> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ',') {
      const std::string field = s.substr(start, i - start);
      start = i + 1;
      if (field.empty())
        throw privic::ConfigError(std::string(what) + ": empty field in '" + s + "'");
      const char* begin = field.c_str();
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end != begin + field.size() || !std::isfinite(v))
        throw privic::ConfigError(std::string(what) + ": bad number '" + field + "'");
      out.push_back(v);
    }
  }
  return out;
}

std::pair<std::size_t, std::size_t> parse_grid(const std::string& s) {
  const auto x = s.find('x');
  if (x == std::string::npos)
    throw privic::ConfigError("--grid: expected RxC, got '" + s + "'");
  const auto rows = parse_double_list(s.substr(0, x), "--grid");
  const auto cols = parse_double_list(s.substr(x + 1), "--grid");
  if (rows.size() != 1 || cols.size() != 1 || rows[0] < 1 || cols[0] < 1 ||
      rows[0] != std::floor(rows[0]) || cols[0] != std::floor(cols[0]))
    throw privic::ConfigError("--grid: expected RxC, got '" + s + "'");
  return {static_cast<std::size_t>(rows[0]), static_cast<std::size_t>(cols[0])};
}

privic::GridSpace make_grid(const Options& opt) {
  const auto [rows, cols] = parse_grid(opt.grid_spec);
  privic::BoundingBox bbox = privic::paris_bbox();
  if (!opt.bbox_spec.empty()) {
    const auto v = parse_double_list(opt.bbox_spec, "--bbox");
    if (v.size() != 4)
      throw privic::ConfigError("--bbox: expected lat_min,lat_max,lon_min,lon_max");
    bbox = {v[0], v[1], v[2], v[3]};
  }
  return privic::GridSpace(bbox, rows, cols);
}

std::size_t parse_cell(const std::string& s, const privic::GridSpace& grid,
                       const char* what) {
  const auto v = parse_double_list(s, what);
  if (v.size() != 2 || v[0] != std::floor(v[0]) || v[1] != std::floor(v[1]) ||
      v[0] < 0 || v[1] < 0 || v[0] >= static_cast<double>(grid.rows()) ||
      v[1] >= static_cast<double>(grid.cols()))
    throw privic::ConfigError(std::string(what) + ": expected row,col inside the grid");
  return static_cast<std::size_t>(v[0]) * grid.cols() + static_cast<std::size_t>(v[1]);
}

struct TruthSource {
  privic::TruthSampler sampler;
  privic::Pmf dist;      // what estimates are scored against
  privic::Pmf ba_prior;  // full-support prior for channel synthesis
  std::string label;
};

TruthSource make_truth(const Options& opt, const privic::GridSpace& grid) {
  const std::size_t m = grid.cell_count();
  if (!opt.dataset_path.empty()) {
    if (fs::exists(opt.dataset_path)) {
      const auto ingest = privic::ingest_checkins(opt.dataset_path, grid.bbox());
      if (ingest.records.empty())
        throw privic::DataError("dataset has no records inside the bounding box");
      auto samples = privic::locate_all(grid, ingest.records);
      auto sampler = privic::TruthSampler::from_samples(std::move(samples), m);
      privic::Pmf dist = sampler.distribution();
      privic::Pmf ba_prior = dist;
      if (!dist.full_support()) {
        std::cerr << "warning: dataset leaves some cells empty; smoothing the "
                     "channel-synthesis prior (1e-3 uniform mix)\n";
        std::vector<double> w(m);
        for (std::size_t i = 0; i < m; ++i)
          w[i] = 0.999 * dist[i] + 0.001 / static_cast<double>(m);
        ba_prior = privic::Pmf::from_weights(w);
      }
      return {std::move(sampler), std::move(dist), std::move(ba_prior),
              fs::path(opt.dataset_path).filename().string()};
    }
    std::cerr << "warning: dataset '" << opt.dataset_path
              << "' not found; falling back to synthetic prior '" << opt.synthetic
              << "'\n";
  }
  privic::Pmf dist = privic::synthetic_prior(grid, opt.synthetic);
  privic::Pmf ba_prior = dist;
  if (!dist.full_support()) {
    std::cerr << "warning: synthetic prior missing full support; smoothing the "
                 "channel-synthesis prior (1e-3 uniform mix)\n";
    std::vector<double> w(m);
    for (std::size_t i = 0; i < m; ++i)
      w[i] = 0.999 * dist[i] + 0.001 / static_cast<double>(m);
    ba_prior = privic::Pmf::from_weights(w);
  }
  return {privic::TruthSampler::from_pmf(dist), std::move(dist),
          std::move(ba_prior), opt.synthetic};
}

privic::BaConfig ba_config(const Options& opt, double beta) {
  if (opt.ba_iters > 0) return privic::BaConfig::fixed(beta, opt.ba_iters);
  privic::BaConfig cfg;
  cfg.beta = beta;
  cfg.max_iters = opt.ba_max_iters;
  cfg.tol = opt.ba_tol;
  return cfg;
}

privic::IbuConfig ibu_config(const Options& opt) {
  if (opt.ibu_iters > 0) return privic::IbuConfig::fixed(opt.ibu_iters);
  privic::IbuConfig cfg;
  cfg.max_iters = opt.ibu_max_iters;
  cfg.tol = opt.ibu_tol;
  return cfg;
}

fs::path out_file(const Options& opt, const std::string& name) {
  fs::create_directories(opt.out_dir);
  return fs::path(opt.out_dir) / name;
}

void note_written(const fs::path& p) { std::cout << "wrote " << p.string() << '\n'; }

std::string fmt(double v) { return privic::format_double(v); }

void write_pmf_csv(const Options& opt, const std::string& name,
                   const privic::GridSpace& grid, const privic::Pmf& pmf) {
  privic::CsvWriter csv(out_file(opt, name),
                        {"cell", "row", "col", "x_km", "y_km", "p"});
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    csv.row({std::to_string(i), std::to_string(i / grid.cols()),
             std::to_string(i % grid.cols()), fmt(grid.centroid(i)[0]),
             fmt(grid.centroid(i)[1]), fmt(pmf[i])});
  }
  note_written(out_file(opt, name));
}

// ---------------------------------------------------------------- subcommands

int run_ingest(const Options& opt) {
  if (opt.dataset_path.empty())
    throw privic::ConfigError("ingest: --path is required");
  const privic::GridSpace grid = make_grid(opt);
  const auto ingest = privic::ingest_checkins(opt.dataset_path, grid.bbox());
  if (ingest.records.empty())
    throw privic::DataError("ingest: no records inside the bounding box");

  const auto samples = privic::locate_all(grid, ingest.records);
  const privic::Pmf freq = privic::empirical_pmf(samples, grid.cell_count());

  json summary{{"dataset", opt.dataset_path},
               {"total_rows", ingest.total_rows},
               {"kept", ingest.records.size()},
               {"malformed_rows", ingest.malformed_rows},
               {"outside_bbox", ingest.outside_bbox},
               {"grid", privic::to_json(grid)}};
  privic::write_json(out_file(opt, "ingest.json"), summary);
  note_written(out_file(opt, "ingest.json"));
  write_pmf_csv(opt, "empirical.csv", grid, freq);
  std::cout << "kept " << ingest.records.size() << " of " << ingest.total_rows
            << " rows (" << ingest.malformed_rows << " malformed, "
            << ingest.outside_bbox << " outside bbox)\n";
  return 0;
}

// The BA arm is the full iterative collection pipeline (channels start from
// a uniform guess of the prior and sharpen cycle by cycle); the Laplace arm
// is a one-shot collection, since its channel does not depend on any prior.
// Both arms estimate with the same per-round IBU budget.
int run_compare(const Options& opt) {
  const privic::GridSpace grid = make_grid(opt);
  const TruthSource truth = make_truth(opt, grid);
  const std::size_t m = grid.cell_count();
  const std::vector<double> betas =
      opt.betas.empty() ? std::vector<double>{0.2, 0.5, 0.7, 1.0, 2.0, 5.0}
                        : opt.betas;
  const std::vector<std::uint64_t> seeds =
      opt.seeds.empty() ? std::vector<std::uint64_t>{1, 2, 3, 4, 5} : opt.seeds;
  const std::size_t ba_iters = opt.ba_iters > 0 ? opt.ba_iters : 8;
  const std::size_t ibu_iters = opt.ibu_iters > 0 ? opt.ibu_iters : 10;

  privic::CsvWriter csv(out_file(opt, "compare.csv"),
                        {"mechanism", "beta", "epsilon", "seed", "emd_km",
                         "mi_nats", "avg_distortion_km", "epsilon_audit"});
  for (double beta : betas) {
    const double eps = 2.0 * beta;
    const privic::Channel lap = privic::laplace_channel(eps, grid.dist());
    const double lap_mi = privic::mutual_information(truth.ba_prior, lap);
    const double lap_avgd =
        privic::avg_distortion(truth.ba_prior, lap, grid.dist());
    const double lap_audit = privic::verify_geo_ind(lap, grid.dist());
    for (std::size_t si = 0; si < seeds.size(); ++si) {
      privic::PrivicConfig cfg;
      cfg.beta = beta;
      cfg.cycles = opt.cycles;
      cfg.n_per_cycle = opt.n;
      cfg.ba = privic::BaConfig::fixed(beta, ba_iters);
      cfg.ibu = privic::IbuConfig::fixed(ibu_iters);
      cfg.seed = seeds[si];
      const privic::PrivicTrace trace = privic::privic_run(
          privic::Pmf::uniform(m), truth.sampler, cfg, grid.dist());
      const privic::CycleRecord& last = trace.cycles.back();
      const double ba_util =
          privic::statistical_utility(last.estimate, truth.dist, grid.dist());
      csv.row({"ba", fmt(beta), fmt(eps), std::to_string(seeds[si]),
               fmt(ba_util), fmt(last.mi), fmt(last.avg_distortion),
               fmt(last.epsilon_audit)});

      const std::uint64_t lap_seed = privic::derive_seed(seeds[si], 1u << 20);
      const auto raw = truth.sampler.draw(opt.n, privic::derive_seed(lap_seed, 0));
      const auto noisy =
          privic::obfuscate(raw, lap, privic::derive_seed(lap_seed, 1));
      const privic::Pmf q = privic::empirical_pmf(noisy, m);
      const privic::IbuResult est = privic::ibu_run(
          privic::Pmf::uniform(m), lap, q, privic::IbuConfig::fixed(ibu_iters));
      const double lap_util =
          privic::statistical_utility(est.estimate, truth.dist, grid.dist());
      csv.row({"laplace", fmt(beta), fmt(eps), std::to_string(seeds[si]),
               fmt(lap_util), fmt(lap_mi), fmt(lap_avgd), fmt(lap_audit)});
    }
  }
  note_written(out_file(opt, "compare.csv"));
  return 0;
}

int run_elastic(const Options& opt) {
  const privic::GridSpace grid = make_grid(opt);
  const TruthSource truth = make_truth(opt, grid);
  const std::size_t vulnerable = parse_cell(opt.vulnerable, grid, "--vulnerable");
  std::size_t strong = 0;
  if (opt.strong.empty()) {
    for (std::size_t i = 1; i < truth.dist.size(); ++i)
      if (truth.dist[i] > truth.dist[strong]) strong = i;
  } else {
    strong = parse_cell(opt.strong, grid, "--strong");
  }
  if (strong == vulnerable)
    throw privic::ConfigError("elastic: vulnerable and strong cells coincide");

  const privic::Pmf island =
      privic::plant_island(grid, truth.dist, vulnerable, opt.radius);
  // The island swallows its neighbourhood; synthesis still needs full support.
  std::vector<double> w(island.size());
  for (std::size_t i = 0; i < island.size(); ++i)
    w[i] = 0.999 * island[i] + 0.001 / static_cast<double>(island.size());
  const privic::Pmf ba_prior = privic::Pmf::from_weights(w);

  write_pmf_csv(opt, "island_prior.csv", grid, island);
  privic::CsvWriter csv(out_file(opt, "heatmaps.csv"),
                        {"mechanism", "epsilon", "location", "cell", "row", "col",
                         "x_km", "y_km", "prob"});
  struct Loc {
    const char* name;
    std::size_t cell;
  };
  const Loc locs[] = {{"vulnerable", vulnerable}, {"strong", strong}};
  for (double eps : opt.epsilons) {
    const privic::BaResult ba =
        privic::ba_run(ba_prior, privic::Channel::uniform(grid.cell_count()),
                       ba_config(opt, eps / 2.0), grid.dist());
    const privic::Channel lap = privic::laplace_channel(eps, grid.dist());
    struct Arm {
      const char* name;
      const privic::Channel* channel;
    };
    const Arm arms[] = {{"ba", &ba.channel}, {"laplace", &lap}};
    for (const Arm& arm : arms) {
      for (const Loc& loc : locs) {
        for (std::size_t y = 0; y < grid.cell_count(); ++y) {
          csv.row({arm.name, fmt(eps), loc.name, std::to_string(y),
                   std::to_string(y / grid.cols()), std::to_string(y % grid.cols()),
                   fmt(grid.centroid(y)[0]), fmt(grid.centroid(y)[1]),
                   fmt((*arm.channel)(loc.cell, y))});
        }
      }
    }
  }
  note_written(out_file(opt, "heatmaps.csv"));
  privic::write_json(out_file(opt, "grid.json"), privic::to_json(grid));
  note_written(out_file(opt, "grid.json"));
  return 0;
}

int run_privic(const Options& opt) {
  const privic::GridSpace grid = make_grid(opt);
  Options opt_sampling = opt;
  if (opt.fixed_dataset && opt.dataset_path.empty())
    throw privic::ConfigError("privic: --fixed-dataset needs --path");
  const TruthSource truth = make_truth(opt_sampling, grid);
  const std::vector<double> betas =
      opt.betas.empty() ? std::vector<double>{1.0} : opt.betas;
  const std::vector<std::uint64_t> seeds =
      opt.seeds.empty() ? std::vector<std::uint64_t>{1, 2, 3, 4, 5} : opt.seeds;

  privic::CsvWriter csv(out_file(opt, "privic.csv"),
                        {"N", "round", "beta", "emd_km"});
  json all_runs = json::array();
  for (double beta : betas) {
    for (std::size_t round = 0; round < seeds.size(); ++round) {
      privic::PrivicConfig cfg;
      cfg.beta = beta;
      cfg.cycles = opt.cycles;
      cfg.n_per_cycle = opt.n;
      cfg.ba = ba_config(opt, beta);
      cfg.ibu = ibu_config(opt);
      cfg.seed = seeds[round];
      const privic::PrivicTrace trace =
          privic::privic_run(privic::Pmf::uniform(grid.cell_count()),
                             truth.sampler, cfg, grid.dist(), truth.dist);
      for (const privic::CycleRecord& rec : trace.cycles)
        csv.row({std::to_string(rec.cycle), std::to_string(round + 1), fmt(beta),
                 fmt(rec.emd_to_truth.value())});
      json run = privic::to_json(trace);
      run["beta"] = beta;
      run["round"] = round + 1;
      run["seed"] = seeds[round];
      run["dataset"] = truth.label;
      all_runs.push_back(std::move(run));
    }
  }
  note_written(out_file(opt, "privic.csv"));
  privic::write_json(out_file(opt, "privic_trace.json"), all_runs);
  note_written(out_file(opt, "privic_trace.json"));
  return 0;
}

int run_markov(const Options& opt) {
  const privic::SimplexMesh mesh = privic::enumerate_simplex(opt.mesh_m, opt.mesh_k);

  // The state space is m abstract points on a line, `spacing` km apart.
  privic::Matrix dist(opt.mesh_m, opt.mesh_m, 0.0);
  for (std::size_t i = 0; i < opt.mesh_m; ++i)
    for (std::size_t j = 0; j < opt.mesh_m; ++j)
      dist(i, j) = opt.spacing *
                   std::abs(static_cast<double>(i) - static_cast<double>(j));

  privic::Pmf truth = opt.truth_weights.empty()
                          ? privic::Pmf::uniform(opt.mesh_m)
                          : privic::Pmf::from_weights(parse_double_list(
                                opt.truth_weights, "--truth"));
  if (truth.size() != opt.mesh_m)
    throw privic::ConfigError("markov: --truth must list m weights");

  privic::PrivicConfig cfg;
  cfg.beta = opt.betas.empty() ? 1.0 : opt.betas.front();
  cfg.cycles = 1;
  cfg.n_per_cycle = opt.n;
  cfg.ba = ba_config(opt, cfg.beta);
  cfg.ibu = ibu_config(opt);
  const std::uint64_t seed = opt.seeds.empty() ? 1 : opt.seeds.front();

  const privic::TransitionEstimate est = privic::estimate_transition(
      mesh, cfg, privic::TruthSampler::from_pmf(truth), dist, opt.trials, seed);
  privic::write_json(out_file(opt, "transition.json"), privic::to_json(est));
  note_written(out_file(opt, "transition.json"));

  const privic::StationaryResult stat = privic::stationary_distribution(est.phi);
  json stat_json{{"unique", stat.unique}, {"iterations", stat.iterations}};
  if (stat.psi) stat_json["psi"] = stat.psi->values();
  privic::write_json(out_file(opt, "stationary.json"), stat_json);
  note_written(out_file(opt, "stationary.json"));
  if (!stat.unique) {
    std::cerr << "warning: estimated chain is reducible; skipping hitting-time "
                 "and occupancy reports\n";
    return 0;
  }

  bool positive = true;
  for (double v : est.phi.data())
    if (!(v > 0.0)) positive = false;
  if (positive) {
    const auto reports = privic::hitting_time_check(
        est.phi, opt.excursions, privic::derive_seed(seed, 1ull << 32));
    privic::CsvWriter csv(out_file(opt, "hitting.csv"),
                          {"state", "psi", "inv_expected_tau", "sigma"});
    for (const auto& r : reports)
      csv.row({std::to_string(r.state), fmt(r.psi), fmt(r.inv_expected_tau),
               fmt(r.sigma)});
    note_written(out_file(opt, "hitting.csv"));
  } else {
    std::cerr << "warning: estimated chain has zero entries; skipping the "
                 "hitting-time report\n";
  }

  const privic::Pmf occupancy = privic::chain_occupancy(
      est.phi, opt.chain_steps, 0, privic::derive_seed(seed, 1ull << 33));
  privic::CsvWriter occ(out_file(opt, "occupancy.csv"),
                        {"state", "occupancy", "psi"});
  for (std::size_t s = 0; s < occupancy.size(); ++s)
    occ.row({std::to_string(s), fmt(occupancy[s]), fmt((*stat.psi)[s])});
  note_written(out_file(opt, "occupancy.csv"));
  return 0;
}

int run_metrics(const Options& opt) {
  const privic::GridSpace grid = make_grid(opt);
  const TruthSource truth = make_truth(opt, grid);
  const std::vector<double> betas =
      opt.betas.empty() ? std::vector<double>{0.5, 1.0, 2.0} : opt.betas;
  const bool want_ba = opt.mechanism == "both" || opt.mechanism == "ba";
  const bool want_lap = opt.mechanism == "both" || opt.mechanism == "laplace";
  if (!want_ba && !want_lap)
    throw privic::ConfigError("metrics: --mechanism must be ba, laplace or both");

  privic::CsvWriter csv(out_file(opt, "metrics.csv"),
                        {"metric", "value", "units", "beta", "cycle", "dataset",
                         "seed"});
  auto emit = [&](const std::string& metric, double value,
                  const std::string& units, double beta) {
    csv.row({metric, fmt(value), units, fmt(beta), "", truth.label, ""});
  };
  for (double beta : betas) {
    if (want_ba) {
      const privic::BaResult ba = privic::ba_run(
          truth.ba_prior, privic::Channel::uniform(grid.cell_count()),
          ba_config(opt, beta), grid.dist());
      emit("ba_mi", ba.mi, "nats", beta);
      emit("ba_avg_distortion", ba.avg_distortion, "km", beta);
      emit("ba_epsilon_audit", privic::verify_geo_ind(ba.channel, grid.dist()),
           "per_km", beta);
      emit("ba_elastic_residual",
           privic::elastic_residual(ba.channel, truth.ba_prior, beta, grid.dist()),
           "prob", beta);
      emit("ba_output_shift",
           privic::emd_cost(privic::push_forward(truth.ba_prior, ba.channel),
                            truth.ba_prior, grid.dist()),
           "km", beta);
    }
    if (want_lap) {
      const double eps = 2.0 * beta;
      const privic::Channel lap = privic::laplace_channel(eps, grid.dist());
      emit("laplace_mi", privic::mutual_information(truth.ba_prior, lap), "nats",
           beta);
      emit("laplace_avg_distortion",
           privic::avg_distortion(truth.ba_prior, lap, grid.dist()), "km", beta);
      emit("laplace_epsilon_audit", privic::verify_geo_ind(lap, grid.dist()),
           "per_km", beta);
      emit("laplace_elastic_residual",
           privic::elastic_residual(lap, truth.ba_prior, beta, grid.dist()),
           "prob", beta);
      emit("laplace_output_shift",
           privic::emd_cost(privic::push_forward(truth.ba_prior, lap),
                            truth.ba_prior, grid.dist()),
           "km", beta);
    }
  }
  note_written(out_file(opt, "metrics.csv"));
  return 0;
}

// ------------------------------------------------------------- configuration

template <typename T>
void cfg_override(const json& cfg, const char* key, const CLI::Option* opt,
                  T* value) {
  if (opt != nullptr && opt->count() > 0) return;  // flags beat config
  if (cfg.contains(key)) *value = cfg.at(key).get<T>();
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"PRIVIC: private location collection with Blahut-Arimoto "
               "channels and iterative Bayesian estimation"};
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--config", opt.config_path,
                 "JSON experiment description; flags override");
  auto* o_out = app.add_option("--out", opt.out_dir, "output directory");
  auto* o_grid = app.add_option("--grid", opt.grid_spec, "grid as RxC (rows x cols)");
  auto* o_bbox = app.add_option("--bbox", opt.bbox_spec,
                                "lat_min,lat_max,lon_min,lon_max (default Paris)");
  auto* o_synth = app.add_option("--synthetic", opt.synthetic,
                                 "synthetic prior: uniform | city | gauss:... | point:i");
  auto* o_path = app.add_option("--path", opt.dataset_path, "check-in dump (TSV)");
  auto* o_beta = app.add_option("--beta", opt.betas, "loss parameter sweep")
                     ->delimiter(',');
  auto* o_seed = app.add_option("--seed", opt.seeds, "seeds, one per round")
                     ->delimiter(',');
  auto* o_cycles = app.add_option("--cycles", opt.cycles, "collection cycles");
  auto* o_n = app.add_option("--n", opt.n, "samples per cycle/run");
  auto* o_ba_iters = app.add_option("--ba-iters", opt.ba_iters,
                                    "fixed channel-synthesis iterations (0: tol)");
  auto* o_ibu_iters = app.add_option("--ibu-iters", opt.ibu_iters,
                                     "fixed estimation iterations (0: tol)");
  auto* o_ba_tol = app.add_option("--ba-tol", opt.ba_tol, "channel-synthesis tolerance");
  auto* o_ibu_tol = app.add_option("--ibu-tol", opt.ibu_tol, "estimation tolerance");
  auto* o_eps = app.add_option("--epsilon", opt.epsilons, "epsilon sweep (elastic)")
                    ->delimiter(',');
  auto* o_vuln = app.add_option("--vulnerable", opt.vulnerable,
                                "isolated location as row,col (elastic)");
  auto* o_strong = app.add_option("--strong", opt.strong,
                                  "well-covered location as row,col (elastic)");
  auto* o_radius = app.add_option("--radius", opt.radius,
                                  "island radius in cells (elastic)");
  auto* o_mech = app.add_option("--mechanism", opt.mechanism,
                                "metrics: ba | laplace | both");
  auto* o_fixed = app.add_flag("--fixed-dataset", opt.fixed_dataset,
                               "bootstrap the same ingested dataset every cycle");
  auto* o_m = app.add_option("--m", opt.mesh_m, "markov: space size (<= 4)");
  auto* o_k = app.add_option("--k", opt.mesh_k, "markov: mesh steps (<= 20)");
  auto* o_trials = app.add_option("--trials", opt.trials, "markov: trials per state");
  auto* o_chain = app.add_option("--chain-steps", opt.chain_steps,
                                 "markov: simulated chain length");
  auto* o_exc = app.add_option("--excursions", opt.excursions,
                               "markov: return excursions per state");
  auto* o_spacing = app.add_option("--spacing", opt.spacing,
                                   "markov: point spacing, km");
  auto* o_truth = app.add_option("--truth", opt.truth_weights,
                                 "markov: true distribution weights w1,...,wm");

  auto* sub_ingest = app.add_subcommand("ingest", "grid a check-in dump");
  auto* sub_compare = app.add_subcommand("compare", "BA vs Laplace utility sweep");
  auto* sub_elastic = app.add_subcommand("elastic", "island obfuscation heatmaps");
  auto* sub_privic = app.add_subcommand("privic", "multi-cycle collection runs");
  auto* sub_markov = app.add_subcommand("markov", "estimate-chain analysis");
  auto* sub_metrics = app.add_subcommand("metrics", "channel diagnostics");
  for (CLI::App* sub : {sub_ingest, sub_compare, sub_elastic, sub_privic,
                        sub_markov, sub_metrics})
    sub->fallthrough();

  try {
    app.parse(argc, argv);

    if (!opt.config_path.empty()) {
      std::ifstream in(opt.config_path);
      if (!in)
        throw privic::ConfigError("cannot open config " + opt.config_path);
      json cfg;
      try {
        cfg = json::parse(in);
      } catch (const json::exception& e) {
        throw privic::ConfigError(std::string("config: ") + e.what());
      }
      cfg_override(cfg, "out", o_out, &opt.out_dir);
      cfg_override(cfg, "grid", o_grid, &opt.grid_spec);
      cfg_override(cfg, "bbox", o_bbox, &opt.bbox_spec);
      cfg_override(cfg, "synthetic", o_synth, &opt.synthetic);
      cfg_override(cfg, "path", o_path, &opt.dataset_path);
      cfg_override(cfg, "betas", o_beta, &opt.betas);
      cfg_override(cfg, "seeds", o_seed, &opt.seeds);
      cfg_override(cfg, "cycles", o_cycles, &opt.cycles);
      cfg_override(cfg, "n", o_n, &opt.n);
      cfg_override(cfg, "ba_iters", o_ba_iters, &opt.ba_iters);
      cfg_override(cfg, "ibu_iters", o_ibu_iters, &opt.ibu_iters);
      cfg_override(cfg, "ba_tol", o_ba_tol, &opt.ba_tol);
      cfg_override(cfg, "ibu_tol", o_ibu_tol, &opt.ibu_tol);
      cfg_override(cfg, "epsilons", o_eps, &opt.epsilons);
      cfg_override(cfg, "vulnerable", o_vuln, &opt.vulnerable);
      cfg_override(cfg, "strong", o_strong, &opt.strong);
      cfg_override(cfg, "radius", o_radius, &opt.radius);
      cfg_override(cfg, "mechanism", o_mech, &opt.mechanism);
      cfg_override(cfg, "fixed_dataset", o_fixed, &opt.fixed_dataset);
      cfg_override(cfg, "m", o_m, &opt.mesh_m);
      cfg_override(cfg, "k", o_k, &opt.mesh_k);
      cfg_override(cfg, "trials", o_trials, &opt.trials);
      cfg_override(cfg, "chain_steps", o_chain, &opt.chain_steps);
      cfg_override(cfg, "excursions", o_exc, &opt.excursions);
      cfg_override(cfg, "spacing", o_spacing, &opt.spacing);
      cfg_override(cfg, "truth", o_truth, &opt.truth_weights);
    }

    if (sub_ingest->parsed()) return run_ingest(opt);
    if (sub_compare->parsed()) return run_compare(opt);
    if (sub_elastic->parsed()) return run_elastic(opt);
    if (sub_privic->parsed()) return run_privic(opt);
    if (sub_markov->parsed()) return run_markov(opt);
    if (sub_metrics->parsed()) return run_metrics(opt);
    throw privic::ConfigError("no subcommand given");
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const privic::CapabilityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const privic::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const privic::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
