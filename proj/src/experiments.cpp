// Copyright 2026 The otlab Authors. All Rights Reserved.
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

#include "otlab/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

namespace otlab {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Decorrelated diagnostic stream per (seed, iter, tag); keeps the training
// RNG untouched.
std::mt19937_64 diag_rng(std::uint64_t seed, std::int64_t iter,
                         std::uint64_t tag) {
  return std::mt19937_64(seed * 0x9E3779B97F4A7C15ull +
                         static_cast<std::uint64_t>(iter + 1) *
                             0xBF58476D1CE4E5B9ull +
                         tag);
}

void write_scatter_csv(const fs::path& path, const Mat& pts) {
  std::ofstream out(path, std::ios::trunc);
  out << "x,y\n";
  for (Eigen::Index k = 0; k < pts.cols(); ++k) {
    out << fmt(pts(0, k)) << "," << fmt(pts(1, k)) << "\n";
  }
}

void write_arc_csv(const fs::path& path, const ArcDistribution& arc) {
  std::ofstream out(path, std::ios::trunc);
  out << "arc\n";
  for (const double v : arc.samples) out << fmt(v) << "\n";
}

nlohmann::ordered_json mode_report_json(const ModeReport& rep, int n_samples) {
  nlohmann::ordered_json j;
  j["covered_modes"] = rep.covered_modes;
  j["high_quality_fraction"] = rep.high_quality_fraction;
  j["per_mode_counts"] = rep.per_mode_counts;
  j["n_samples"] = n_samples;
  return j;
}

}  // namespace

Mat generate_samples(GeneratorNet& generator, int n, int z_dim,
                     std::mt19937_64& rng) {
  Mat out(2, n);
  const int chunk = 2048;
  for (int at = 0; at < n; at += chunk) {
    const int len = std::min(chunk, n - at);
    const Mat x = sample_source(len, 2, rng);
    const Mat z = sample_source(len, z_dim, rng);
    out.middleCols(at, len) = generator.forward(x, z);
  }
  return out;
}

RunRecord run_experiment(const TrainerConfig& config,
                         const ExperimentCadence& cadence) {
  config.validate();
  const bool persist = !config.output_dir.empty();
  const fs::path dir = config.output_dir;
  if (persist) {
    fs::create_directories(dir);
    std::ofstream cfg_out(dir / "config.json", std::ios::trunc);
    cfg_out << run_config_json(config).dump(2) << "\n";
    // data scatter for figure overlays
    GaussianMixtureTarget target;
    auto rng = diag_rng(config.seed, -1, 0xDA7Aull);
    write_scatter_csv(dir / "data_samples.csv",
                      target.sample(cadence.scatter_samples, rng));
  }

  ToyDataSource source;
  source.aux_dim = config.aux_noise_dim;
  GaussianMixtureTarget target;

  const SnapshotHook hook = [&](TrainState& state, std::int64_t iter,
                                RunRecord& record) {
    if (iter % cadence.arc_every == 0) {
      auto rng = diag_rng(config.seed, iter, 0xA2Cull);
      ArcDistribution arc = arc_distribution(
          state.nets.potential, kDataRegion, cadence.arc_pairs, target, rng);
      arc.iteration = iter;
      if (persist) {
        write_arc_csv(dir / ("arc_" + std::to_string(iter) + ".csv"), arc);
      }
      // keep summaries; drop raw samples from memory except persist path
      arc.samples.clear();
      arc.samples.shrink_to_fit();
      record.arc_series.push_back(std::move(arc));
    }
    if (iter % cadence.sample_every == 0 && persist) {
      auto rng = diag_rng(config.seed, iter, 0x5CA77E2ull);
      write_scatter_csv(
          dir / ("samples_" + std::to_string(iter) + ".csv"),
          generate_samples(state.nets.generator, cadence.scatter_samples,
                           config.aux_noise_dim, rng));
    }
    if (iter % cadence.snapshot_every == 0 && iter > 0) {
      auto rng = diag_rng(config.seed, iter, 0x33ull);
      const Mat gen = generate_samples(state.nets.generator, cadence.w2_cloud,
                                       config.aux_noise_dim, rng);
      const Mat real = target.sample(cadence.w2_cloud, rng);
      record.w2_series.emplace_back(iter, empirical_w2(gen, real));
    }
    if (iter == config.total_iters) {
      // Final diagnostics: the hook is the last point with state access.
      auto rng_eval = diag_rng(config.seed, iter, 0xE7A1ull);
      const Mat eval_samples =
          generate_samples(state.nets.generator, cadence.eval_samples,
                           config.aux_noise_dim, rng_eval);
      record.final_mode_report = mode_report(eval_samples, target);

      double w2_sum = 0.0;
      for (int d = 0; d < cadence.final_w2_draws; ++d) {
        auto rng = diag_rng(config.seed, iter, 0xF1A0ull + d);
        const Mat gen = generate_samples(
            state.nets.generator, cadence.w2_cloud, config.aux_noise_dim, rng);
        const Mat real = target.sample(cadence.w2_cloud, rng);
        w2_sum += empirical_w2(gen, real);
      }
      record.final_w2 = w2_sum / cadence.final_w2_draws;

      if (persist) {
        auto rng_tp = diag_rng(config.seed, iter, 0x7Bull);
        const Mat x = sample_source(cadence.w2_cloud, 2, rng_tp);
        const Mat z =
            sample_source(cadence.w2_cloud, config.aux_noise_dim, rng_tp);
        const auto pairs = transport_pairs(state.nets.generator, x, z);
        std::ofstream tp_out(dir / "transport_pairs.csv", std::ios::trunc);
        tp_out << "sx,sy,tx,ty\n";
        for (const auto& [src, dst] : pairs) {
          tp_out << fmt(src(0)) << "," << fmt(src(1)) << "," << fmt(dst(0))
                 << "," << fmt(dst(1)) << "\n";
        }
        std::ofstream mode_out(dir / "mode_report.json", std::ios::trunc);
        mode_out << mode_report_json(*record.final_mode_report,
                                     cadence.eval_samples)
                        .dump(2)
                 << "\n";
      }
    }
  };

  RunRecord record =
      run_training(config, source, cadence.snapshot_every, hook);

  if (persist) {
    std::ofstream w2_out(dir / "w2_series.csv", std::ios::trunc);
    w2_out << "iter,w2\n";
    for (const auto& [iter, w2] : record.w2_series) {
      w2_out << iter << "," << fmt(w2) << "\n";
    }
  }

  if (persist) {
    nlohmann::ordered_json j;
    j["config_hash"] = record.config_hash;
    j["status"] = record.status;
    j["final_w2"] = record.final_w2;
    j["checkpoints"] = record.checkpoint_files;
    nlohmann::ordered_json arcs = nlohmann::ordered_json::array();
    for (const auto& arc : record.arc_series) {
      nlohmann::ordered_json a;
      a["iteration"] = arc.iteration;
      a["min"] = arc.min;
      a["q1"] = arc.q1;
      a["median"] = arc.median;
      a["q3"] = arc.q3;
      a["max"] = arc.max;
      arcs.push_back(a);
    }
    j["arc_summaries"] = arcs;
    if (record.final_mode_report) {
      j["mode_report"] = mode_report_json(*record.final_mode_report,
                                          cadence.eval_samples);
    }
    std::ofstream run_out(dir / "run.json", std::ios::trunc);
    run_out << j.dump(2) << "\n";
  }
  return record;
}

void verify_run_dir_integrity(const std::string& run_dir) {
  const fs::path dir = run_dir;
  std::ifstream cfg_in(dir / "config.json");
  if (!cfg_in) {
    throw std::runtime_error("no config.json in " + run_dir);
  }
  nlohmann::json cfg_json;
  cfg_in >> cfg_json;
  const TrainerConfig cfg = parse_run_config(cfg_json);

  std::ifstream run_in(dir / "run.json");
  if (!run_in) {
    throw std::runtime_error("no run.json in " + run_dir +
                             " (no completed records present)");
  }
  nlohmann::json run_json;
  run_in >> run_json;
  const auto recorded = run_json.at("config_hash").get<std::uint64_t>();
  if (recorded != config_hash(cfg)) {
    throw std::runtime_error(
        "config hash mismatch in " + run_dir + ": run.json has " +
        std::to_string(recorded) + " but config.json hashes to " +
        std::to_string(config_hash(cfg)));
  }
}

std::vector<CellSummary> run_sweep(const SweepSpec& spec, int parallel,
                                   const ExperimentCadence& cadence) {
  if (spec.output_dir.empty()) {
    throw std::invalid_argument("run_sweep: output_dir is required");
  }
  const fs::path dir = spec.output_dir;
  fs::create_directories(dir / "cells");

  const std::vector<SweepCell> cells = spec.cells();
  std::vector<CellSummary> summaries(cells.size());
  struct Task {
    std::size_t cell_idx;
    std::size_t run_idx;
    TrainerConfig config;
    bool invalid = false;
    std::string invalid_reason;
  };
  std::vector<Task> tasks;
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    CellSummary& summary = summaries[ci];
    summary.cell = cells[ci];
    summary.config = cells[ci].apply(spec.base);
    summary.runs.resize(spec.seeds.size());
    for (std::size_t si = 0; si < spec.seeds.size(); ++si) {
      Task task;
      task.cell_idx = ci;
      task.run_idx = si;
      task.config = summary.config;
      task.config.seed = spec.seeds[si];
      task.config.output_dir =
          (dir / "cells" / cells[ci].label() /
           ("seed_" + std::to_string(spec.seeds[si])))
              .string();
      try {
        task.config.validate();
        task.config.config_hash = config_hash(task.config);
      } catch (const std::exception& e) {
        task.invalid = true;
        task.invalid_reason = e.what();
      }
      tasks.push_back(std::move(task));
    }
  }

  std::atomic<std::size_t> next{0};
  const int workers = std::max(1, parallel);
  const auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= tasks.size()) return;
      const Task& task = tasks[k];
      CellRunOutcome& outcome = summaries[task.cell_idx].runs[task.run_idx];
      outcome.seed = task.config.seed;
      outcome.dir = task.config.output_dir;
      if (task.invalid) {
        outcome.status = "invalid: " + task.invalid_reason;
        continue;
      }
      try {
        const RunRecord record = run_experiment(task.config, cadence);
        outcome.status = record.status;
        if (record.final_mode_report) {
          outcome.covered_modes = record.final_mode_report->covered_modes;
        }
        outcome.w2 = record.final_w2;
      } catch (const std::exception& e) {
        outcome.status = std::string("failed: ") + e.what();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Aggregate per cell over finished runs.
  for (CellSummary& summary : summaries) {
    std::vector<double> covered, w2s;
    for (const CellRunOutcome& run : summary.runs) {
      if (run.status == "finished") {
        covered.push_back(run.covered_modes);
        w2s.push_back(run.w2);
      }
    }
    summary.n_finished = static_cast<int>(covered.size());
    const auto mean_std = [](const std::vector<double>& xs, double& mean,
                             double& sd) {
      if (xs.empty()) return;
      mean = 0.0;
      for (const double x : xs) mean += x;
      mean /= xs.size();
      sd = 0.0;
      for (const double x : xs) sd += (x - mean) * (x - mean);
      sd = std::sqrt(sd / xs.size());
    };
    mean_std(covered, summary.covered_mean, summary.covered_std);
    mean_std(w2s, summary.w2_mean, summary.w2_std);
  }

  // Merged table, written once by the coordinator.
  std::ofstream table(dir / "table.csv", std::ios::trunc);
  table << "cell,tau,reg_lambda,alpha_min,alpha_max,schedule_kind,n_seeds,"
           "n_finished,covered_mean,covered_std,w2_mean,w2_std,statuses\n";
  for (const CellSummary& s : summaries) {
    const TrainerConfig& c = s.config;
    table << s.cell.label() << "," << fmt(c.preset.tau) << ","
          << fmt(c.preset.reg_lambda) << ","
          << fmt(c.preset.schedule.alpha_min) << ","
          << fmt(c.preset.schedule.alpha_max) << ","
          << schedule_kind_name(c.preset.schedule.kind) << ","
          << s.runs.size() << "," << s.n_finished << ","
          << fmt(s.covered_mean) << "," << fmt(s.covered_std) << ","
          << fmt(s.w2_mean) << "," << fmt(s.w2_std) << ",";
    for (std::size_t r = 0; r < s.runs.size(); ++r) {
      if (r) table << ";";
      std::string st = s.runs[r].status;
      for (char& ch : st) {
        if (ch == ',' || ch == '\n') ch = ' ';
      }
      table << st;
    }
    table << "\n";
  }

  nlohmann::ordered_json sj;
  sj["preset"] = preset_name_str(spec.base.preset.name);
  sj["seeds"] = spec.seeds;
  nlohmann::ordered_json cells_json = nlohmann::ordered_json::array();
  for (const CellSummary& s : summaries) {
    nlohmann::ordered_json cj;
    cj["label"] = s.cell.label();
    if (s.cell.tau) cj["tau"] = *s.cell.tau;
    if (s.cell.reg_lambda) cj["reg_lambda"] = *s.cell.reg_lambda;
    if (s.cell.alpha_range) {
      cj["alpha_range"] = {s.cell.alpha_range->first,
                           s.cell.alpha_range->second};
    }
    if (s.cell.schedule_kind) {
      cj["schedule_kind"] = schedule_kind_name(*s.cell.schedule_kind);
    }
    cj["n_finished"] = s.n_finished;
    cj["covered_mean"] = s.covered_mean;
    cj["w2_mean"] = s.w2_mean;
    nlohmann::ordered_json runs = nlohmann::ordered_json::array();
    for (const CellRunOutcome& run : s.runs) {
      nlohmann::ordered_json rj;
      rj["seed"] = run.seed;
      rj["dir"] = run.dir;
      rj["status"] = run.status;
      rj["covered_modes"] = run.covered_modes;
      rj["w2"] = run.w2;
      runs.push_back(rj);
    }
    cj["runs"] = runs;
    cells_json.push_back(cj);
  }
  sj["cells"] = cells_json;
  std::ofstream sweep_out(dir / "sweep.json", std::ios::trunc);
  sweep_out << sj.dump(2) << "\n";

  return summaries;
}

}  // namespace otlab
