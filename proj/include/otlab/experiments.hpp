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

#ifndef OTLAB_EXPERIMENTS_HPP
#define OTLAB_EXPERIMENTS_HPP

#include <string>
#include <vector>

#include "otlab/config.hpp"
#include "otlab/record.hpp"
#include "otlab/trainer.hpp"

namespace otlab {

struct ExperimentCadence {
  std::int64_t snapshot_every = 5000;  // checkpoints + W2 probes
  std::int64_t sample_every = 6000;    // generated-sample scatters
  std::int64_t arc_every = 5000;       // rate-of-change distributions
  int scatter_samples = 2000;
  int arc_pairs = 10000;
  int w2_cloud = 512;
  int final_w2_draws = 5;
  int eval_samples = 10000;  // final mode report
};

// One full training run with diagnostics: trains on the 2D benchmark,
// snapshots ARC distributions, scatter data, empirical W2 probes, and the
// final mode report. With config.output_dir set everything is persisted
// (metrics.ndjson, checkpoints/, CSV series, run.json); otherwise the run
// stays in memory. Diagnostics draw from their own seeded streams, so the
// training trajectory is untouched by the cadence.
RunRecord run_experiment(const TrainerConfig& config,
                         const ExperimentCadence& cadence = {});

// Deterministically generates n samples from the generator (chunked).
Mat generate_samples(GeneratorNet& generator, int n, int z_dim,
                     std::mt19937_64& rng);

// Reads run.json + config.json and verifies the recorded config hash
// matches the stored config. Throws on mismatch.
void verify_run_dir_integrity(const std::string& run_dir);

struct CellRunOutcome {
  std::uint64_t seed = 0;
  std::string dir;
  std::string status;
  double covered_modes = std::numeric_limits<double>::quiet_NaN();
  double w2 = std::numeric_limits<double>::quiet_NaN();
};

struct CellSummary {
  SweepCell cell;
  TrainerConfig config;  // resolved cell config (seed field unused)
  std::vector<CellRunOutcome> runs;
  int n_finished = 0;
  double covered_mean = std::numeric_limits<double>::quiet_NaN();
  double covered_std = std::numeric_limits<double>::quiet_NaN();
  double w2_mean = std::numeric_limits<double>::quiet_NaN();
  double w2_std = std::numeric_limits<double>::quiet_NaN();
};

// Cross product of cells x seeds, optionally across worker threads (each
// run touches only its own directory). Individual failures are recorded in
// the cell summary without aborting the sweep. Writes table.csv and
// sweep.json under spec.output_dir.
std::vector<CellSummary> run_sweep(const SweepSpec& spec, int parallel = 1,
                                   const ExperimentCadence& cadence = {});

}  // namespace otlab

#endif  // OTLAB_EXPERIMENTS_HPP
