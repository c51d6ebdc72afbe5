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

#ifndef OTLAB_TRAINER_HPP
#define OTLAB_TRAINER_HPP

#include <cstdint>
#include <functional>
#include <random>
#include <string>

#include "otlab/adam.hpp"
#include "otlab/losses.hpp"
#include "otlab/nets.hpp"
#include "otlab/presets.hpp"
#include "otlab/record.hpp"
#include "otlab/toy_data.hpp"

namespace otlab {

struct TrainerConfig {
  ModelPreset preset;
  std::int64_t total_iters = 30000;
  int k_v = 1;  // potential updates per outer iteration
  int k_t = 1;  // generator updates per outer iteration
  int batch_size = 128;
  double lr_generator = 2e-4;
  double lr_potential = 1e-4;
  double adam_beta1 = 0.5;
  double adam_beta2 = 0.9;
  // Optional gradient-norm clip (0 disables). The alternative reading of
  // the WGAN baseline's 0.1 clip; the preset default clips weights instead.
  double grad_clip_norm = 0.0;
  std::uint64_t seed = 0;
  int aux_noise_dim = 2;
  int hidden_width = 128;
  int n_blocks = 3;
  std::uint64_t config_hash = 0;
  std::string output_dir;  // empty: keep everything in memory

  // Fills the preset and its family's Adam momentum default.
  static TrainerConfig for_preset(const ModelPreset& preset);
  // Throws std::invalid_argument listing every violated field.
  void validate() const;
};

struct TrainState {
  NetworkParams nets;
  Adam opt_generator;
  Adam opt_potential;
  std::int64_t iter = 0;
  ModelPreset preset;
  std::mt19937_64 rng;
};

TrainState make_initial_state(const TrainerConfig& config);

// One outer iteration of the alternating scheme: k_v potential updates on
// fresh batches (weight clipping applied after each when the preset asks),
// then k_t generator updates on fresh batches. Advances state.iter and
// returns the step's metrics (wallclock left to the caller).
MetricsRecord train_step(TrainState& state, const TrainerConfig& config,
                         DataSource& source);

// Called after every iteration (and once at iteration 0) so the experiment
// layer can snapshot diagnostics at its own cadence. Hooks must not draw
// from state.rng: the training stream owns it.
using SnapshotHook =
    std::function<void(TrainState& state, std::int64_t iter, RunRecord& rec)>;

// Executes total_iters train steps, checkpointing every snapshot_every
// iterations (plus the initial and final state). A non-finite or exploding
// loss aborts the run: the partial record is flushed, the status carries the
// iteration and offending term. Bitwise-reproducible for a fixed seed on a
// fixed platform.
RunRecord run_training(const TrainerConfig& config, DataSource& source,
                       std::int64_t snapshot_every,
                       const SnapshotHook& hook = {});

// Serializes network parameters and optimizer moments at the current
// iteration. Restore rebuilds a state created with the same config.
void save_checkpoint_file(const std::string& path, const TrainerConfig& config,
                          TrainState& state);
void restore_from_checkpoint(const std::string& path, TrainState& state);

}  // namespace otlab

#endif  // OTLAB_TRAINER_HPP
