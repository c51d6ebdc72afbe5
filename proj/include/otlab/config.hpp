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

#ifndef OTLAB_CONFIG_HPP
#define OTLAB_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "otlab/trainer.hpp"

namespace otlab {

// Canonical key=value rendering of a resolved TrainerConfig. Two configs
// hash equal iff every resolved field (seed included) matches.
std::string canonical_config_string(const TrainerConfig& config);
std::uint64_t fnv1a64(const std::string& bytes);
std::uint64_t config_hash(const TrainerConfig& config);

// Resolves a run config JSON: preset defaults, then "overrides", then the
// optional seed/output_dir. Collects every violated field into one
// std::invalid_argument. Schema:
//   { "preset": "UOTM_SP", "seed": 0, "output_dir": "runs/x",
//     "overrides": { "tau": .., "reg_lambda": .., "regularizer": "R1",
//                    "clip_bound": .., "total_iters": .., "k_v": ..,
//                    "k_t": .., "batch_size": .., "lr_generator": ..,
//                    "lr_potential": .., "adam_beta1": .., "adam_beta2": ..,
//                    "aux_noise_dim": .., "hidden_width": .., "n_blocks": ..,
//                    "schedule": { "kind": "Linear", "alpha_min": ..,
//                                  "alpha_max": .., "end_iter": ..,
//                                  "step_period": .. } } }
TrainerConfig parse_run_config(const nlohmann::json& j);
TrainerConfig load_run_config(const std::string& path);

// Serializes the resolved config (for the run directory's config.json).
nlohmann::json run_config_json(const TrainerConfig& config);

// One sweep axis combination.
struct SweepCell {
  std::optional<double> tau;
  std::optional<double> reg_lambda;
  std::optional<std::pair<double, double>> alpha_range;
  std::optional<ScheduleKind> schedule_kind;

  std::string label() const;
  TrainerConfig apply(TrainerConfig base) const;
};

struct SweepSpec {
  TrainerConfig base;
  std::vector<double> taus;
  std::vector<double> lambdas;
  std::vector<std::pair<double, double>> alpha_ranges;
  std::vector<ScheduleKind> schedule_kinds;
  std::vector<std::uint64_t> seeds;
  std::string output_dir;

  std::vector<SweepCell> cells() const;  // cross product of the set axes
};

// Schema: { "preset": .., "base_overrides": {..}, "seeds": [..],
//           "output_dir": ..,
//           "axes": { "tau": [..], "reg_lambda": [..],
//                     "alpha_range": [[lo,hi],..],
//                     "schedule_kind": ["Linear",..] } }
// Requires at least one axis and a non-empty seed list.
SweepSpec parse_sweep_config(const nlohmann::json& j);
SweepSpec load_sweep_config(const std::string& path);

}  // namespace otlab

#endif  // OTLAB_CONFIG_HPP
