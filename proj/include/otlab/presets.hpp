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

#ifndef OTLAB_PRESETS_HPP
#define OTLAB_PRESETS_HPP

#include <string>
#include <string_view>
#include <vector>

#include "otlab/conjugate.hpp"
#include "otlab/schedule.hpp"

namespace otlab {

enum class PresetName {
  WGAN,
  WGAN_GP,
  OTM,
  UOTM_NoCost,
  UOTM_SP,
  UOTM_KL,
  UOTM_SD,
};

enum class Regularizer { None, R1, GradientPenalty, WeightClip };

const char* preset_name_str(PresetName name);
const char* regularizer_name(Regularizer r);
std::vector<std::string> valid_preset_names();

// One row of the unified model family: cost intensity, the conjugates
// applied to the two potential terms, the regularizer and its strength, and
// the divergence-weight schedule. g3 stays Identity throughout.
struct ModelPreset {
  PresetName name = PresetName::UOTM_SP;
  double tau = 0.01;
  ConjugatePair g1 = ConjugatePair::softplus();
  ConjugatePair g2 = ConjugatePair::softplus();
  ConjugatePair g3 = ConjugatePair::identity();
  Regularizer regularizer = Regularizer::None;
  double reg_lambda = 0.0;
  double clip_bound = 0.1;
  DivergenceSchedule schedule;  // Constant alpha=1 unless scheduled
  double default_beta1 = 0.5;  // Adam momentum for this family

  // Checks the family invariants (e.g. WGAN must clip with Identity pairs).
  // Throws std::invalid_argument naming every violation.
  void validate() const;

  // Toy-scale defaults for each named row of the framework.
  static ModelPreset by_name(std::string_view name);
  static ModelPreset by_name(PresetName name);
};

}  // namespace otlab

#endif  // OTLAB_PRESETS_HPP
