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

#include "otlab/presets.hpp"

#include <sstream>
#include <stdexcept>

namespace otlab {

const char* preset_name_str(PresetName name) {
  switch (name) {
    case PresetName::WGAN: return "WGAN";
    case PresetName::WGAN_GP: return "WGAN_GP";
    case PresetName::OTM: return "OTM";
    case PresetName::UOTM_NoCost: return "UOTM_NoCost";
    case PresetName::UOTM_SP: return "UOTM_SP";
    case PresetName::UOTM_KL: return "UOTM_KL";
    case PresetName::UOTM_SD: return "UOTM_SD";
  }
  return "?";
}

const char* regularizer_name(Regularizer r) {
  switch (r) {
    case Regularizer::None: return "None";
    case Regularizer::R1: return "R1";
    case Regularizer::GradientPenalty: return "GradientPenalty";
    case Regularizer::WeightClip: return "WeightClip";
  }
  return "?";
}

std::vector<std::string> valid_preset_names() {
  return {"WGAN",    "WGAN_GP", "OTM",    "UOTM_NoCost",
          "UOTM_SP", "UOTM_KL", "UOTM_SD"};
}

namespace {
DivergenceSchedule constant_alpha_one() {
  return DivergenceSchedule{ScheduleKind::Constant, 1.0, 1.0, 1, 1};
}
}  // namespace

void ModelPreset::validate() const {
  std::ostringstream err;
  if (g3.kind != PairKind::Identity) err << " g3 must be Identity;";
  if (tau < 0.0) err << " tau must be non-negative;";
  if (reg_lambda < 0.0) err << " reg_lambda must be non-negative;";
  if (clip_bound <= 0.0) err << " clip_bound must be positive;";
  try {
    schedule.validate();
  } catch (const std::invalid_argument& e) {
    err << " " << e.what() << ";";
  }

  const bool identity_pair = g1.kind == PairKind::Identity &&
                             g2.kind == PairKind::Identity;
  switch (name) {
    case PresetName::WGAN:
      if (tau != 0.0) err << " WGAN requires tau=0;";
      if (!identity_pair) err << " WGAN requires Identity pairs;";
      if (regularizer != Regularizer::WeightClip)
        err << " WGAN requires WeightClip;";
      break;
    case PresetName::WGAN_GP:
      if (tau != 0.0) err << " WGAN_GP requires tau=0;";
      if (!identity_pair) err << " WGAN_GP requires Identity pairs;";
      if (regularizer != Regularizer::GradientPenalty)
        err << " WGAN_GP requires GradientPenalty;";
      break;
    case PresetName::OTM:
      if (!(tau > 0.0)) err << " OTM requires tau>0;";
      if (!identity_pair) err << " OTM requires Identity pairs;";
      break;
    case PresetName::UOTM_NoCost:
      if (tau != 0.0) err << " UOTM_NoCost requires tau=0;";
      if (g1.kind != PairKind::Softplus || g2.kind != PairKind::Softplus)
        err << " UOTM_NoCost requires Softplus pairs;";
      break;
    case PresetName::UOTM_SP:
      if (!(tau > 0.0)) err << " UOTM_SP requires tau>0;";
      if (g1.kind != PairKind::Softplus || g2.kind != PairKind::Softplus)
        err << " UOTM_SP requires Softplus pairs;";
      break;
    case PresetName::UOTM_KL:
      if (!(tau > 0.0)) err << " UOTM_KL requires tau>0;";
      if (g1.kind != PairKind::KLExp || g2.kind != PairKind::KLExp)
        err << " UOTM_KL requires KLExp pairs;";
      break;
    case PresetName::UOTM_SD:
      if (!(tau > 0.0)) err << " UOTM_SD requires tau>0;";
      if (g1.kind != PairKind::Softplus || g2.kind != PairKind::Softplus)
        err << " UOTM_SD requires Softplus pairs;";
      if (schedule.is_constant())
        err << " UOTM_SD requires a non-constant schedule;";
      break;
  }
  const std::string msg = err.str();
  if (!msg.empty()) {
    throw std::invalid_argument(std::string("invalid ModelPreset:") + msg);
  }
}

ModelPreset ModelPreset::by_name(PresetName name) {
  ModelPreset p;
  p.name = name;
  p.schedule = constant_alpha_one();
  switch (name) {
    case PresetName::WGAN:
      p.tau = 0.0;
      p.g1 = p.g2 = ConjugatePair::identity();
      p.regularizer = Regularizer::WeightClip;
      p.reg_lambda = 0.0;
      p.clip_bound = 0.1;
      p.default_beta1 = 0.0;
      break;
    case PresetName::WGAN_GP:
      p.tau = 0.0;
      p.g1 = p.g2 = ConjugatePair::identity();
      p.regularizer = Regularizer::GradientPenalty;
      p.reg_lambda = 5.0;
      p.default_beta1 = 0.0;
      break;
    case PresetName::OTM:
      p.tau = 0.05;
      p.g1 = p.g2 = ConjugatePair::identity();
      p.regularizer = Regularizer::R1;
      p.reg_lambda = 5.0;
      p.default_beta1 = 0.0;
      break;
    case PresetName::UOTM_NoCost:
      p.tau = 0.0;
      p.g1 = p.g2 = ConjugatePair::softplus();
      p.regularizer = Regularizer::None;
      p.default_beta1 = 0.5;
      break;
    case PresetName::UOTM_SP:
      p.tau = 0.01;
      p.g1 = p.g2 = ConjugatePair::softplus();
      p.regularizer = Regularizer::None;
      p.default_beta1 = 0.5;
      break;
    case PresetName::UOTM_KL:
      p.tau = 0.01;
      p.g1 = p.g2 = ConjugatePair::klexp();
      p.regularizer = Regularizer::None;
      p.default_beta1 = 0.5;
      break;
    case PresetName::UOTM_SD:
      p.tau = 0.01;
      p.g1 = p.g2 = ConjugatePair::softplus();
      p.regularizer = Regularizer::None;
      p.default_beta1 = 0.5;
      // Ramp over the first three quarters of the default 30K run, the same
      // fraction of training the full-scale setup uses. The step period
      // spreads the five doublings from 0.2 to 5 across that ramp.
      p.schedule =
          DivergenceSchedule{ScheduleKind::Linear, 0.2, 5.0, 22500, 4500};
      break;
  }
  return p;
}

ModelPreset ModelPreset::by_name(std::string_view name) {
  for (const std::string& valid : valid_preset_names()) {
    if (name == valid) {
      if (name == "WGAN") return by_name(PresetName::WGAN);
      if (name == "WGAN_GP") return by_name(PresetName::WGAN_GP);
      if (name == "OTM") return by_name(PresetName::OTM);
      if (name == "UOTM_NoCost") return by_name(PresetName::UOTM_NoCost);
      if (name == "UOTM_SP") return by_name(PresetName::UOTM_SP);
      if (name == "UOTM_KL") return by_name(PresetName::UOTM_KL);
      if (name == "UOTM_SD") return by_name(PresetName::UOTM_SD);
    }
  }
  std::ostringstream err;
  err << "unknown preset '" << name << "' (valid:";
  for (const std::string& valid : valid_preset_names()) err << " " << valid;
  err << ")";
  throw std::invalid_argument(err.str());
}

}  // namespace otlab
