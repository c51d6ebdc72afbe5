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

#include "otlab/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace otlab {

namespace {
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Regularizer regularizer_from_name(const std::string& name) {
  if (name == "None") return Regularizer::None;
  if (name == "R1") return Regularizer::R1;
  if (name == "GradientPenalty") return Regularizer::GradientPenalty;
  if (name == "WeightClip") return Regularizer::WeightClip;
  throw std::invalid_argument(
      "unknown regularizer '" + name +
      "' (valid: None, R1, GradientPenalty, WeightClip)");
}
}  // namespace

std::string canonical_config_string(const TrainerConfig& c) {
  std::ostringstream os;
  os << "preset=" << preset_name_str(c.preset.name)
     << ";tau=" << fmt(c.preset.tau) << ";g1=" << c.preset.g1.name()
     << ";g2=" << c.preset.g2.name() << ";g3=" << c.preset.g3.name()
     << ";regularizer=" << regularizer_name(c.preset.regularizer)
     << ";reg_lambda=" << fmt(c.preset.reg_lambda)
     << ";clip_bound=" << fmt(c.preset.clip_bound)
     << ";schedule=" << schedule_kind_name(c.preset.schedule.kind)
     << ";alpha_min=" << fmt(c.preset.schedule.alpha_min)
     << ";alpha_max=" << fmt(c.preset.schedule.alpha_max)
     << ";end_iter=" << c.preset.schedule.schedule_end_iter
     << ";step_period=" << c.preset.schedule.step_period
     << ";total_iters=" << c.total_iters << ";k_v=" << c.k_v
     << ";k_t=" << c.k_t << ";batch_size=" << c.batch_size
     << ";lr_generator=" << fmt(c.lr_generator)
     << ";lr_potential=" << fmt(c.lr_potential)
     << ";adam_beta1=" << fmt(c.adam_beta1)
     << ";adam_beta2=" << fmt(c.adam_beta2)
     << ";grad_clip_norm=" << fmt(c.grad_clip_norm) << ";seed=" << c.seed
     << ";aux_noise_dim=" << c.aux_noise_dim
     << ";hidden_width=" << c.hidden_width << ";n_blocks=" << c.n_blocks;
  return os.str();
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const unsigned char ch : bytes) {
    hash ^= ch;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::uint64_t config_hash(const TrainerConfig& config) {
  return fnv1a64(canonical_config_string(config));
}

namespace {

// Pulls a numeric/integer field if present, recording type errors.
template <class T>
void take(const nlohmann::json& j, const char* key, T& out,
          std::vector<std::string>& errors) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    errors.push_back(std::string(key) + ": wrong type");
  }
}

void apply_overrides(TrainerConfig& cfg, const nlohmann::json& ov,
                     std::vector<std::string>& errors) {
  static const std::vector<std::string> known = {
      "tau",          "reg_lambda",   "regularizer", "clip_bound",
      "total_iters",  "k_v",          "k_t",         "batch_size",
      "lr_generator", "lr_potential", "adam_beta1",  "adam_beta2",
      "grad_clip_norm", "aux_noise_dim", "hidden_width", "n_blocks",
      "schedule"};
  for (const auto& [key, value] : ov.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      errors.push_back("overrides." + key + ": unknown field");
    }
  }
  take(ov, "tau", cfg.preset.tau, errors);
  take(ov, "reg_lambda", cfg.preset.reg_lambda, errors);
  take(ov, "clip_bound", cfg.preset.clip_bound, errors);
  if (ov.contains("regularizer")) {
    try {
      cfg.preset.regularizer =
          regularizer_from_name(ov.at("regularizer").get<std::string>());
    } catch (const std::exception& e) {
      errors.push_back(std::string("overrides.regularizer: ") + e.what());
    }
  }
  take(ov, "total_iters", cfg.total_iters, errors);
  take(ov, "k_v", cfg.k_v, errors);
  take(ov, "k_t", cfg.k_t, errors);
  take(ov, "batch_size", cfg.batch_size, errors);
  take(ov, "lr_generator", cfg.lr_generator, errors);
  take(ov, "lr_potential", cfg.lr_potential, errors);
  take(ov, "adam_beta1", cfg.adam_beta1, errors);
  take(ov, "adam_beta2", cfg.adam_beta2, errors);
  take(ov, "grad_clip_norm", cfg.grad_clip_norm, errors);
  take(ov, "aux_noise_dim", cfg.aux_noise_dim, errors);
  take(ov, "hidden_width", cfg.hidden_width, errors);
  take(ov, "n_blocks", cfg.n_blocks, errors);
  if (ov.contains("schedule")) {
    const nlohmann::json& sj = ov.at("schedule");
    DivergenceSchedule s = cfg.preset.schedule;
    if (sj.contains("kind")) {
      try {
        s.kind = schedule_kind_from_name(sj.at("kind").get<std::string>());
      } catch (const std::exception& e) {
        errors.push_back(std::string("overrides.schedule.kind: ") + e.what());
      }
    }
    take(sj, "alpha_min", s.alpha_min, errors);
    take(sj, "alpha_max", s.alpha_max, errors);
    take(sj, "end_iter", s.schedule_end_iter, errors);
    take(sj, "step_period", s.step_period, errors);
    cfg.preset.schedule = s;
  }
}

}  // namespace

TrainerConfig parse_run_config(const nlohmann::json& j) {
  std::vector<std::string> errors;
  if (!j.contains("preset")) {
    throw std::invalid_argument("config: missing required field 'preset'");
  }
  TrainerConfig cfg;
  try {
    cfg = TrainerConfig::for_preset(
        ModelPreset::by_name(j.at("preset").get<std::string>()));
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (j.contains("overrides")) apply_overrides(cfg, j.at("overrides"), errors);
  take(j, "seed", cfg.seed, errors);
  if (j.contains("output_dir")) {
    try {
      cfg.output_dir = j.at("output_dir").get<std::string>();
    } catch (const nlohmann::json::exception&) {
      errors.push_back("output_dir: wrong type");
    }
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    errors.push_back(e.what());
  }
  if (!errors.empty()) {
    std::string msg = "config validation failed:";
    for (const std::string& e : errors) msg += "\n  - " + e;
    throw std::invalid_argument(msg);
  }
  cfg.config_hash = config_hash(cfg);
  return cfg;
}

TrainerConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config parse error in " + path + ": " +
                                e.what());
  }
  return parse_run_config(j);
}

nlohmann::json run_config_json(const TrainerConfig& c) {
  nlohmann::ordered_json j;
  j["preset"] = preset_name_str(c.preset.name);
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  nlohmann::ordered_json ov;
  ov["tau"] = c.preset.tau;
  ov["reg_lambda"] = c.preset.reg_lambda;
  ov["regularizer"] = regularizer_name(c.preset.regularizer);
  ov["clip_bound"] = c.preset.clip_bound;
  ov["total_iters"] = c.total_iters;
  ov["k_v"] = c.k_v;
  ov["k_t"] = c.k_t;
  ov["batch_size"] = c.batch_size;
  ov["lr_generator"] = c.lr_generator;
  ov["lr_potential"] = c.lr_potential;
  ov["adam_beta1"] = c.adam_beta1;
  ov["adam_beta2"] = c.adam_beta2;
  ov["grad_clip_norm"] = c.grad_clip_norm;
  ov["aux_noise_dim"] = c.aux_noise_dim;
  ov["hidden_width"] = c.hidden_width;
  ov["n_blocks"] = c.n_blocks;
  nlohmann::ordered_json sj;
  sj["kind"] = schedule_kind_name(c.preset.schedule.kind);
  sj["alpha_min"] = c.preset.schedule.alpha_min;
  sj["alpha_max"] = c.preset.schedule.alpha_max;
  sj["end_iter"] = c.preset.schedule.schedule_end_iter;
  sj["step_period"] = c.preset.schedule.step_period;
  ov["schedule"] = sj;
  j["overrides"] = ov;
  j["config_hash"] = config_hash(c);
  return j;
}

std::string SweepCell::label() const {
  std::ostringstream os;
  bool first = true;
  const auto sep = [&] {
    if (!first) os << "__";
    first = false;
  };
  if (tau) {
    sep();
    os << "tau_" << *tau;
  }
  if (reg_lambda) {
    sep();
    os << "lambda_" << *reg_lambda;
  }
  if (alpha_range) {
    sep();
    os << "alpha_" << alpha_range->first << "_" << alpha_range->second;
  }
  if (schedule_kind) {
    sep();
    os << "schedule_" << schedule_kind_name(*schedule_kind);
  }
  if (first) os << "base";
  return os.str();
}

TrainerConfig SweepCell::apply(TrainerConfig base) const {
  if (tau) base.preset.tau = *tau;
  if (reg_lambda) base.preset.reg_lambda = *reg_lambda;
  if (alpha_range) {
    base.preset.schedule.alpha_min = alpha_range->first;
    base.preset.schedule.alpha_max = alpha_range->second;
  }
  if (schedule_kind) base.preset.schedule.kind = *schedule_kind;
  return base;
}

std::vector<SweepCell> SweepSpec::cells() const {
  const auto or_one = [](std::size_t n) { return n == 0 ? 1 : n; };
  std::vector<SweepCell> out;
  for (std::size_t a = 0; a < or_one(taus.size()); ++a) {
    for (std::size_t b = 0; b < or_one(lambdas.size()); ++b) {
      for (std::size_t c = 0; c < or_one(alpha_ranges.size()); ++c) {
        for (std::size_t d = 0; d < or_one(schedule_kinds.size()); ++d) {
          SweepCell cell;
          if (!taus.empty()) cell.tau = taus[a];
          if (!lambdas.empty()) cell.reg_lambda = lambdas[b];
          if (!alpha_ranges.empty()) cell.alpha_range = alpha_ranges[c];
          if (!schedule_kinds.empty()) cell.schedule_kind = schedule_kinds[d];
          out.push_back(cell);
        }
      }
    }
  }
  return out;
}

SweepSpec parse_sweep_config(const nlohmann::json& j) {
  std::vector<std::string> errors;
  SweepSpec spec;
  {
    nlohmann::json run = j;
    run.erase("axes");
    run.erase("seeds");
    if (run.contains("base_overrides")) {
      run["overrides"] = run.at("base_overrides");
      run.erase("base_overrides");
    }
    spec.base = parse_run_config(run);
  }
  if (j.contains("output_dir")) {
    spec.output_dir = j.at("output_dir").get<std::string>();
  }
  if (j.contains("seeds")) {
    try {
      spec.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    } catch (const nlohmann::json::exception&) {
      errors.push_back("seeds: wrong type");
    }
  }
  if (spec.seeds.empty()) errors.push_back("seeds: must be a non-empty list");

  if (j.contains("axes")) {
    const nlohmann::json& axes = j.at("axes");
    take(axes, "tau", spec.taus, errors);
    take(axes, "reg_lambda", spec.lambdas, errors);
    if (axes.contains("alpha_range")) {
      for (const auto& pair_json : axes.at("alpha_range")) {
        std::vector<double> lo_hi;
        try {
          lo_hi = pair_json.get<std::vector<double>>();
        } catch (const nlohmann::json::exception&) {
        }
        if (lo_hi.size() != 2) {
          errors.push_back("axes.alpha_range: expected a list of [lo, hi]");
          break;
        }
        spec.alpha_ranges.emplace_back(lo_hi[0], lo_hi[1]);
      }
    }
    if (axes.contains("schedule_kind")) {
      try {
        for (const auto& name : axes.at("schedule_kind")) {
          spec.schedule_kinds.push_back(
              schedule_kind_from_name(name.get<std::string>()));
        }
      } catch (const std::exception& e) {
        errors.push_back(std::string("axes.schedule_kind: ") + e.what());
      }
    }
  }
  if (spec.taus.empty() && spec.lambdas.empty() && spec.alpha_ranges.empty() &&
      spec.schedule_kinds.empty()) {
    errors.push_back("axes: at least one sweep axis is required");
  }
  if (!errors.empty()) {
    std::string msg = "sweep config validation failed:";
    for (const std::string& e : errors) msg += "\n  - " + e;
    throw std::invalid_argument(msg);
  }
  return spec;
}

SweepSpec load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sweep config: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("sweep config parse error in " + path + ": " +
                                e.what());
  }
  return parse_sweep_config(j);
}

}  // namespace otlab
