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

#include "otlab/trainer.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "otlab/checkpoint.hpp"
#include "otlab/schedule.hpp"

namespace otlab {

namespace {
// Loss magnitudes beyond this are treated as divergence and abort the run.
constexpr double kDivergenceCap = 1e9;

Vec squared_cols(const Mat& a, const Mat& b) {
  return (a - b).colwise().squaredNorm().transpose();
}
}  // namespace

TrainerConfig TrainerConfig::for_preset(const ModelPreset& preset_) {
  TrainerConfig cfg;
  cfg.preset = preset_;
  cfg.adam_beta1 = preset_.default_beta1;
  return cfg;
}

void TrainerConfig::validate() const {
  std::ostringstream err;
  if (total_iters < 0) err << " total_iters must be >= 0;";
  if (k_v < 1) err << " k_v must be >= 1;";
  if (k_t < 1) err << " k_t must be >= 1;";
  if (batch_size < 1) err << " batch_size must be >= 1;";
  if (lr_generator < 0.0) err << " lr_generator must be >= 0;";
  if (lr_potential < 0.0) err << " lr_potential must be >= 0;";
  if (grad_clip_norm < 0.0) err << " grad_clip_norm must be >= 0;";
  if (adam_beta1 < 0.0 || adam_beta1 >= 1.0) err << " adam_beta1 not in [0,1);";
  if (adam_beta2 < 0.0 || adam_beta2 >= 1.0) err << " adam_beta2 not in [0,1);";
  if (aux_noise_dim < 1) err << " aux_noise_dim must be >= 1;";
  if (hidden_width < 1) err << " hidden_width must be >= 1;";
  if (n_blocks < 0) err << " n_blocks must be >= 0;";
  try {
    preset.validate();
  } catch (const std::invalid_argument& e) {
    err << " " << e.what() << ";";
  }
  const std::string msg = err.str();
  if (!msg.empty()) {
    throw std::invalid_argument("invalid TrainerConfig:" + msg);
  }
}

TrainState make_initial_state(const TrainerConfig& config) {
  TrainState state;
  state.rng.seed(config.seed);
  state.preset = config.preset;
  state.nets = NetworkParams(config.hidden_width, config.n_blocks,
                             config.aux_noise_dim, state.rng);
  const long n_gen = param_count(state.nets.generator.linears());
  const long n_pot = param_count(state.nets.potential.linears());
  state.opt_generator =
      Adam(config.lr_generator, config.adam_beta1, config.adam_beta2, n_gen);
  state.opt_potential =
      Adam(config.lr_potential, config.adam_beta1, config.adam_beta2, n_pot);
  return state;
}

namespace {

struct PotentialStepResult {
  double loss = 0.0;
  double reg_value = 0.0;
  Vec w_hat, w;
};

PotentialStepResult potential_update(TrainState& state,
                                     const TrainerConfig& config,
                                     const BatchSample& batch, double alpha) {
  GeneratorNet& gen = state.nets.generator;
  PotentialNet& pot = state.nets.potential;
  const ModelPreset& preset = state.preset;
  const int B = config.batch_size;

  const Mat yhat = gen.forward(batch.x, batch.z);
  const Vec cost_fake = preset.tau * squared_cols(yhat, batch.x);

  zero_grads(pot.linears());

  double reg_value = 0.0;
  if (preset.regularizer == Regularizer::R1) {
    reg_value = r1_accumulate(pot, batch.y, preset.reg_lambda);
  } else if (preset.regularizer == Regularizer::GradientPenalty) {
    std::uniform_real_distribution<double> ut(0.0, 1.0);
    Vec t(B);
    for (int k = 0; k < B; ++k) t[k] = ut(state.rng);
    const Mat interp = gp_interpolates(batch.y, yhat, t);
    reg_value = gp_accumulate(pot, interp, preset.reg_lambda);
  }

  // Single pass over [fake | real] so both value sets share one cache.
  Mat joint(2, 2 * B);
  joint.leftCols(B) = yhat;
  joint.rightCols(B) = batch.y;
  const Mat v_joint = pot.forward(joint);
  const Vec v_fake = v_joint.row(0).head(B).transpose();
  const Vec v_real = v_joint.row(0).tail(B).transpose();

  const Vec l_hat = cost_fake - v_fake;
  PotentialStepResult out;
  std::tie(out.w_hat, out.w) = sample_weights(preset, alpha, l_hat, v_real);
  out.reg_value = reg_value;
  out.loss = potential_loss(preset, alpha, v_fake, v_real, cost_fake,
                            reg_value);

  Mat d_joint(1, 2 * B);
  d_joint.row(0).head(B) = out.w_hat.transpose() / B;
  d_joint.row(0).tail(B) = -out.w.transpose() / B;
  pot.backward(d_joint, true);

  const auto linears = pot.linears();
  Vec params = get_params(linears);
  Vec grads = get_grads(linears);
  clip_grad_norm(grads, config.grad_clip_norm);
  state.opt_potential.step(params, grads);
  set_params(linears, params);

  if (preset.regularizer == Regularizer::WeightClip) {
    clip_params(linears, preset.clip_bound);
  }
  return out;
}

double generator_update(TrainState& state, const TrainerConfig& config,
                        const BatchSample& batch) {
  GeneratorNet& gen = state.nets.generator;
  PotentialNet& pot = state.nets.potential;
  const ModelPreset& preset = state.preset;
  const int B = config.batch_size;

  zero_grads(gen.linears());
  const Mat yhat = gen.forward(batch.x, batch.z);
  const Vec cost_fake = preset.tau * squared_cols(yhat, batch.x);
  const Vec v_fake = pot.forward(yhat).row(0).transpose();
  const double loss = generator_loss(cost_fake, v_fake);

  const Mat dv = pot.input_grad(B);  // grad_y v at yhat
  const Mat d_yhat = (2.0 * preset.tau * (yhat - batch.x) - dv) / B;
  gen.backward(d_yhat, true);

  const auto linears = gen.linears();
  Vec params = get_params(linears);
  Vec grads = get_grads(linears);
  clip_grad_norm(grads, config.grad_clip_norm);
  state.opt_generator.step(params, grads);
  set_params(linears, params);
  return loss;
}

void summarize_weights(const Vec& w, double& mean, double& mn, double& mx) {
  mean = w.mean();
  mn = w.minCoeff();
  mx = w.maxCoeff();
}

}  // namespace

MetricsRecord train_step(TrainState& state, const TrainerConfig& config,
                         DataSource& source) {
  const double alpha = schedule_alpha(state.preset.schedule, state.iter);

  MetricsRecord rec;
  PotentialStepResult pot_result;
  for (int k = 0; k < config.k_v; ++k) {
    const BatchSample batch = source.next(config.batch_size, state.rng);
    pot_result = potential_update(state, config, batch, alpha);
  }
  double loss_t = 0.0;
  for (int k = 0; k < config.k_t; ++k) {
    const BatchSample batch = source.next(config.batch_size, state.rng);
    loss_t = generator_update(state, config, batch);
  }

  ++state.iter;
  rec.iter = state.iter;
  rec.loss_v = pot_result.loss;
  rec.loss_T = loss_t;
  rec.alpha = alpha;
  rec.reg_value = pot_result.reg_value;
  summarize_weights(pot_result.w_hat, rec.w_hat_mean, rec.w_hat_min,
                    rec.w_hat_max);
  summarize_weights(pot_result.w, rec.w_mean, rec.w_min, rec.w_max);

  if (!std::isfinite(rec.loss_v) || std::abs(rec.loss_v) > kDivergenceCap) {
    throw NonFiniteLoss("loss_v diverged at iter " +
                        std::to_string(state.iter));
  }
  if (!std::isfinite(rec.loss_T) || std::abs(rec.loss_T) > kDivergenceCap) {
    throw NonFiniteLoss("loss_T diverged at iter " +
                        std::to_string(state.iter));
  }
  return rec;
}

void save_checkpoint_file(const std::string& path, const TrainerConfig& config,
                          TrainState& state) {
  Checkpoint ck;
  ck.config_hash = config.config_hash;
  ck.iteration = state.iter;
  ck.arrays["gen_params"] = get_params(state.nets.generator.linears());
  ck.arrays["pot_params"] = get_params(state.nets.potential.linears());
  ck.arrays["adam_gen_m"] = state.opt_generator.m;
  ck.arrays["adam_gen_v"] = state.opt_generator.v;
  ck.arrays["adam_pot_m"] = state.opt_potential.m;
  ck.arrays["adam_pot_v"] = state.opt_potential.v;
  Vec steps(2);
  steps << static_cast<double>(state.opt_generator.t),
      static_cast<double>(state.opt_potential.t);
  ck.arrays["adam_steps"] = steps;
  ck.save(path);
}

void restore_from_checkpoint(const std::string& path, TrainState& state) {
  const Checkpoint ck = Checkpoint::load(path);
  set_params(state.nets.generator.linears(), ck.arrays.at("gen_params"));
  set_params(state.nets.potential.linears(), ck.arrays.at("pot_params"));
  state.opt_generator.m = ck.arrays.at("adam_gen_m");
  state.opt_generator.v = ck.arrays.at("adam_gen_v");
  state.opt_potential.m = ck.arrays.at("adam_pot_m");
  state.opt_potential.v = ck.arrays.at("adam_pot_v");
  const Vec& steps = ck.arrays.at("adam_steps");
  state.opt_generator.t = static_cast<std::int64_t>(steps[0]);
  state.opt_potential.t = static_cast<std::int64_t>(steps[1]);
  state.iter = ck.iteration;
}

RunRecord run_training(const TrainerConfig& config, DataSource& source,
                       std::int64_t snapshot_every, const SnapshotHook& hook) {
  config.validate();
  if (snapshot_every < 1) {
    throw std::invalid_argument("run_training: snapshot_every must be >= 1");
  }

  RunRecord record;
  record.config_hash = config.config_hash;
  record.output_dir = config.output_dir;

  const bool persist = !config.output_dir.empty();
  std::ofstream metrics_out;
  std::filesystem::path dir;
  if (persist) {
    dir = config.output_dir;
    std::filesystem::create_directories(dir / "checkpoints");
    metrics_out.open(dir / "metrics.ndjson", std::ios::trunc);
    if (!metrics_out) {
      throw std::runtime_error("run_training: cannot write metrics in " +
                               config.output_dir);
    }
  }

  TrainState state = make_initial_state(config);

  const auto checkpoint_now = [&](std::int64_t iter) {
    if (!persist) {
      record.checkpoint_files.push_back("mem:" + std::to_string(iter));
      return;
    }
    const std::string path =
        (dir / "checkpoints" / ("ckpt_" + std::to_string(iter) + ".bin"))
            .string();
    save_checkpoint_file(path, config, state);
    record.checkpoint_files.push_back(path);
  };

  const auto started = std::chrono::steady_clock::now();
  checkpoint_now(0);
  if (hook) hook(state, 0, record);

  for (std::int64_t k = 0; k < config.total_iters; ++k) {
    MetricsRecord rec;
    try {
      rec = train_step(state, config, source);
    } catch (const std::exception& e) {
      record.status = std::string("aborted: ") + e.what();
      if (persist) metrics_out.flush();
      return record;
    }
    rec.wallclock =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      started)
            .count();
    record.metrics.push_back(rec);
    if (persist) write_metrics_line(metrics_out, rec);

    const std::int64_t iter = state.iter;
    if (iter % snapshot_every == 0 || iter == config.total_iters) {
      checkpoint_now(iter);
    }
    if (hook) hook(state, iter, record);
  }

  if (persist) metrics_out.flush();
  return record;
}

}  // namespace otlab
