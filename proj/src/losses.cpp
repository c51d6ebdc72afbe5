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

#include "otlab/losses.hpp"

#include <cmath>

namespace otlab {

namespace {
void check_finite(const Vec& v, const char* term) {
  if (!v.allFinite()) throw NonFiniteLoss(term);
}
}  // namespace

double potential_loss(const ModelPreset& preset, double alpha,
                      const Vec& v_of_fake, const Vec& v_of_real,
                      const Vec& cost_of_fake, double reg_value) {
  if (v_of_fake.size() == 0 || v_of_real.size() == 0) {
    throw std::invalid_argument("potential_loss: empty batch");
  }
  if (v_of_fake.size() != cost_of_fake.size()) {
    throw std::invalid_argument("potential_loss: fake batch size mismatch");
  }
  check_finite(v_of_fake, "v_of_fake");
  check_finite(v_of_real, "v_of_real");
  check_finite(cost_of_fake, "cost_of_fake");
  if (!std::isfinite(reg_value)) throw NonFiniteLoss("reg_value");

  double fake_term = 0.0;
  for (Eigen::Index i = 0; i < v_of_fake.size(); ++i) {
    fake_term +=
        alpha_scaled_conj(preset.g1, alpha, -cost_of_fake[i] + v_of_fake[i]);
  }
  fake_term /= static_cast<double>(v_of_fake.size());

  double real_term = 0.0;
  for (Eigen::Index i = 0; i < v_of_real.size(); ++i) {
    real_term += alpha_scaled_conj(preset.g2, alpha, -v_of_real[i]);
  }
  real_term /= static_cast<double>(v_of_real.size());

  return fake_term + real_term + preset.reg_lambda * reg_value;
}

double generator_loss(const Vec& cost_of_fake, const Vec& v_of_fake) {
  if (cost_of_fake.size() != v_of_fake.size() || v_of_fake.size() == 0) {
    throw std::invalid_argument("generator_loss: bad batch");
  }
  check_finite(v_of_fake, "v_of_fake");
  check_finite(cost_of_fake, "cost_of_fake");
  return (cost_of_fake - v_of_fake).mean();
}

std::pair<Vec, Vec> sample_weights(const ModelPreset& preset, double alpha,
                                   const Vec& l_hat, const Vec& v_real) {
  Vec w_hat(l_hat.size()), w(v_real.size());
  for (Eigen::Index i = 0; i < l_hat.size(); ++i) {
    w_hat[i] = alpha_scaled_conj_deriv(preset.g1, alpha, -l_hat[i]);
  }
  for (Eigen::Index i = 0; i < v_real.size(); ++i) {
    w[i] = alpha_scaled_conj_deriv(preset.g2, alpha, -v_real[i]);
  }
  return {w_hat, w};
}

double r1_regularizer(PotentialNet& potential, const Mat& real_batch) {
  const int n = static_cast<int>(real_batch.cols());
  if (n == 0) return 0.0;
  potential.forward(real_batch);
  const Mat grads = potential.input_grad(n);
  return grads.colwise().squaredNorm().mean();
}

Mat gp_interpolates(const Mat& real_batch, const Mat& fake_batch,
                    const Vec& t) {
  if (real_batch.cols() != fake_batch.cols() ||
      t.size() != real_batch.cols()) {
    throw std::invalid_argument("gradient_penalty: batch size mismatch");
  }
  Mat yh(real_batch.rows(), real_batch.cols());
  for (Eigen::Index k = 0; k < t.size(); ++k) {
    yh.col(k) = t[k] * fake_batch.col(k) + (1.0 - t[k]) * real_batch.col(k);
  }
  return yh;
}

double gradient_penalty(PotentialNet& potential, const Mat& real_batch,
                        const Mat& fake_batch, const Vec& t) {
  const Mat yh = gp_interpolates(real_batch, fake_batch, t);
  const int n = static_cast<int>(yh.cols());
  if (n == 0) return 0.0;
  potential.forward(yh);
  const Mat grads = potential.input_grad(n);
  double penalty = 0.0;
  for (int k = 0; k < n; ++k) {
    const double norm = grads.col(k).norm();
    penalty += (norm - 1.0) * (norm - 1.0);
  }
  return penalty / n;
}

// Both regularizer gradients have the form
//   sum_b grad_phi ( w_b . grad_y v(y_b) )
// with per-sample vectors w_b held fixed. Feeding w_b as the input tangent
// of a JVP pass and running the dual backward accumulates exactly that mixed
// second derivative into the parameter gradients.
double r1_accumulate(PotentialNet& potential, const Mat& real_batch,
                     double coef) {
  const int n = static_cast<int>(real_batch.cols());
  if (n == 0) return 0.0;
  potential.forward(real_batch);
  const Mat grads = potential.input_grad(n);
  const double value = grads.colwise().squaredNorm().mean();
  if (coef != 0.0) {
    const Mat tangents = grads * (2.0 * coef / n);
    potential.forward_jvp(tangents);
    potential.backward_dual(Mat::Ones(1, n), Mat::Zero(1, n));
  }
  return value;
}

double gp_accumulate(PotentialNet& potential, const Mat& interpolates,
                     double coef) {
  const int n = static_cast<int>(interpolates.cols());
  if (n == 0) return 0.0;
  potential.forward(interpolates);
  const Mat grads = potential.input_grad(n);
  double value = 0.0;
  Mat tangents(grads.rows(), n);
  for (int k = 0; k < n; ++k) {
    const double norm = grads.col(k).norm();
    value += (norm - 1.0) * (norm - 1.0);
    if (norm > 0.0) {
      tangents.col(k) = grads.col(k) * (2.0 * coef * (norm - 1.0) / (n * norm));
    } else {
      tangents.col(k).setZero();  // subgradient 0 at the kink
    }
  }
  value /= n;
  if (coef != 0.0) {
    potential.forward_jvp(tangents);
    potential.backward_dual(Mat::Ones(1, n), Mat::Zero(1, n));
  }
  return value;
}

}  // namespace otlab
