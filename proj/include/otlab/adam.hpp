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

#ifndef OTLAB_ADAM_HPP
#define OTLAB_ADAM_HPP

#include <Eigen/Core>
#include <cstdint>

namespace otlab {

// Adam with bias correction over a flat parameter vector. The moment
// buffers are part of checkpointed state.
struct Adam {
  double lr = 1e-4;
  double beta1 = 0.5;
  double beta2 = 0.9;
  double eps = 1e-8;
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  std::int64_t t = 0;

  Adam() = default;
  Adam(double lr_, double beta1_, double beta2_, Eigen::Index n)
      : lr(lr_), beta1(beta1_), beta2(beta2_),
        m(Eigen::VectorXd::Zero(n)), v(Eigen::VectorXd::Zero(n)) {}

  void step(Eigen::VectorXd& params, const Eigen::VectorXd& grads) {
    ++t;
    m = beta1 * m + (1.0 - beta1) * grads;
    v = beta2 * v + (1.0 - beta2) * grads.cwiseProduct(grads);
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    params.array() -= lr * (m.array() / bc1) /
                      ((v.array() / bc2).sqrt() + eps);
  }
};

// Rescales the gradient to the given total norm when it exceeds it.
// A non-positive bound disables clipping.
inline void clip_grad_norm(Eigen::VectorXd& grads, double bound) {
  if (bound <= 0.0) return;
  const double norm = grads.norm();
  if (norm > bound) grads *= bound / norm;
}

}  // namespace otlab

#endif  // OTLAB_ADAM_HPP
