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

#ifndef OTLAB_LOSSES_HPP
#define OTLAB_LOSSES_HPP

#include <stdexcept>
#include <string>
#include <utility>

#include "otlab/nets.hpp"
#include "otlab/presets.hpp"

namespace otlab {

// Raised when a loss input turns non-finite; names the offending term so the
// trainer can report which quantity blew up.
struct NonFiniteLoss : std::runtime_error {
  std::string term;
  explicit NonFiniteLoss(std::string term_)
      : std::runtime_error("non-finite value in loss term '" + term_ + "'"),
        term(std::move(term_)) {}
};

// L_v = mean g1_alpha(-c + v(yhat)) + mean g2_alpha(-v(y)) + lambda * reg,
// with g_alpha the alpha-scaled conjugate. Throws NonFiniteLoss naming the
// first non-finite input term.
double potential_loss(const ModelPreset& preset, double alpha,
                      const Vec& v_of_fake, const Vec& v_of_real,
                      const Vec& cost_of_fake, double reg_value);

// L_T = mean(c(x, T(x,z)) - v(T(x,z))). Not alpha-scaled: the scheduling
// flattens only the potential objective, the inner infimum passes through.
double generator_loss(const Vec& cost_of_fake, const Vec& v_of_fake);

// Sample-wise gradient weights: w_hat(x) = g1'(-l_hat(x)), w(y) = g2'(-v(y)),
// with the alpha-scaled derivative (Psi*)'(s/alpha). Identity pairs give 1.
std::pair<Vec, Vec> sample_weights(const ModelPreset& preset, double alpha,
                                   const Vec& l_hat, const Vec& v_real);

// mean_y ||grad_y v(y)||^2 over the batch; 0 on an empty batch.
double r1_regularizer(PotentialNet& potential, const Mat& real_batch);

// mean over interpolates yh = t*fake + (1-t)*real of (||grad v(yh)|| - 1)^2.
double gradient_penalty(PotentialNet& potential, const Mat& real_batch,
                        const Mat& fake_batch, const Vec& t);

Mat gp_interpolates(const Mat& real_batch, const Mat& fake_batch,
                    const Vec& t);

// Training variants: evaluate the regularizer AND accumulate
// coef * d(reg)/d(potential params) into the potential's gradient buffers.
double r1_accumulate(PotentialNet& potential, const Mat& real_batch,
                     double coef);
double gp_accumulate(PotentialNet& potential, const Mat& interpolates,
                     double coef);

}  // namespace otlab

#endif  // OTLAB_LOSSES_HPP
