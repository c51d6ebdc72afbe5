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
#include <limits>
#include <random>

#include "doctest.h"

using namespace otlab;

namespace {
Vec rand_vec(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}
}  // namespace

TEST_CASE("identity preset reduces exactly to the independently coded dual") {
  std::mt19937_64 rng(3);
  ModelPreset otm = ModelPreset::by_name(PresetName::OTM);
  otm.reg_lambda = 0.0;
  otm.tau = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Vec v_fake = rand_vec(16, rng);
    const Vec v_real = rand_vec(16, rng);
    const Vec cost = Vec::Zero(16);
    // independently coded two-sided dual: E[v(yhat)] - E[v(y)]
    double expect = 0.0;
    for (int i = 0; i < 16; ++i) expect += v_fake[i];
    expect /= 16.0;
    double real_part = 0.0;
    for (int i = 0; i < 16; ++i) real_part += v_real[i];
    expect -= real_part / 16.0;
    CHECK(potential_loss(otm, 1.0, v_fake, v_real, cost, 0.0) == expect);
    CHECK(generator_loss(cost, v_fake) == -v_fake.mean());
  }
}

TEST_CASE("all-zero inputs give zero loss for every convex pair") {
  const Vec zero = Vec::Zero(8);
  for (PresetName name : {PresetName::WGAN_GP, PresetName::UOTM_SP,
                          PresetName::UOTM_KL}) {
    ModelPreset p = ModelPreset::by_name(name);
    p.reg_lambda = 0.0;
    CHECK(potential_loss(p, 1.0, zero, zero, zero, 0.0) == 0.0);
  }
}

TEST_CASE("softplus single-sample value, extended-precision anchor") {
  ModelPreset p = ModelPreset::by_name(PresetName::UOTM_SP);
  Vec v_fake(1), v_real(1), cost(1);
  v_fake << 0.3;
  v_real << 0.3;  // -v(y) = -0.3
  cost << 0.0;
  // SP(0.3) + SP(-0.3) = 2 log((1 + cosh 0.3)/2)
  CHECK(potential_loss(p, 1.0, v_fake, v_real, cost, 0.0) ==
        doctest::Approx(0.044832255634327238).epsilon(1e-14));
}

TEST_CASE("alpha-scaled softplus loss converges to the identity-pair loss") {
  std::mt19937_64 rng(7);
  ModelPreset sp = ModelPreset::by_name(PresetName::UOTM_SP);
  sp.reg_lambda = 0.0;
  ModelPreset id = ModelPreset::by_name(PresetName::OTM);
  id.reg_lambda = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const Vec v_fake = rand_vec(32, rng, 0.5);
    const Vec v_real = rand_vec(32, rng, 0.5);
    const Vec cost = rand_vec(32, rng, 0.2).cwiseAbs();
    const double scaled = potential_loss(sp, 1e6, v_fake, v_real, cost, 0.0);
    const double ident = potential_loss(id, 1.0, v_fake, v_real, cost, 0.0);
    CHECK(std::abs(scaled - ident) <= 1e-3);
  }
}

TEST_CASE("generator loss basics") {
  Vec cost(2), v(2);
  cost << 0.5, 0.5;
  v << 0.2, 0.2;
  CHECK(generator_loss(cost, v) == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("non-finite inputs name the offending term") {
  ModelPreset p = ModelPreset::by_name(PresetName::UOTM_SP);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Vec good = Vec::Zero(2), bad = Vec::Zero(2);
  bad[1] = nan;
  try {
    potential_loss(p, 1.0, bad, good, good, 0.0);
    FAIL("expected NonFiniteLoss");
  } catch (const NonFiniteLoss& e) {
    CHECK(e.term == "v_of_fake");
  }
  try {
    potential_loss(p, 1.0, good, bad, good, 0.0);
    FAIL("expected NonFiniteLoss");
  } catch (const NonFiniteLoss& e) {
    CHECK(e.term == "v_of_real");
  }
  CHECK_THROWS_AS(potential_loss(p, 1.0, good, good, good, nan),
                  NonFiniteLoss);
}

TEST_CASE("sample weights: identity pairs give all ones") {
  ModelPreset p = ModelPreset::by_name(PresetName::WGAN);
  std::mt19937_64 rng(11);
  const auto [w_hat, w] = sample_weights(p, 1.0, rand_vec(8, rng),
                                         rand_vec(8, rng));
  CHECK((w_hat.array() == 1.0).all());
  CHECK((w.array() == 1.0).all());
}

TEST_CASE("softplus weights: anchors, positivity, bound, monotonicity") {
  ModelPreset p = ModelPreset::by_name(PresetName::UOTM_SP);
  Vec l_hat(3), v_real(3);
  l_hat << 0.0, -2.0, 5.0;
  v_real << 0.0, 1.0, -1.0;
  const auto [w_hat, w] = sample_weights(p, 1.0, l_hat, v_real);
  CHECK(w_hat[0] == doctest::Approx(1.0).epsilon(1e-12));
  // generator dominating: w_hat = 2 sigma(2)
  CHECK(w_hat[1] == doctest::Approx(1.7615941559557649).epsilon(1e-14));
  CHECK(w_hat[1] > 1.0);

  std::mt19937_64 rng(13);
  Vec lh = rand_vec(64, rng, 2.0);
  std::sort(lh.begin(), lh.end());
  const auto [wh2, w2] = sample_weights(p, 1.0, lh, lh);
  for (int i = 0; i + 1 < 64; ++i) {
    CHECK(wh2[i] >= wh2[i + 1]);  // decreasing in l_hat
    CHECK(w2[i] >= w2[i + 1]);    // decreasing in v(y)
    CHECK(wh2[i] > 0.0);
    CHECK(wh2[i] < 2.0);  // sup of SP' is 2
  }
}

TEST_CASE("klexp weights are strictly positive and monotone") {
  ModelPreset p = ModelPreset::by_name(PresetName::UOTM_KL);
  std::mt19937_64 rng(17);
  Vec lh = rand_vec(32, rng);
  std::sort(lh.begin(), lh.end());
  const auto [w_hat, w] = sample_weights(p, 1.0, lh, lh);
  for (int i = 0; i + 1 < 32; ++i) {
    CHECK(w_hat[i] > 0.0);
    CHECK(w_hat[i] >= w_hat[i + 1]);
  }
}

TEST_CASE("alpha-scaled weights use the derivative at s/alpha") {
  ModelPreset p = ModelPreset::by_name(PresetName::UOTM_SD);
  Vec l_hat(1), v_real(1);
  l_hat << -3.0;
  v_real << 0.0;
  const auto [w_hat, w] = sample_weights(p, 10.0, l_hat, v_real);
  CHECK(w_hat[0] == doctest::Approx(softplus_conj_deriv(0.3)).epsilon(1e-14));
  CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("regularizer values on degenerate potentials") {
  std::mt19937_64 rng(19);
  PotentialNet constant(4, 1, rng);
  constant.h2.W.setZero();
  constant.h2.b.setZero();
  const Mat y = (Mat(2, 4) << 1.0, 2.0, -1.0, 0.0, 0.5, -2.0, 3.0, 1.0)
                    .finished();
  CHECK(r1_regularizer(constant, y) == 0.0);
  Vec t(4);
  t << 0.1, 0.4, 0.6, 0.9;
  // v == 0 everywhere: penalty is (0 - 1)^2 = 1
  CHECK(gradient_penalty(constant, y, y * 0.5, t) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("empty batches: r1 returns zero") {
  std::mt19937_64 rng(23);
  PotentialNet net(4, 1, rng);
  const Mat empty(2, 0);
  CHECK(r1_regularizer(net, empty) == 0.0);
}
