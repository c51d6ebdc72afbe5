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

#include "otlab/toy_data.hpp"

#include <cmath>

#include "doctest.h"

using namespace otlab;

TEST_CASE("mode means sit on the radius-12 circle") {
  GaussianMixtureTarget target;
  const Eigen::MatrixXd m = target.means();
  CHECK(m(0, 0) == doctest::Approx(12.0).epsilon(1e-15));
  CHECK(m(1, 0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(m(0, 2) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(m(1, 2) == doctest::Approx(12.0).epsilon(1e-15));
  for (int i = 0; i < 8; ++i) {
    CHECK(m.col(i).norm() == doctest::Approx(12.0).epsilon(1e-14));
  }
}

TEST_CASE("component frequencies and spread at n = 1e5") {
  GaussianMixtureTarget target;
  std::mt19937_64 rng(123);
  const int n = 100000;
  const Eigen::MatrixXd samples = target.sample(n, rng);
  const Eigen::MatrixXd means = target.means();

  Eigen::VectorXd counts = Eigen::VectorXd::Zero(8);
  std::vector<std::vector<double>> dev(8);
  for (int k = 0; k < n; ++k) {
    int nearest = 0;
    double best = (samples.col(k) - means.col(0)).norm();
    for (int i = 1; i < 8; ++i) {
      const double d = (samples.col(k) - means.col(i)).norm();
      if (d < best) {
        best = d;
        nearest = i;
      }
    }
    counts[nearest] += 1.0;
    dev[nearest].push_back(samples(0, k) - means(0, nearest));
    dev[nearest].push_back(samples(1, k) - means(1, nearest));
  }
  for (int i = 0; i < 8; ++i) {
    CHECK(std::abs(counts[i] / n - 0.125) <= 0.01);
    double ss = 0.0;
    for (const double d : dev[i]) ss += d * d;
    const double sd = std::sqrt(ss / dev[i].size());
    CHECK(std::abs(sd - 0.4) <= 0.02);
  }
}

TEST_CASE("source sampler moments at n = 1e5") {
  std::mt19937_64 rng(7);
  const Eigen::MatrixXd x = sample_source(100000, 2, rng);
  CHECK(std::abs(x.row(0).mean()) <= 0.02);
  CHECK(std::abs(x.row(1).mean()) <= 0.02);
  for (int d = 0; d < 2; ++d) {
    const double var =
        (x.row(d).array() - x.row(d).mean()).square().mean();
    CHECK(std::abs(var - 1.0) <= 0.03);
  }
}

TEST_CASE("samplers are pure functions of the rng state") {
  GaussianMixtureTarget target;
  std::mt19937_64 a(42), b(42);
  const Eigen::MatrixXd s1 = target.sample(16, a);
  const Eigen::MatrixXd s2 = target.sample(16, b);
  CHECK((s1 - s2).cwiseAbs().maxCoeff() == 0.0);

  std::mt19937_64 c(42), d(42);
  CHECK((sample_source(16, 2, c) - sample_source(16, 2, d))
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("toy batches have consistent shapes") {
  ToyDataSource source;
  std::mt19937_64 rng(1);
  const BatchSample batch = source.next(17, rng);
  CHECK(batch.x.cols() == 17);
  CHECK(batch.y.cols() == 17);
  CHECK(batch.z.cols() == 17);
  CHECK(batch.x.rows() == 2);
  CHECK(batch.z.rows() == 2);
}
