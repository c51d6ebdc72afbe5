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

#include "otlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"

using namespace otlab;

namespace {

PotentialNet affine_potential(double gx, double gy) {
  std::mt19937_64 rng(0);
  PotentialNet net(2, 0, rng);
  net.lift.W = Mat::Identity(2, 2);
  net.lift.b = Vec::Constant(2, 60.0);
  net.h1.W = Mat::Identity(2, 2);
  net.h1.b = Vec::Zero(2);
  net.h2.W.resize(1, 2);
  net.h2.W << gx, gy;
  net.h2.b = Vec::Zero(1);
  return net;
}

Mat rand_cloud(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Mat m(2, n);
  for (int j = 0; j < n; ++j) {
    m(0, j) = g(rng);
    m(1, j) = g(rng);
  }
  return m;
}

}  // namespace

TEST_CASE("ARC of an affine potential is bounded by its gradient norm") {
  PotentialNet net = affine_potential(3.0, 4.0);
  GaussianMixtureTarget target;
  std::mt19937_64 rng(5);
  const ArcDistribution arc =
      arc_distribution(net, kDataRegion, 2000, target, rng);
  REQUIRE(arc.samples.size() == 2000);
  for (const double v : arc.samples) CHECK(v <= 5.0 + 1e-9);
  CHECK(arc.max <= 5.0 + 1e-9);
  CHECK(arc.max >= 4.5);  // some pair nearly aligns with the gradient
  CHECK(arc.q1 <= arc.median);
  CHECK(arc.median <= arc.q3);
}

TEST_CASE("ARC of a constant potential is identically zero") {
  std::mt19937_64 rng(7);
  PotentialNet net(4, 1, rng);
  net.h2.W.setZero();
  net.h2.b.setZero();
  GaussianMixtureTarget target;
  const ArcDistribution arc =
      arc_distribution(net, kDataRegion, 500, target, rng);
  CHECK(arc.max == 0.0);
}

TEST_CASE("mode report on the exact means") {
  GaussianMixtureTarget target;
  const ModeReport rep = mode_report(target.means(), target);
  CHECK(rep.covered_modes == 8);
  CHECK(rep.high_quality_fraction == 1.0);
}

TEST_CASE("mode report flags total collapse") {
  GaussianMixtureTarget target;
  Mat samples(2, 500);
  samples.row(0).setConstant(12.0);
  samples.row(1).setConstant(0.0);
  const ModeReport rep = mode_report(samples, target);
  CHECK(rep.covered_modes == 1);
  CHECK(rep.per_mode_counts[0] == 500);
}

TEST_CASE("mode report on true target samples") {
  GaussianMixtureTarget target;
  std::mt19937_64 rng(11);
  const Mat samples = target.sample(10000, rng);
  const ModeReport rep = mode_report(samples, target);
  CHECK(rep.covered_modes == 8);
  // 3-sigma mass of an isotropic 2D Gaussian is about 0.9889
  CHECK(rep.high_quality_fraction >= 0.98);
}

TEST_CASE("mode report is permutation-invariant in the samples") {
  GaussianMixtureTarget target;
  std::mt19937_64 rng(13);
  const Mat samples = target.sample(512, rng);
  Mat shuffled = samples;
  std::vector<int> idx(512);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  for (int k = 0; k < 512; ++k) shuffled.col(k) = samples.col(idx[k]);
  const ModeReport a = mode_report(samples, target);
  const ModeReport b = mode_report(shuffled, target);
  CHECK(a.covered_modes == b.covered_modes);
  CHECK(a.per_mode_counts == b.per_mode_counts);
}

TEST_CASE("empirical W2 basics") {
  std::mt19937_64 rng(17);
  const Mat a = rand_cloud(64, rng);
  CHECK(empirical_w2(a, a) <= 1e-9);

  Mat b = a;
  b.row(0).array() += 3.0;
  b.row(1).array() += 4.0;
  CHECK(empirical_w2(a, b) == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("empirical W2 matches brute force over 6! matchings") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    const Mat a = rand_cloud(6, rng);
    const Mat b = rand_cloud(6, rng);
    std::vector<int> perm{0, 1, 2, 3, 4, 5};
    double best = std::numeric_limits<double>::infinity();
    do {
      double total = 0.0;
      for (int i = 0; i < 6; ++i) {
        total += (a.col(i) - b.col(perm[i])).squaredNorm();
      }
      best = std::min(best, total / 6.0);
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(empirical_w2(a, b) ==
          doctest::Approx(std::sqrt(best)).epsilon(1e-9));
  }
}

TEST_CASE("empirical W2 is symmetric and satisfies the triangle inequality") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    const Mat a = rand_cloud(24, rng);
    const Mat b = rand_cloud(24, rng, 2.0);
    const Mat c = rand_cloud(24, rng, 0.5);
    const double ab = empirical_w2(a, b);
    const double ba = empirical_w2(b, a);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-8));
    CHECK(ab <= empirical_w2(a, c) + empirical_w2(c, b) + 1e-8);
  }
}

TEST_CASE("empirical W2 enforces its exactness cap") {
  std::mt19937_64 rng(29);
  const Mat big = rand_cloud(513, rng);
  CHECK_THROWS_AS(empirical_w2(big, big), std::invalid_argument);
  const Mat a = rand_cloud(4, rng);
  const Mat b = rand_cloud(5, rng);
  CHECK_THROWS_AS(empirical_w2(a, b), std::invalid_argument);
}

TEST_CASE("transport pairs: constant generator shares one endpoint") {
  std::mt19937_64 rng(31);
  GeneratorNet gen(6, 1, 2, rng);
  gen.h2.W.setZero();
  gen.h2.b << 1.5, -2.5;
  const Mat x = rand_cloud(10, rng);
  const Mat z = rand_cloud(10, rng);
  const auto pairs = transport_pairs(gen, x, z);
  REQUIRE(pairs.size() == 10);
  for (const auto& [src, dst] : pairs) {
    CHECK(dst(0) == doctest::Approx(1.5));
    CHECK(dst(1) == doctest::Approx(-2.5));
  }
  CHECK((pairs[3].first - x.col(3)).norm() == 0.0);
}
