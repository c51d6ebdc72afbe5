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

#ifndef OTLAB_DIAGNOSTICS_HPP
#define OTLAB_DIAGNOSTICS_HPP

#include <array>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "otlab/nets.hpp"
#include "otlab/toy_data.hpp"

namespace otlab {

// Sampled |v(b) - v(a)| / ||b - a|| ratios with a five-number summary.
struct ArcDistribution {
  std::int64_t iteration = 0;
  std::vector<double> samples;
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

// Axis-aligned sampling box (x_lo, x_hi, y_lo, y_hi). The default covers the
// radius-12 mixture plus a 3-sigma margin.
using Region = std::array<double, 4>;
constexpr Region kDataRegion{-14.0, 14.0, -14.0, 14.0};

// Rate-of-change probe of the potential: a uniform over the region,
// b drawn from the data distribution, degenerate pairs resampled.
ArcDistribution arc_distribution(PotentialNet& potential, const Region& region,
                                 int n_pairs,
                                 const GaussianMixtureTarget& target,
                                 std::mt19937_64& rng);

struct ModeReport {
  std::array<long, 8> per_mode_counts{};  // high-quality samples per mode
  int covered_modes = 0;
  double high_quality_fraction = 0.0;
};

// Nearest-mode assignment; a sample is high quality within
// radius_sigmas * sigma of its mode mean; a mode counts as covered with at
// least max(1, n/80) high-quality samples.
ModeReport mode_report(const Mat& samples, const GaussianMixtureTarget& target,
                       double radius_sigmas = 3.0);

// Exact 2-Wasserstein between equal-size point clouds (uniform weights,
// tau = 1 assignment). Cloud size is capped at 512 to keep the oracle exact.
double empirical_w2(const Mat& a, const Mat& b);

// Paired endpoints (x, T(x, z)) for transport visualization.
std::vector<std::pair<Eigen::Vector2d, Eigen::Vector2d>> transport_pairs(
    GeneratorNet& generator, const Mat& x, const Mat& z);

}  // namespace otlab

#endif  // OTLAB_DIAGNOSTICS_HPP
