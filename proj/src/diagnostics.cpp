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
#include <stdexcept>

#include "otlab/ot_exact.hpp"

namespace otlab {

namespace {
double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * (sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - lo;
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

// Potential evaluation in slices; keeps activation memory bounded for the
// ten-thousand-pair default.
Vec eval_potential(PotentialNet& potential, const Mat& points) {
  const int n = static_cast<int>(points.cols());
  Vec out(n);
  const int chunk = 4096;
  for (int at = 0; at < n; at += chunk) {
    const int len = std::min(chunk, n - at);
    out.segment(at, len) =
        potential.forward(points.middleCols(at, len)).row(0).transpose();
  }
  return out;
}
}  // namespace

ArcDistribution arc_distribution(PotentialNet& potential, const Region& region,
                                 int n_pairs,
                                 const GaussianMixtureTarget& target,
                                 std::mt19937_64& rng) {
  if (n_pairs < 1) {
    throw std::invalid_argument("arc_distribution: n_pairs must be >= 1");
  }
  std::uniform_real_distribution<double> ux(region[0], region[1]);
  std::uniform_real_distribution<double> uy(region[2], region[3]);
  Mat a(2, n_pairs);
  Mat b(2, n_pairs);
  Vec dist(n_pairs);
  for (int k = 0; k < n_pairs; ++k) {
    for (;;) {
      a(0, k) = ux(rng);
      a(1, k) = uy(rng);
      b.col(k) = target.sample(1, rng);
      dist[k] = (a.col(k) - b.col(k)).norm();
      if (dist[k] > 0.0) break;  // degenerate pair: resample
    }
  }
  const Vec va = eval_potential(potential, a);
  const Vec vb = eval_potential(potential, b);

  ArcDistribution arc;
  arc.samples.resize(n_pairs);
  for (int k = 0; k < n_pairs; ++k) {
    arc.samples[k] = std::abs(vb[k] - va[k]) / dist[k];
  }
  std::vector<double> sorted = arc.samples;
  std::sort(sorted.begin(), sorted.end());
  arc.min = sorted.front();
  arc.q1 = quantile_sorted(sorted, 0.25);
  arc.median = quantile_sorted(sorted, 0.5);
  arc.q3 = quantile_sorted(sorted, 0.75);
  arc.max = sorted.back();
  return arc;
}

ModeReport mode_report(const Mat& samples, const GaussianMixtureTarget& target,
                       double radius_sigmas) {
  if (radius_sigmas <= 0.0) {
    throw std::invalid_argument("mode_report: radius_sigmas must be positive");
  }
  const Mat means = target.means();
  const double radius = radius_sigmas * target.sigma;

  ModeReport report;
  const int n = static_cast<int>(samples.cols());
  for (int k = 0; k < n; ++k) {
    int nearest = 0;
    double best = (samples.col(k) - means.col(0)).norm();
    for (int i = 1; i < target.n_modes; ++i) {
      const double d = (samples.col(k) - means.col(i)).norm();
      if (d < best) {
        best = d;
        nearest = i;
      }
    }
    if (best <= radius) ++report.per_mode_counts[nearest];
  }
  const double cover_threshold = std::max(1.0, n / 80.0);
  long total_hq = 0;
  for (int i = 0; i < target.n_modes; ++i) {
    total_hq += report.per_mode_counts[i];
    if (report.per_mode_counts[i] >= cover_threshold) ++report.covered_modes;
  }
  report.high_quality_fraction = n > 0 ? static_cast<double>(total_hq) / n : 0.0;
  return report;
}

double empirical_w2(const Mat& a, const Mat& b) {
  if (a.cols() != b.cols()) {
    throw std::invalid_argument("empirical_w2: clouds must match in size");
  }
  if (a.cols() > 512) {
    throw std::invalid_argument(
        "empirical_w2: cloud size capped at 512 to keep the solver exact");
  }
  DiscreteMeasure ma, mb;
  ma.atoms = a;
  ma.masses = Vec::Constant(a.cols(), 1.0 / a.cols());
  mb.atoms = b;
  mb.masses = Vec::Constant(b.cols(), 1.0 / b.cols());
  const OtSolution sol = solve_ot_exact(ma, mb, CostFunction{1.0});
  return std::sqrt(std::max(sol.objective, 0.0));
}

std::vector<std::pair<Eigen::Vector2d, Eigen::Vector2d>> transport_pairs(
    GeneratorNet& generator, const Mat& x, const Mat& z) {
  const Mat yhat = generator.forward(x, z);
  std::vector<std::pair<Eigen::Vector2d, Eigen::Vector2d>> pairs;
  pairs.reserve(x.cols());
  for (Eigen::Index k = 0; k < x.cols(); ++k) {
    pairs.emplace_back(x.col(k), yhat.col(k));
  }
  return pairs;
}

}  // namespace otlab
