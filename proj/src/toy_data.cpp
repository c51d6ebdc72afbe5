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

namespace otlab {

Eigen::MatrixXd GaussianMixtureTarget::means() const {
  Eigen::MatrixXd m(2, n_modes);
  for (int i = 0; i < n_modes; ++i) {
    const double angle = i * M_PI / 4.0;
    m(0, i) = radius * std::cos(angle);
    m(1, i) = radius * std::sin(angle);
  }
  return m;
}

Eigen::MatrixXd GaussianMixtureTarget::sample(int n,
                                              std::mt19937_64& rng) const {
  const Eigen::MatrixXd m = means();
  std::uniform_int_distribution<int> comp(0, n_modes - 1);
  std::normal_distribution<double> gauss(0.0, sigma);
  Eigen::MatrixXd out(2, n);
  for (int k = 0; k < n; ++k) {
    const int i = comp(rng);
    out(0, k) = m(0, i) + gauss(rng);
    out(1, k) = m(1, i) + gauss(rng);
  }
  return out;
}

Eigen::MatrixXd sample_source(int n, int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd out(dim, n);
  for (int k = 0; k < n; ++k) {
    for (int d = 0; d < dim; ++d) out(d, k) = gauss(rng);
  }
  return out;
}

BatchSample ToyDataSource::next(int batch_size, std::mt19937_64& rng) {
  BatchSample b;
  b.x = sample_source(batch_size, 2, rng);
  b.y = target.sample(batch_size, rng);
  b.z = sample_source(batch_size, aux_dim, rng);
  return b;
}

}  // namespace otlab
