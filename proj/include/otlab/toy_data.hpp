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

#ifndef OTLAB_TOY_DATA_HPP
#define OTLAB_TOY_DATA_HPP

#include <Eigen/Core>
#include <random>

namespace otlab {

// Eight equal-weight Gaussians with means on a radius-12 circle,
// m_i = 12 (cos(i pi/4), sin(i pi/4)), isotropic sigma = 0.4.
struct GaussianMixtureTarget {
  int n_modes = 8;
  double radius = 12.0;
  double sigma = 0.4;

  Eigen::MatrixXd means() const;  // 2 x n_modes
  Eigen::MatrixXd sample(int n, std::mt19937_64& rng) const;
};

// i.i.d. standard normal prior samples, dim x n.
Eigen::MatrixXd sample_source(int n, int dim, std::mt19937_64& rng);

// One training batch: prior points x, data points y, auxiliary noise z.
struct BatchSample {
  Eigen::MatrixXd x;  // 2 x B
  Eigen::MatrixXd y;  // 2 x B
  Eigen::MatrixXd z;  // z_dim x B
};

struct DataSource {
  virtual ~DataSource() = default;
  virtual BatchSample next(int batch_size, std::mt19937_64& rng) = 0;
};

struct ToyDataSource : DataSource {
  GaussianMixtureTarget target;
  int aux_dim = 2;

  BatchSample next(int batch_size, std::mt19937_64& rng) override;
};

}  // namespace otlab

#endif  // OTLAB_TOY_DATA_HPP
