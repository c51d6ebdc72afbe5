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

#ifndef OTLAB_MEASURE_HPP
#define OTLAB_MEASURE_HPP

#include <Eigen/Core>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "otlab/conjugate.hpp"

namespace otlab {

// Finite-support measure: column i of `atoms` carries mass `masses[i]`.
struct DiscreteMeasure {
  Eigen::MatrixXd atoms;   // dim x n
  Eigen::VectorXd masses;  // n, non-negative

  int size() const { return static_cast<int>(masses.size()); }
  int dim() const { return static_cast<int>(atoms.rows()); }
  double total_mass() const { return masses.sum(); }

  // Non-negative masses, consistent shapes, no duplicate atoms.
  void validate() const;

  static DiscreteMeasure uniform(const Eigen::MatrixXd& atoms);
};

// Transport plan between an n-atom and an m-atom measure.
struct TransportPlan {
  Eigen::MatrixXd matrix;  // n x m, non-negative

  Eigen::VectorXd row_marginal() const { return matrix.rowwise().sum(); }
  Eigen::VectorXd col_marginal() const { return matrix.colwise().sum(); }
};

// D_Psi(p|q) = sum_{q_i>0} Psi(p_i/q_i) q_i + Psi'(inf) * sum_{q_i=0} p_i.
// The singular term uses the convention 0 * inf = 0. +inf is a valid return.
double csiszar_divergence(const ConjugatePair& pair,
                          const Eigen::VectorXd& p_masses,
                          const Eigen::VectorXd& q_masses);
double csiszar_divergence(const ConjugatePair& pair, const DiscreteMeasure& p,
                          const DiscreteMeasure& q);

// Thrown by read_instance with a 1-based position inside the file.
struct MeasureParseError : std::runtime_error {
  int line;
  int column;
  MeasureParseError(const std::string& what, int line_, int col_)
      : std::runtime_error(what), line(line_), column(col_) {}
};

// Plain-text instance format ('#' starts a comment):
//   dim <d>
//   mu <n>
//   <d coordinates> <mass>     (n rows)
//   nu <m>
//   <d coordinates> <mass>     (m rows)
struct Instance {
  DiscreteMeasure mu;
  DiscreteMeasure nu;
};

Instance read_instance(std::istream& in, const std::string& filename = "<in>");
Instance read_instance_file(const std::string& path);
void write_instance(std::ostream& out, const Instance& inst);

}  // namespace otlab

#endif  // OTLAB_MEASURE_HPP
