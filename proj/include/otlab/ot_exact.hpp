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

#ifndef OTLAB_OT_EXACT_HPP
#define OTLAB_OT_EXACT_HPP

#include <Eigen/Core>
#include <vector>

#include "otlab/conjugate.hpp"
#include "otlab/measure.hpp"

namespace otlab {

Eigen::MatrixXd cost_matrix(const DiscreteMeasure& mu,
                            const DiscreteMeasure& nu,
                            const CostFunction& cost);

struct OtSolution {
  TransportPlan plan;
  double objective = 0.0;
  // Dual potentials: u on mu-atoms, v on nu-atoms, with u_i + v_j <= c_ij
  // everywhere and equality on the support of the plan.
  Eigen::VectorXd dual_mu;
  Eigen::VectorXd dual_nu;
  // False when the reduced-cost test finds more tight entries than a basis
  // can hold, i.e. the optimal plan may not be unique.
  bool unique_plan = true;
};

// Exact balanced optimal transport on finite supports via successive
// shortest augmenting paths on the complete bipartite transportation graph.
// Throws std::domain_error if the total masses differ.
OtSolution solve_ot_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                          const CostFunction& cost);

struct CTransform {
  Eigen::VectorXd values;   // v^c on the mu-support
  std::vector<int> argmin;  // attaining nu-atom per mu-atom
};

// v^c(x_i) = min_j ( c(x_i, y_j) - v_j ), exact over the finite nu-support.
CTransform c_transform(const Eigen::VectorXd& v, const DiscreteMeasure& mu,
                       const DiscreteMeasure& nu, const CostFunction& cost);
CTransform c_transform(const Eigen::VectorXd& v, const Eigen::MatrixXd& cost);

// Double transform v^{cc} on the nu-support (c-concave envelope of v).
Eigen::VectorXd cc_transform(const Eigen::VectorXd& v,
                             const Eigen::MatrixXd& cost);

// Semi-dual objective (the supremum form):
//   sum_i -alpha Psi1*(-v^c(x_i)/alpha) mu_i
// + sum_j -alpha Psi2*(-v(y_j)/alpha)  nu_j.
// With Identity pairs this is the balanced Kantorovich semi-dual.
double semi_dual_value(const Eigen::VectorXd& v, const DiscreteMeasure& mu,
                       const DiscreteMeasure& nu, const CostFunction& cost,
                       const ConjugatePair& pair1, const ConjugatePair& pair2,
                       double alpha);

}  // namespace otlab

#endif  // OTLAB_OT_EXACT_HPP
