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

#ifndef OTLAB_UOT_HPP
#define OTLAB_UOT_HPP

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "otlab/conjugate.hpp"
#include "otlab/measure.hpp"
#include "otlab/ot_exact.hpp"

namespace otlab {

struct SolveReport {
  double objective = 0.0;
  double kkt_residual = 0.0;
  long iterations = 0;
  bool converged = false;
};

struct UotSolution {
  TransportPlan plan;
  SolveReport report;
};

struct UotOptions {
  long max_iters = 2'000'000;
  double armijo_sigma = 1e-4;
  // Interior margin for primals with a bounded domain (Softplus: ratio < 2).
  double domain_margin = 1e-8;
  std::optional<Eigen::MatrixXd> warm_start;
};

// alpha-scaled unbalanced OT on finite supports:
//   min_{pi >= 0}  sum c_ij pi_ij + alpha D_Psi1(pi_0|mu) + alpha D_Psi2(pi_1|nu)
// by projected gradient descent with Armijo backtracking. Iterates whose
// marginal ratios leave the primal domain are rescaled back to the interior.
// Never returns a silent wrong answer: on iteration exhaustion the report
// carries converged=false and the best iterate found.
UotSolution solve_uot_alpha(const DiscreteMeasure& mu,
                            const DiscreteMeasure& nu,
                            const CostFunction& cost,
                            const ConjugatePair& pair1,
                            const ConjugatePair& pair2, double alpha,
                            double tol, const UotOptions& opts = {});

// Primal alpha-UOT objective of an arbitrary plan (may be +inf).
double uot_objective(const Eigen::MatrixXd& plan, const DiscreteMeasure& mu,
                     const DiscreteMeasure& nu, const CostFunction& cost,
                     const ConjugatePair& pair1, const ConjugatePair& pair2,
                     double alpha);

struct MarginalBoundCheck {
  double lhs = 0.0;  // D_Psi1(pi_0|mu) + D_Psi2(pi_1|nu)
  double rhs = 0.0;  // (tau / alpha) * W2^2(mu, nu)
  bool holds = false;
};

// Discrepancy bound for a converged alpha-UOT optimum: the divergence of the
// plan marginals is bounded by (tau/alpha) times the balanced W2^2 at tau=1.
MarginalBoundCheck marginal_bound_check(const TransportPlan& plan,
                                        const DiscreteMeasure& mu,
                                        const DiscreteMeasure& nu,
                                        const CostFunction& cost,
                                        const ConjugatePair& pair1,
                                        const ConjugatePair& pair2,
                                        double alpha, double tol = 1e-6);

struct ConvergencePoint {
  double alpha = 0.0;
  double tv_to_ot_plan = 0.0;
  SolveReport report;
};

struct ConvergenceCurve {
  std::vector<ConvergencePoint> points;
  bool excluded = false;  // instance skipped (non-unique OT plan)
  std::string reason;
  double ot_objective = 0.0;
};

// TV(pi^alpha, pi*) per alpha, warm-starting each solve from the previous
// one. Instances whose balanced OT plan is not unique are flagged and
// excluded rather than reported.
ConvergenceCurve plan_convergence_curve(const DiscreteMeasure& mu,
                                        const DiscreteMeasure& nu,
                                        const CostFunction& cost,
                                        const ConjugatePair& pair1,
                                        const ConjugatePair& pair2,
                                        const std::vector<double>& alphas,
                                        double tol = 1e-8,
                                        const UotOptions& opts = {});

}  // namespace otlab

#endif  // OTLAB_UOT_HPP
