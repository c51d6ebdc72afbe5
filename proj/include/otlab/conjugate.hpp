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

#ifndef OTLAB_CONJUGATE_HPP
#define OTLAB_CONJUGATE_HPP

#include <Eigen/Core>
#include <string>
#include <string_view>

namespace otlab {

// Quadratic transport cost c(x,y) = tau * ||x - y||_2^2.
struct CostFunction {
  double tau = 1.0;

  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x,
                    const Eigen::Ref<const Eigen::VectorXd>& y) const {
    return tau * (x - y).squaredNorm();
  }
  // For callers that already hold the squared distance.
  double from_sq_dist(double sq) const { return tau * sq; }
};

double stable_sigmoid(double x);

// Softplus conjugate SP(x) = 2 log(1 + e^x) - 2 log 2, normalized so that
// SP(0) = 0 and SP'(0) = 1. Evaluated via
// log(1+e^x) = max(x,0) + log(1+e^{-|x|}) so it never overflows.
double softplus_conj(double x);
double softplus_conj_deriv(double x);  // 2 * sigmoid(x)

// Exponential conjugate e^x - 1 of the KL entropy.
// Throws std::range_error if e^x would exceed the double range instead of
// silently returning infinity.
double klexp_conj(double x);
double klexp_conj_deriv(double x);

enum class PairKind { Identity, Softplus, KLExp };

// An entropy function Psi together with its convex conjugate Psi*.
// All conjugates satisfy Psi*(0) = 0 and (Psi*)'(0) = 1; all primals satisfy
// Psi(1) = 0, Psi >= 0 and Psi = +inf on the negatives.
struct ConjugatePair {
  PairKind kind = PairKind::Identity;

  double conj_value(double x) const;   // Psi*(x)
  double conj_deriv(double x) const;   // (Psi*)'(x)
  double primal_value(double y) const; // Psi(y), may be +inf
  double primal_slope_at_infinity() const;

  bool strictly_convex_conj() const { return kind != PairKind::Identity; }

  const char* name() const;
  static ConjugatePair identity() { return {PairKind::Identity}; }
  static ConjugatePair softplus() { return {PairKind::Softplus}; }
  static ConjugatePair klexp() { return {PairKind::KLExp}; }
  static ConjugatePair from_name(std::string_view name);
};

// (alpha Psi)*(x) = alpha * Psi*(x / alpha). Identity pairs return x exactly
// for every alpha. Throws std::domain_error for alpha <= 0.
double alpha_scaled_conj(const ConjugatePair& pair, double alpha, double x);

// d/dx (alpha Psi)*(x) = (Psi*)'(x / alpha).
double alpha_scaled_conj_deriv(const ConjugatePair& pair, double alpha, double x);

// Psi(y). Total on the extended reals: +inf is a valid return value.
double primal_entropy(const ConjugatePair& pair, double y);

}  // namespace otlab

#endif  // OTLAB_CONJUGATE_HPP
