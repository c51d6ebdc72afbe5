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

#include "otlab/conjugate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace otlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLog2 = 0.69314718055994530942;
// Largest x with e^x finite in double precision.
constexpr double kMaxExpArg = 709.7827128933839;
}  // namespace

double stable_sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus_conj(double x) {
  // 2 log(1+e^x) - 2 log 2 = 2 max(x,0) + 2 log(1+e^{-|x|}) - 2 log 2
  return 2.0 * std::max(x, 0.0) + 2.0 * std::log1p(std::exp(-std::abs(x))) -
         2.0 * kLog2;
}

double softplus_conj_deriv(double x) { return 2.0 * stable_sigmoid(x); }

double klexp_conj(double x) {
  if (x > kMaxExpArg) {
    throw std::range_error("klexp_conj: e^x overflows double range at x=" +
                           std::to_string(x));
  }
  return std::expm1(x);
}

double klexp_conj_deriv(double x) {
  if (x > kMaxExpArg) {
    throw std::range_error(
        "klexp_conj_deriv: e^x overflows double range at x=" +
        std::to_string(x));
  }
  return std::exp(x);
}

double ConjugatePair::conj_value(double x) const {
  switch (kind) {
    case PairKind::Identity: return x;
    case PairKind::Softplus: return softplus_conj(x);
    case PairKind::KLExp: return klexp_conj(x);
  }
  return 0.0;
}

double ConjugatePair::conj_deriv(double x) const {
  switch (kind) {
    case PairKind::Identity: return 1.0;
    case PairKind::Softplus: return softplus_conj_deriv(x);
    case PairKind::KLExp: return klexp_conj_deriv(x);
  }
  return 0.0;
}

double ConjugatePair::primal_value(double y) const {
  if (y < 0.0) return kInf;
  switch (kind) {
    case PairKind::Identity:
      // Indicator of exact mass preservation.
      return y == 1.0 ? 0.0 : kInf;
    case PairKind::Softplus:
      if (y == 0.0) return 2.0 * kLog2;
      if (y >= 2.0) return kInf;
      return y * std::log(y / (2.0 - y)) + 2.0 * std::log(2.0 - y);
    case PairKind::KLExp:
      if (y == 0.0) return 1.0;
      return y * std::log(y) - y + 1.0;
  }
  return kInf;
}

double ConjugatePair::primal_slope_at_infinity() const {
  // All three primals grow super-linearly (or jump to +inf).
  return kInf;
}

const char* ConjugatePair::name() const {
  switch (kind) {
    case PairKind::Identity: return "Identity";
    case PairKind::Softplus: return "Softplus";
    case PairKind::KLExp: return "KLExp";
  }
  return "?";
}

ConjugatePair ConjugatePair::from_name(std::string_view name) {
  if (name == "Identity") return identity();
  if (name == "Softplus") return softplus();
  if (name == "KLExp") return klexp();
  throw std::invalid_argument("unknown conjugate pair '" + std::string(name) +
                              "' (valid: Identity, Softplus, KLExp)");
}

double alpha_scaled_conj(const ConjugatePair& pair, double alpha, double x) {
  if (!(alpha > 0.0)) {
    throw std::domain_error("alpha_scaled_conj: alpha must be positive, got " +
                            std::to_string(alpha));
  }
  if (pair.kind == PairKind::Identity) return x;
  return alpha * pair.conj_value(x / alpha);
}

double alpha_scaled_conj_deriv(const ConjugatePair& pair, double alpha,
                               double x) {
  if (!(alpha > 0.0)) {
    throw std::domain_error(
        "alpha_scaled_conj_deriv: alpha must be positive, got " +
        std::to_string(alpha));
  }
  if (pair.kind == PairKind::Identity) return 1.0;
  return pair.conj_deriv(x / alpha);
}

double primal_entropy(const ConjugatePair& pair, double y) {
  return pair.primal_value(y);
}

}  // namespace otlab
