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

#include "otlab/ot_exact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"

using namespace otlab;

namespace {

DiscreteMeasure random_measure(int n, int dim, std::mt19937_64& rng,
                               bool uniform_masses = false) {
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::uniform_real_distribution<double> mass(0.1, 1.0);
  DiscreteMeasure m;
  m.atoms.resize(dim, n);
  m.masses.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int d = 0; d < dim; ++d) m.atoms(d, i) = coord(rng);
    m.masses[i] = uniform_masses ? 1.0 : mass(rng);
  }
  m.masses /= m.masses.sum();
  return m;
}

// Brute-force oracle for uniform-mass n x n instances: minimum over all
// permutation couplings.
double permutation_oracle(const Eigen::MatrixXd& c) {
  const int n = static_cast<int>(c.rows());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += c(i, perm[i]);
    best = std::min(best, total / n);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST_CASE("identical measures couple on the diagonal with zero cost") {
  std::mt19937_64 rng(3);
  const DiscreteMeasure mu = random_measure(5, 2, rng);
  const OtSolution sol = solve_ot_exact(mu, mu, CostFunction{1.0});
  CHECK(sol.objective == doctest::Approx(0.0).epsilon(1e-12));
  for (int i = 0; i < 5; ++i) {
    CHECK(sol.plan.matrix(i, i) == doctest::Approx(mu.masses[i]).epsilon(1e-12));
  }
}

TEST_CASE("two crossing atoms resolve to the zero-cost permutation") {
  DiscreteMeasure mu, nu;
  mu.atoms.resize(1, 2);
  mu.atoms << 0.0, 1.0;
  mu.masses = Eigen::VectorXd::Constant(2, 0.5);
  nu.atoms.resize(1, 2);
  nu.atoms << 1.0, 0.0;
  nu.masses = Eigen::VectorXd::Constant(2, 0.5);
  const OtSolution sol = solve_ot_exact(mu, nu, CostFunction{1.0});
  // brute force over the two couplings: identity costs 1, swap costs 0
  CHECK(sol.objective == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sol.plan.matrix(0, 1) == doctest::Approx(0.5));
  CHECK(sol.plan.matrix(1, 0) == doctest::Approx(0.5));
}

TEST_CASE("uniform 4-atom instances match exhaustive permutation search") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    const DiscreteMeasure mu = random_measure(4, 2, rng, true);
    const DiscreteMeasure nu = random_measure(4, 2, rng, true);
    const CostFunction cost{1.0};
    const OtSolution sol = solve_ot_exact(mu, nu, cost);
    const double expect = permutation_oracle(cost_matrix(mu, nu, cost));
    CHECK(sol.objective == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("2x2 with general masses matches the endpoint oracle") {
  // With marginals fixed, the 2x2 plan has one degree of freedom t and a
  // linear objective, so the optimum sits at an endpoint of t's interval.
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 25; ++trial) {
    const DiscreteMeasure mu = random_measure(2, 2, rng);
    DiscreteMeasure nu = random_measure(2, 2, rng);
    nu.masses *= mu.total_mass() / nu.total_mass();
    const CostFunction cost{0.7};
    const Eigen::MatrixXd c = cost_matrix(mu, nu, cost);
    const double tlo = std::max(0.0, mu.masses[0] - nu.masses[1]);
    const double thi = std::min(mu.masses[0], nu.masses[0]);
    const auto obj = [&](double t) {
      return c(0, 0) * t + c(0, 1) * (mu.masses[0] - t) +
             c(1, 0) * (nu.masses[0] - t) +
             c(1, 1) * (mu.masses[1] - nu.masses[0] + t);
    };
    const double expect = std::min(obj(tlo), obj(thi));
    const OtSolution sol = solve_ot_exact(mu, nu, cost);
    CHECK(sol.objective == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("marginal constraints hold to 1e-10") {
  std::mt19937_64 rng(41);
  const DiscreteMeasure mu = random_measure(7, 3, rng);
  DiscreteMeasure nu = random_measure(9, 3, rng);
  nu.masses *= mu.total_mass() / nu.total_mass();
  const OtSolution sol = solve_ot_exact(mu, nu, CostFunction{2.0});
  CHECK((sol.plan.row_marginal() - mu.masses).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((sol.plan.col_marginal() - nu.masses).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((sol.plan.matrix.array() >= 0.0).all());
}

TEST_CASE("unequal total masses are a domain error") {
  std::mt19937_64 rng(5);
  const DiscreteMeasure mu = random_measure(3, 2, rng);
  DiscreteMeasure nu = random_measure(3, 2, rng);
  nu.masses *= 2.0;
  CHECK_THROWS_AS(solve_ot_exact(mu, nu, CostFunction{1.0}), std::domain_error);
}

TEST_CASE("dual potentials are feasible and close the gap") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const DiscreteMeasure mu = random_measure(5, 2, rng);
    DiscreteMeasure nu = random_measure(5, 2, rng);
    nu.masses *= mu.total_mass() / nu.total_mass();
    const CostFunction cost{1.0};
    const OtSolution sol = solve_ot_exact(mu, nu, cost);
    const Eigen::MatrixXd c = cost_matrix(mu, nu, cost);
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        CHECK(sol.dual_mu[i] + sol.dual_nu[j] <= c(i, j) + 1e-9);
      }
    }
    const double dual_obj = sol.dual_mu.dot(mu.masses) + sol.dual_nu.dot(nu.masses);
    CHECK(dual_obj == doctest::Approx(sol.objective).epsilon(1e-9));
  }
}

TEST_CASE("c-transform basics") {
  std::mt19937_64 rng(61);
  const DiscreteMeasure mu = random_measure(4, 2, rng);
  const DiscreteMeasure nu = random_measure(5, 2, rng);
  const CostFunction cost{1.0};
  const Eigen::MatrixXd c = cost_matrix(mu, nu, cost);

  SUBCASE("v = 0 gives the pointwise minimum cost") {
    const CTransform vc = c_transform(Eigen::VectorXd::Zero(5), c);
    for (int i = 0; i < 4; ++i) {
      CHECK(vc.values[i] == doctest::Approx(c.row(i).minCoeff()).epsilon(1e-15));
    }
  }
  SUBCASE("single-atom support is a one-point infimum") {
    const Eigen::MatrixXd c1 = c.col(2);
    Eigen::VectorXd v(1);
    v << 0.375;
    const CTransform vc = c_transform(v, c1);
    for (int i = 0; i < 4; ++i) {
      CHECK(vc.values[i] == doctest::Approx(c1(i, 0) - 0.375));
      CHECK(vc.argmin[i] == 0);
    }
  }
}

TEST_CASE("double c-transform is a closure operator") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> uv(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const DiscreteMeasure mu = random_measure(5, 2, rng);
    const DiscreteMeasure nu = random_measure(5, 2, rng);
    const Eigen::MatrixXd c = cost_matrix(mu, nu, CostFunction{1.0});
    Eigen::VectorXd v(5);
    for (int j = 0; j < 5; ++j) v[j] = uv(rng);

    const Eigen::VectorXd vcc = cc_transform(v, c);
    // v^{cc} >= v pointwise
    for (int j = 0; j < 5; ++j) CHECK(vcc[j] >= v[j] - 1e-12);
    // (v^{cc})^c = v^c exactly on finite supports
    const CTransform vc = c_transform(v, c);
    const CTransform vccc = c_transform(vcc, c);
    CHECK((vc.values - vccc.values).cwiseAbs().maxCoeff() <= 1e-12);
    // idempotence: (v^{cc})^{cc} = v^{cc}
    const Eigen::VectorXd vcccc = cc_transform(vcc, c);
    CHECK((vcccc - vcc).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("semi-dual at LP-optimal potentials equals the primal objective") {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 20; ++trial) {
    const DiscreteMeasure mu = random_measure(3, 2, rng);
    DiscreteMeasure nu = random_measure(3, 2, rng);
    nu.masses *= mu.total_mass() / nu.total_mass();
    const CostFunction cost{1.0};
    const OtSolution sol = solve_ot_exact(mu, nu, cost);
    const double sd =
        semi_dual_value(sol.dual_nu, mu, nu, cost, ConjugatePair::identity(),
                        ConjugatePair::identity(), 1.0);
    CHECK(sd == doctest::Approx(sol.objective).epsilon(1e-6));
  }
}

TEST_CASE("semi-dual of v=0 with zero cost vanishes for any pairs") {
  std::mt19937_64 rng(97);
  const DiscreteMeasure mu = random_measure(4, 2, rng);
  const DiscreteMeasure nu = random_measure(4, 2, rng);
  const Eigen::VectorXd v = Eigen::VectorXd::Zero(4);
  for (const ConjugatePair pair :
       {ConjugatePair::identity(), ConjugatePair::softplus(),
        ConjugatePair::klexp()}) {
    CHECK(semi_dual_value(v, mu, nu, CostFunction{0.0}, pair, pair, 1.0) ==
          doctest::Approx(0.0).epsilon(1e-15));
  }
}

TEST_CASE("weak duality against the balanced primal for random potentials") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> uv(-0.5, 0.5);
  const DiscreteMeasure mu = random_measure(5, 2, rng);
  DiscreteMeasure nu = random_measure(5, 2, rng);
  nu.masses *= mu.total_mass() / nu.total_mass();
  const CostFunction cost{1.0};
  const double primal = solve_ot_exact(mu, nu, cost).objective;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd v(5);
    for (int j = 0; j < 5; ++j) v[j] = uv(rng);
    const double sd = semi_dual_value(v, mu, nu, cost, ConjugatePair::identity(),
                                      ConjugatePair::identity(), 1.0);
    CHECK(sd <= primal + 1e-10);
  }
}
