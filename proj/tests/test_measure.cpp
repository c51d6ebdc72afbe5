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

#include "otlab/measure.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"

using namespace otlab;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd random_simplex(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v / v.sum();
}
}  // namespace

TEST_CASE("csiszar divergence vanishes iff equal, for strictly convex primals") {
  std::mt19937_64 rng(11);
  for (const ConjugatePair pair :
       {ConjugatePair::softplus(), ConjugatePair::klexp()}) {
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::VectorXd q = random_simplex(5, rng);
      CHECK(csiszar_divergence(pair, q, q) == 0.0);
      const Eigen::VectorXd p = random_simplex(5, rng);
      const double d = csiszar_divergence(pair, p, q);
      CHECK(d >= 0.0);
      if ((p - q).cwiseAbs().maxCoeff() > 1e-6) CHECK(d > 0.0);
    }
  }
}

TEST_CASE("csiszar divergence KL example, brute-force value") {
  Eigen::VectorXd p(2), q(2);
  p << 0.5, 0.5;
  q << 0.25, 0.75;
  // sum q_i Psi(p_i/q_i) with Psi(r) = r log r - r + 1  ==  0.5 log(4/3)
  CHECK(csiszar_divergence(ConjugatePair::klexp(), p, q) ==
        doctest::Approx(0.14384103622589046).epsilon(1e-14));
}

TEST_CASE("csiszar divergence with singular mass") {
  Eigen::VectorXd p(3), q(3);
  p << 0.5, 0.25, 0.25;
  q << 0.5, 0.5, 0.0;
  CHECK(csiszar_divergence(ConjugatePair::klexp(), p, q) == kInf);
  // no singular mass where q vanishes: finite
  Eigen::VectorXd p2(3);
  p2 << 0.5, 0.5, 0.0;
  CHECK(std::isfinite(csiszar_divergence(ConjugatePair::klexp(), p2, q)));
}

TEST_CASE("csiszar divergence rejects mismatched index sets") {
  Eigen::VectorXd p(2), q(3);
  p << 0.5, 0.5;
  q << 0.3, 0.3, 0.4;
  CHECK_THROWS_AS(csiszar_divergence(ConjugatePair::klexp(), p, q),
                  std::invalid_argument);
}

TEST_CASE("measure validation") {
  DiscreteMeasure m;
  m.atoms.resize(2, 2);
  m.atoms << 0.0, 1.0, 0.0, 1.0;  // columns (0,0) and (1,1)
  m.masses.resize(2);
  m.masses << 0.5, 0.5;
  SUBCASE("duplicate atoms rejected") {
    m.atoms.col(1) = m.atoms.col(0);
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  }
  SUBCASE("negative mass rejected") {
    m.masses[0] = -0.1;
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  }
  SUBCASE("valid measure passes") { CHECK_NOTHROW(m.validate()); }
}

TEST_CASE("instance round trip") {
  Instance inst;
  inst.mu.atoms.resize(2, 2);
  inst.mu.atoms << 0.0, 1.0, 0.5, -0.25;
  inst.mu.masses.resize(2);
  inst.mu.masses << 0.5, 0.5;
  inst.nu.atoms.resize(2, 3);
  inst.nu.atoms << 1.0, 2.0, 3.0, 0.0, 0.125, -1.0;
  inst.nu.masses.resize(3);
  inst.nu.masses << 0.2, 0.3, 0.5;

  std::stringstream ss;
  write_instance(ss, inst);
  const Instance back = read_instance(ss, "roundtrip");
  CHECK((back.mu.atoms - inst.mu.atoms).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.nu.masses - inst.nu.masses).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("instance parser reports line and column") {
  std::stringstream ss;
  ss << "# a comment\n"
     << "dim 2\n"
     << "mu 1\n"
     << "0.0 oops 1.0\n"
     << "nu 1\n"
     << "1.0 1.0 1.0\n";
  try {
    read_instance(ss, "bad.txt");
    FAIL("expected a parse error");
  } catch (const MeasureParseError& e) {
    CHECK(e.line == 4);
    CHECK(e.column == 5);
    CHECK(std::string(e.what()).find("bad.txt:4:5") != std::string::npos);
  }
}

TEST_CASE("instance parser rejects truncated input") {
  std::stringstream ss;
  ss << "dim 2\nmu 2\n0 0 0.5\n";
  CHECK_THROWS_AS(read_instance(ss), MeasureParseError);
}
