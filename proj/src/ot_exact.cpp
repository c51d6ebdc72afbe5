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

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace otlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Eigen::MatrixXd cost_matrix(const DiscreteMeasure& mu,
                            const DiscreteMeasure& nu,
                            const CostFunction& cost) {
  const int n = mu.size(), m = nu.size();
  Eigen::MatrixXd c(n, m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      c(i, j) = cost.from_sq_dist((mu.atoms.col(i) - nu.atoms.col(j)).squaredNorm());
    }
  }
  return c;
}

// Successive shortest augmenting paths with node potentials (Dijkstra on
// reduced costs, dense linear scan). Nodes 0..n-1 are sources, n..n+m-1
// sinks. Each augmentation saturates a source or a sink, or empties a
// residual arc; for the transportation problem the total number of
// augmentations stays small.
OtSolution solve_ot_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                          const CostFunction& cost) {
  const int n = mu.size(), m = nu.size();
  if (n == 0 || m == 0) {
    throw std::domain_error("solve_ot_exact: empty measure");
  }
  const double mass_gap = std::abs(mu.total_mass() - nu.total_mass());
  const double mass_scale = std::max(mu.total_mass(), nu.total_mass());
  if (mass_gap > 1e-12 * std::max(1.0, mass_scale)) {
    throw std::domain_error(
        "solve_ot_exact: balanced problem requires equal total masses (gap " +
        std::to_string(mass_gap) + ")");
  }

  const Eigen::MatrixXd c = cost_matrix(mu, nu, cost);

  Eigen::VectorXd supply = mu.masses;
  Eigen::VectorXd demand = nu.masses;
  Eigen::MatrixXd flow = Eigen::MatrixXd::Zero(n, m);

  const int nv = n + m;
  std::vector<double> pot(nv, 0.0);  // node potentials
  std::vector<double> dist(nv);
  std::vector<int> parent(nv);  // predecessor node on shortest path
  std::vector<char> done(nv);

  const double total = mu.total_mass();
  double shipped = 0.0;
  // Mass below this threshold counts as saturated (guards float residue).
  const double eps_mass = 1e-15 * std::max(1.0, total);

  const long max_augments = 8L * (n + m) * (n + m) + 64;
  long augments = 0;

  while (total - shipped > eps_mass) {
    if (++augments > max_augments) {
      throw std::runtime_error("solve_ot_exact: augmentation budget exceeded");
    }
    // Multi-source Dijkstra from all sources with remaining supply.
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent.begin(), parent.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    for (int i = 0; i < n; ++i) {
      if (supply[i] > eps_mass) dist[i] = 0.0;
    }
    int target = -1;
    for (;;) {
      int u = -1;
      double best = kInf;
      for (int k = 0; k < nv; ++k) {
        if (!done[k] && dist[k] < best) {
          best = dist[k];
          u = k;
        }
      }
      if (u < 0) break;
      done[u] = 1;
      if (u >= n && demand[u - n] > eps_mass) {
        target = u;
        break;
      }
      if (u < n) {
        // forward arcs i -> j, unbounded capacity
        for (int j = 0; j < m; ++j) {
          const int w = n + j;
          if (done[w]) continue;
          const double rc = c(u, j) + pot[u] - pot[w];
          if (dist[u] + rc < dist[w]) {
            dist[w] = dist[u] + rc;
            parent[w] = u;
          }
        }
      } else {
        // backward arcs j -> i, capacity = current flow
        const int j = u - n;
        for (int i = 0; i < n; ++i) {
          if (done[i] || flow(i, j) <= 0.0) continue;
          const double rc = -c(i, j) + pot[u] - pot[i];
          if (dist[u] + rc < dist[i]) {
            dist[i] = dist[u] + rc;
            parent[i] = u;
          }
        }
      }
    }
    if (target < 0) {
      throw std::runtime_error("solve_ot_exact: no augmenting path found");
    }

    // Bottleneck along the path.
    double delta = demand[target - n];
    int node = target;
    while (parent[node] >= 0) {
      const int prev = parent[node];
      if (node >= n) {
        // arrived via forward arc prev -> node: no capacity bound
      } else {
        // arrived via backward arc prev(sink) -> node(source)
        delta = std::min(delta, flow(node, prev - n));
      }
      node = prev;
    }
    delta = std::min(delta, supply[node]);  // path root is a source

    // Apply the augmentation.
    int cur = target;
    while (parent[cur] >= 0) {
      const int prev = parent[cur];
      if (cur >= n) {
        flow(prev, cur - n) += delta;
      } else {
        flow(cur, prev - n) -= delta;
      }
      cur = prev;
    }
    supply[cur] -= delta;
    demand[target - n] -= delta;
    shipped += delta;

    // Standard capped potential update keeps reduced costs non-negative.
    const double dcap = dist[target];
    for (int k = 0; k < nv; ++k) {
      pot[k] += std::min(dist[k], dcap);
    }
  }

  OtSolution sol;
  sol.plan.matrix = flow;
  sol.objective = (flow.array() * c.array()).sum();
  sol.dual_mu.resize(n);
  sol.dual_nu.resize(m);
  for (int i = 0; i < n; ++i) sol.dual_mu[i] = -pot[i];
  for (int j = 0; j < m; ++j) sol.dual_nu[j] = pot[n + j];

  // Uniqueness heuristic: a non-degenerate basic optimum has exactly
  // n + m - 1 tight (zero reduced cost) entries. More tight entries means
  // alternative optima may exist.
  const double cscale = std::max(1.0, c.cwiseAbs().maxCoeff());
  int tight = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      if (c(i, j) - sol.dual_mu[i] - sol.dual_nu[j] < 1e-9 * cscale) ++tight;
    }
  }
  sol.unique_plan = (tight <= n + m - 1);
  return sol;
}

CTransform c_transform(const Eigen::VectorXd& v, const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  if (v.size() != m) {
    throw std::invalid_argument("c_transform: |v| must match the nu-support");
  }
  CTransform out;
  out.values.resize(n);
  out.argmin.resize(n);
  for (int i = 0; i < n; ++i) {
    double best = kInf;
    int arg = 0;
    for (int j = 0; j < m; ++j) {
      const double val = cost(i, j) - v[j];
      if (val < best) {
        best = val;
        arg = j;
      }
    }
    out.values[i] = best;
    out.argmin[i] = arg;
  }
  return out;
}

CTransform c_transform(const Eigen::VectorXd& v, const DiscreteMeasure& mu,
                       const DiscreteMeasure& nu, const CostFunction& cost) {
  return c_transform(v, cost_matrix(mu, nu, cost));
}

Eigen::VectorXd cc_transform(const Eigen::VectorXd& v,
                             const Eigen::MatrixXd& cost) {
  const CTransform vc = c_transform(v, cost);
  const int m = static_cast<int>(cost.cols());
  Eigen::VectorXd vcc(m);
  for (int j = 0; j < m; ++j) {
    double best = kInf;
    for (int i = 0; i < static_cast<int>(cost.rows()); ++i) {
      best = std::min(best, cost(i, j) - vc.values[i]);
    }
    vcc[j] = best;
  }
  return vcc;
}

double semi_dual_value(const Eigen::VectorXd& v, const DiscreteMeasure& mu,
                       const DiscreteMeasure& nu, const CostFunction& cost,
                       const ConjugatePair& pair1, const ConjugatePair& pair2,
                       double alpha) {
  const CTransform vc = c_transform(v, mu, nu, cost);
  double value = 0.0;
  for (int i = 0; i < mu.size(); ++i) {
    value -= alpha_scaled_conj(pair1, alpha, -vc.values[i]) * mu.masses[i];
  }
  for (int j = 0; j < nu.size(); ++j) {
    value -= alpha_scaled_conj(pair2, alpha, -v[j]) * nu.masses[j];
  }
  return value;
}

}  // namespace otlab
