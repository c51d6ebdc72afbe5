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

#include "otlab/uot.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace otlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Psi'(r) on the interior of the primal domain.
double primal_deriv(const ConjugatePair& pair, double r) {
  switch (pair.kind) {
    case PairKind::KLExp:
      return std::log(r);
    case PairKind::Softplus:
      return std::log(r / (2.0 - r));
    case PairKind::Identity:
      break;
  }
  throw std::invalid_argument(
      "solve_uot_alpha: requires a strictly convex primal (Softplus or "
      "KLExp); use solve_ot_exact for the balanced problem");
}

// Upper domain bound of Psi (ratio axis); +inf when unbounded.
double domain_upper(const ConjugatePair& pair) {
  return pair.kind == PairKind::Softplus ? 2.0 : kInf;
}

struct Problem {
  const Eigen::MatrixXd& c;
  const Eigen::VectorXd& mu;
  const Eigen::VectorXd& nu;
  const ConjugatePair& p1;
  const ConjugatePair& p2;
  double alpha;
  double margin;

  double objective(const Eigen::MatrixXd& pi) const {
    const Eigen::VectorXd r = pi.rowwise().sum().cwiseQuotient(mu);
    const Eigen::VectorXd s = pi.colwise().sum().transpose().cwiseQuotient(nu);
    const double up1 = domain_upper(p1) - margin;
    const double up2 = domain_upper(p2) - margin;
    if ((r.array() > up1).any() || (s.array() > up2).any()) return kInf;
    double f = (pi.array() * c.array()).sum();
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      f += alpha * p1.primal_value(r[i]) * mu[i];
    }
    for (Eigen::Index j = 0; j < s.size(); ++j) {
      f += alpha * p2.primal_value(s[j]) * nu[j];
    }
    return f;
  }

  // Gradient; requires strictly positive marginals.
  void gradient(const Eigen::MatrixXd& pi, Eigen::MatrixXd& g) const {
    const Eigen::VectorXd r = pi.rowwise().sum().cwiseQuotient(mu);
    const Eigen::VectorXd s = pi.colwise().sum().transpose().cwiseQuotient(nu);
    Eigen::VectorXd dr(r.size()), ds(s.size());
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      dr[i] = alpha * primal_deriv(p1, r[i]);
    }
    for (Eigen::Index j = 0; j < s.size(); ++j) {
      ds[j] = alpha * primal_deriv(p2, s[j]);
    }
    g = c;
    g.colwise() += dr;
    g.rowwise() += ds.transpose();
  }

  bool interior_marginals(const Eigen::MatrixXd& pi) const {
    const Eigen::VectorXd row = pi.rowwise().sum();
    const Eigen::VectorXd col = pi.colwise().sum();
    return (row.array() > 0.0).all() && (col.array() > 0.0).all();
  }

  // Clamp to the non-negative orthant, then rescale rows/columns whose
  // marginal ratio left the primal domain back to its interior.
  void project(Eigen::MatrixXd& pi) const {
    pi = pi.cwiseMax(0.0);
    const double up1 = domain_upper(p1);
    if (std::isfinite(up1)) {
      const double cap = up1 - margin;
      for (Eigen::Index i = 0; i < pi.rows(); ++i) {
        const double r = pi.row(i).sum() / mu[i];
        if (r > cap) pi.row(i) *= cap / r;
      }
    }
    const double up2 = domain_upper(p2);
    if (std::isfinite(up2)) {
      const double cap = up2 - margin;
      for (Eigen::Index j = 0; j < pi.cols(); ++j) {
        const double s = pi.col(j).sum() / nu[j];
        if (s > cap) pi.col(j) *= cap / s;
      }
    }
  }

  // Psi''(r) for the supported primals.
  static double primal_curvature(const ConjugatePair& pair, double r) {
    return pair.kind == PairKind::KLExp ? 1.0 / r : 2.0 / (r * (2.0 - r));
  }

  // Step below 1/L for the local gradient Lipschitz constant: the Hessian
  // quadratic form is bounded by alpha (m max_i Psi1''(r_i)/mu_i
  // + n max_j Psi2''(s_j)/nu_j) via Cauchy-Schwarz on the marginal sums.
  double safe_step(const Eigen::MatrixXd& pi) const {
    const Eigen::VectorXd r = pi.rowwise().sum().cwiseQuotient(mu);
    const Eigen::VectorXd s = pi.colwise().sum().transpose().cwiseQuotient(nu);
    double k1 = 0.0, k2 = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      k1 = std::max(k1, primal_curvature(p1, r[i]) / mu[i]);
    }
    for (Eigen::Index j = 0; j < s.size(); ++j) {
      k2 = std::max(k2, primal_curvature(p2, s[j]) / nu[j]);
    }
    const double lip =
        alpha * (static_cast<double>(pi.cols()) * k1 +
                 static_cast<double>(pi.rows()) * k2);
    return 0.9 / std::max(lip, 1e-30);
  }

  // max_ij | positive entries: g_ij ; zero entries: min(g_ij, 0) |.
  double kkt_residual(const Eigen::MatrixXd& pi,
                      const Eigen::MatrixXd& g) const {
    double res = 0.0;
    for (Eigen::Index i = 0; i < pi.rows(); ++i) {
      for (Eigen::Index j = 0; j < pi.cols(); ++j) {
        const double v =
            pi(i, j) > 0.0 ? std::abs(g(i, j)) : std::max(-g(i, j), 0.0);
        res = std::max(res, v);
      }
    }
    return res;
  }
};

}  // namespace

double uot_objective(const Eigen::MatrixXd& plan, const DiscreteMeasure& mu,
                     const DiscreteMeasure& nu, const CostFunction& cost,
                     const ConjugatePair& pair1, const ConjugatePair& pair2,
                     double alpha) {
  const Eigen::MatrixXd c = cost_matrix(mu, nu, cost);
  double f = (plan.array() * c.array()).sum();
  f += alpha * csiszar_divergence(pair1, plan.rowwise().sum(), mu.masses);
  f += alpha * csiszar_divergence(
                   pair2, plan.colwise().sum().transpose(), nu.masses);
  return f;
}

namespace {
UotSolution solve_uot_alpha_core(const DiscreteMeasure& mu,
                                 const DiscreteMeasure& nu,
                                 const CostFunction& cost,
                                 const ConjugatePair& pair1,
                                 const ConjugatePair& pair2, double alpha,
                                 double tol, const UotOptions& opts) {
  const int n = mu.size(), m = nu.size();
  const Eigen::MatrixXd c = cost_matrix(mu, nu, cost);
  const Problem prob{c,     mu.masses, nu.masses,         pair1,
                     pair2, alpha,     opts.domain_margin};

  Eigen::MatrixXd pi;
  if (opts.warm_start) {
    pi = *opts.warm_start;
    prob.project(pi);
    if (!prob.interior_marginals(pi)) pi.setConstant(0.0);
  }
  if (pi.size() == 0 || !prob.interior_marginals(pi)) {
    // Product initialization: row ratios 1, column ratios |mu|/|nu|.
    pi = mu.masses * nu.masses.transpose() / nu.total_mass();
    prob.project(pi);
  }

  double f = prob.objective(pi);
  Eigen::MatrixXd g(n, m), gc(n, m), cand(n, m);
  double step = 1.0 / (alpha + c.cwiseAbs().maxCoeff() + 1.0);

  UotSolution sol;
  long it = 0;
  bool converged = false;
  double residual = kInf;

  // Phase 1: projected gradient with Armijo backtracking. Near the optimum
  // the objective decrease drops below double rounding, so the line search
  // eventually stalls around residuals of ~1e-8.
  for (; it < opts.max_iters; ++it) {
    prob.gradient(pi, g);
    residual = prob.kkt_residual(pi, g);
    if (residual <= tol) {
      converged = true;
      break;
    }
    bool accepted = false;
    bool stalled = false;
    for (int bt = 0; bt < 80; ++bt) {
      cand = pi - step * g;
      prob.project(cand);
      if ((cand - pi).cwiseAbs().maxCoeff() == 0.0) {
        // Step underflowed against the iterate: smaller steps cannot move
        // either. Hand over to the residual-driven polish phase.
        stalled = true;
        break;
      }
      if (prob.interior_marginals(cand)) {
        const double fc = prob.objective(cand);
        const double decr = (g.array() * (cand - pi).array()).sum();
        if (fc <= f + opts.armijo_sigma * decr) {
          pi.swap(cand);
          f = fc;
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted || stalled) break;
    step = std::min(step * 2.0, 1e6);
  }

  // Phase 2: unconditional fixed-step projected gradient with a step below
  // 1/L, tracking the iterate with the best KKT residual seen. Objective
  // comparisons are useless here (their differences sit under double
  // rounding), so the step is guarded by the residual trend instead.
  if (!converged) {
    Eigen::MatrixXd best = pi;
    double best_res = residual;
    double t = prob.safe_step(pi);
    double last_check_res = kInf;
    const long check_every = 2000;
    long next_check = it + check_every;
    while (it < opts.max_iters) {
      ++it;
      prob.gradient(pi, g);
      residual = prob.kkt_residual(pi, g);
      if (residual < best_res) {
        best_res = residual;
        best = pi;
      }
      if (best_res <= tol) {
        converged = true;
        break;
      }
      if (it >= next_check) {
        // No measurable progress at this step size: be more conservative.
        if (best_res > 0.999 * last_check_res) {
          t *= 0.5;
          if (t < 1e-18) break;
        } else {
          t = std::min(t * 1.25, prob.safe_step(pi));
        }
        last_check_res = best_res;
        next_check = it + check_every;
      }
      cand = pi - t * g;
      prob.project(cand);
      if ((cand - pi).cwiseAbs().maxCoeff() == 0.0) break;
      if (!prob.interior_marginals(cand)) {
        t *= 0.5;
        if (t < 1e-18) break;
        continue;
      }
      pi.swap(cand);
    }
    pi = best;
    residual = best_res;
  }

  sol.plan.matrix = pi;
  sol.report.objective = prob.objective(pi);
  sol.report.kkt_residual = residual;
  sol.report.iterations = it;
  sol.report.converged = converged;
  return sol;
}
}  // namespace

UotSolution solve_uot_alpha(const DiscreteMeasure& mu,
                            const DiscreteMeasure& nu,
                            const CostFunction& cost,
                            const ConjugatePair& pair1,
                            const ConjugatePair& pair2, double alpha,
                            double tol, const UotOptions& opts) {
  if (!(alpha > 0.0)) {
    throw std::domain_error("solve_uot_alpha: alpha must be positive");
  }
  if ((mu.masses.array() <= 0.0).any() || (nu.masses.array() <= 0.0).any()) {
    throw std::domain_error(
        "solve_uot_alpha: masses must be strictly positive");
  }
  // Large alpha makes the divergence terms stiff; a cold start crawls. Climb
  // a geometric alpha ladder instead, warm-starting each stage.
  constexpr double kColdAlphaCap = 50.0;
  if (!opts.warm_start && alpha > kColdAlphaCap) {
    std::vector<double> ladder{alpha};
    for (double a = alpha / 10.0; a > kColdAlphaCap; a /= 10.0) {
      ladder.push_back(a);
    }
    ladder.push_back(kColdAlphaCap);
    UotOptions stage = opts;
    UotSolution sol;
    long total_iters = 0;
    for (auto ai = ladder.rbegin(); ai != ladder.rend(); ++ai) {
      const bool last = std::next(ai) == ladder.rend();
      const double stage_tol = last ? tol : std::max(tol, 1e-6);
      sol = solve_uot_alpha_core(mu, nu, cost, pair1, pair2, *ai, stage_tol,
                                 stage);
      total_iters += sol.report.iterations;
      stage.warm_start = sol.plan.matrix;
    }
    sol.report.iterations = total_iters;
    return sol;
  }
  return solve_uot_alpha_core(mu, nu, cost, pair1, pair2, alpha, tol, opts);
}

MarginalBoundCheck marginal_bound_check(const TransportPlan& plan,
                                        const DiscreteMeasure& mu,
                                        const DiscreteMeasure& nu,
                                        const CostFunction& cost,
                                        const ConjugatePair& pair1,
                                        const ConjugatePair& pair2,
                                        double alpha, double tol) {
  MarginalBoundCheck out;
  out.lhs = csiszar_divergence(pair1, plan.row_marginal(), mu.masses) +
            csiszar_divergence(pair2, plan.col_marginal(), nu.masses);
  const double w22 = solve_ot_exact(mu, nu, CostFunction{1.0}).objective;
  out.rhs = cost.tau / alpha * w22;
  out.holds = out.lhs <= out.rhs + tol;
  return out;
}

ConvergenceCurve plan_convergence_curve(const DiscreteMeasure& mu,
                                        const DiscreteMeasure& nu,
                                        const CostFunction& cost,
                                        const ConjugatePair& pair1,
                                        const ConjugatePair& pair2,
                                        const std::vector<double>& alphas,
                                        double tol, const UotOptions& opts) {
  for (std::size_t k = 1; k < alphas.size(); ++k) {
    if (!(alphas[k] > alphas[k - 1])) {
      throw std::invalid_argument(
          "plan_convergence_curve: alphas must be strictly increasing");
    }
  }
  ConvergenceCurve curve;
  const OtSolution ot = solve_ot_exact(mu, nu, cost);
  curve.ot_objective = ot.objective;
  if (!ot.unique_plan) {
    curve.excluded = true;
    curve.reason = "balanced OT plan is not unique (degenerate cost ties)";
    return curve;
  }
  UotOptions local = opts;
  for (const double alpha : alphas) {
    const UotSolution u =
        solve_uot_alpha(mu, nu, cost, pair1, pair2, alpha, tol, local);
    ConvergencePoint pt;
    pt.alpha = alpha;
    pt.tv_to_ot_plan = 0.5 * (u.plan.matrix - ot.plan.matrix).cwiseAbs().sum();
    pt.report = u.report;
    curve.points.push_back(pt);
    local.warm_start = u.plan.matrix;
  }
  return curve;
}

}  // namespace otlab
