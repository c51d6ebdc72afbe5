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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "otlab/config.hpp"
#include "otlab/experiments.hpp"
#include "otlab/plot.hpp"
#include "otlab/uot.hpp"

namespace fs = std::filesystem;
using namespace otlab;

namespace {

std::string output_root() {
  const char* env = std::getenv("OTLAB_OUT_ROOT");
  return env != nullptr ? env : "out";
}

std::vector<double> parse_alpha_list(const std::string& csv) {
  std::vector<double> alphas;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) alphas.push_back(std::stod(tok));
  }
  if (alphas.empty()) throw std::invalid_argument("empty alpha list");
  return alphas;
}

DiscreteMeasure random_oracle_measure(int atoms, int dim,
                                      std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::uniform_real_distribution<double> mass(0.1, 1.0);
  DiscreteMeasure m;
  m.atoms.resize(dim, atoms);
  m.masses.resize(atoms);
  for (int i = 0; i < atoms; ++i) {
    for (int d = 0; d < dim; ++d) m.atoms(d, i) = coord(rng);
    m.masses[i] = mass(rng);
  }
  m.masses /= m.masses.sum();
  return m;
}

int cmd_train(const std::string& config_path, std::int64_t seed_arg,
              const std::string& out_arg, const std::string& preset_arg) {
  TrainerConfig cfg;
  if (!config_path.empty()) {
    cfg = load_run_config(config_path);
  } else if (!preset_arg.empty()) {
    cfg = TrainerConfig::for_preset(ModelPreset::by_name(preset_arg));
  } else {
    std::cerr << "train: need --config or --preset\n";
    return 2;
  }
  if (!preset_arg.empty() && !config_path.empty()) {
    // --preset overrides the config's preset but keeps trainer settings
    const ModelPreset preset = ModelPreset::by_name(preset_arg);
    cfg.preset = preset;
    cfg.adam_beta1 = preset.default_beta1;
  }
  if (seed_arg >= 0) cfg.seed = static_cast<std::uint64_t>(seed_arg);
  if (!out_arg.empty()) cfg.output_dir = out_arg;
  if (cfg.output_dir.empty()) {
    cfg.output_dir =
        (fs::path(output_root()) /
         (std::string(preset_name_str(cfg.preset.name)) + "_seed" +
          std::to_string(cfg.seed)))
            .string();
  }
  cfg.validate();
  cfg.config_hash = config_hash(cfg);

  std::cout << "training " << preset_name_str(cfg.preset.name) << " seed "
            << cfg.seed << " -> " << cfg.output_dir << "\n";
  const RunRecord record = run_experiment(cfg);
  std::cout << "status: " << record.status << "\n";
  if (record.final_mode_report) {
    std::cout << "covered modes: " << record.final_mode_report->covered_modes
              << "/8, final W2: " << record.final_w2 << "\n";
  }
  if (record.finished()) {
    plot_run_dir(cfg.output_dir);
    std::cout << "figures written to " << cfg.output_dir << "\n";
  }
  return record.finished() ? 0 : 1;
}

int cmd_sweep(const std::string& config_path, const std::string& out_arg,
              int parallel) {
  SweepSpec spec = load_sweep_config(config_path);
  if (!out_arg.empty()) spec.output_dir = out_arg;
  if (spec.output_dir.empty()) {
    spec.output_dir = (fs::path(output_root()) / "sweep").string();
  }
  const auto summaries = run_sweep(spec, parallel);
  int failures = 0;
  for (const auto& cell : summaries) {
    std::cout << cell.cell.label() << ": " << cell.n_finished << "/"
              << cell.runs.size() << " finished";
    if (cell.n_finished > 0) {
      std::cout << ", covered " << cell.covered_mean << " +- "
                << cell.covered_std << ", W2 " << cell.w2_mean << " +- "
                << cell.w2_std;
    }
    std::cout << "\n";
    for (const auto& run : cell.runs) {
      if (run.status != "finished") {
        std::cout << "  seed " << run.seed << ": " << run.status << "\n";
        ++failures;
      }
    }
  }
  plot_sweep_dir(spec.output_dir);
  std::cout << "table: " << spec.output_dir << "/table.csv\n";
  return 0;  // individual failures are recorded, not fatal
}

int cmd_oracle(const std::string& instance_path, int atoms, int dim,
               std::int64_t seed, const std::string& alphas_csv,
               const std::string& pair_name, double tau, double tol,
               const std::string& out_arg) {
  const fs::path dir =
      out_arg.empty() ? fs::path(output_root()) / "oracle" : fs::path(out_arg);
  fs::create_directories(dir);

  Instance inst;
  if (!instance_path.empty()) {
    inst = read_instance_file(instance_path);
  } else {
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    inst.mu = random_oracle_measure(atoms, dim, rng);
    inst.nu = random_oracle_measure(atoms, dim, rng);
    std::ofstream snap(dir / "instance.txt");
    write_instance(snap, inst);
  }
  inst.mu.validate();
  inst.nu.validate();
  // the balanced reference needs equal masses
  inst.nu.masses *= inst.mu.total_mass() / inst.nu.total_mass();

  const std::vector<double> alphas = parse_alpha_list(alphas_csv);
  const ConjugatePair pair = ConjugatePair::from_name(pair_name);
  const CostFunction cost{tau};

  const ConvergenceCurve curve =
      plan_convergence_curve(inst.mu, inst.nu, cost, pair, pair, alphas, tol);

  nlohmann::ordered_json report;
  report["tau"] = tau;
  report["pair"] = pair.name();
  report["atoms"] = inst.mu.size();
  report["dim"] = inst.mu.dim();
  report["ot_objective"] = curve.ot_objective;
  report["excluded"] = curve.excluded;
  if (curve.excluded) {
    report["reason"] = curve.reason;
    std::cout << "instance excluded: " << curve.reason << "\n";
  }

  int unconverged = 0;
  nlohmann::ordered_json points = nlohmann::ordered_json::array();
  std::ofstream bounds_csv(dir / "bounds.csv", std::ios::trunc);
  bounds_csv << "alpha,tv,kkt_residual,converged,lhs,rhs,holds\n";
  if (!curve.excluded) {
    UotOptions opts;
    for (const auto& pt : curve.points) {
      // re-solve cheaply from scratch warm-started along the curve for the
      // bound check's plan (the curve does not retain plans)
      const UotSolution sol = solve_uot_alpha(inst.mu, inst.nu, cost, pair,
                                              pair, pt.alpha, tol, opts);
      opts.warm_start = sol.plan.matrix;
      const MarginalBoundCheck bound = marginal_bound_check(
          sol.plan, inst.mu, inst.nu, cost, pair, pair, pt.alpha);
      nlohmann::ordered_json pj;
      pj["alpha"] = pt.alpha;
      pj["tv_to_ot_plan"] = pt.tv_to_ot_plan;
      pj["kkt_residual"] = pt.report.kkt_residual;
      pj["iterations"] = pt.report.iterations;
      pj["converged"] = pt.report.converged;
      pj["bound_lhs"] = bound.lhs;
      pj["bound_rhs"] = bound.rhs;
      pj["bound_holds"] = bound.holds;
      points.push_back(pj);
      bounds_csv << pt.alpha << "," << pt.tv_to_ot_plan << ","
                 << pt.report.kkt_residual << "," << pt.report.converged
                 << "," << bound.lhs << "," << bound.rhs << ","
                 << bound.holds << "\n";
      if (!pt.report.converged) {
        ++unconverged;
        std::cout << "alpha " << pt.alpha
                  << ": NOT converged, residual " << pt.report.kkt_residual
                  << "\n";
      } else {
        std::cout << "alpha " << pt.alpha << ": TV " << pt.tv_to_ot_plan
                  << ", kkt " << pt.report.kkt_residual << ", bound "
                  << (bound.holds ? "holds" : "VIOLATED") << "\n";
      }
    }
  }
  report["curve"] = points;

  // Duality report on the balanced problem at tau=1.
  const OtSolution ot = solve_ot_exact(inst.mu, inst.nu, cost);
  const double semi_dual = semi_dual_value(
      ot.dual_nu, inst.mu, inst.nu, cost, ConjugatePair::identity(),
      ConjugatePair::identity(), 1.0);
  report["duality"] = {{"primal", ot.objective},
                       {"semi_dual_at_lp_potentials", semi_dual},
                       {"gap", std::abs(ot.objective - semi_dual)},
                       {"unique_plan", ot.unique_plan}};

  std::ofstream out(dir / "oracle_report.json", std::ios::trunc);
  out << report.dump(2) << "\n";

  // TV curve figure.
  if (!curve.excluded && !curve.points.empty()) {
    std::vector<double> xs, ys;
    double hi = 0;
    for (const auto& pt : curve.points) {
      xs.push_back(std::log10(pt.alpha));
      ys.push_back(pt.tv_to_ot_plan);
      hi = std::max(hi, pt.tv_to_ot_plan);
    }
    PlotCanvas canvas(640, 400, xs.front(), xs.back(), 0.0, hi * 1.1 + 1e-12,
                      "plan TV distance vs log10(alpha)");
    canvas.draw_axes("log10(alpha)", "TV(pi_alpha, pi*)");
    canvas.polyline(xs, ys, cv::Scalar(180, 90, 30), 2);
    canvas.scatter(xs, ys, cv::Scalar(180, 90, 30), 3);
    canvas.save((dir / "fig_convergence.png").string());
  }

  std::cout << "duality gap: " << std::abs(ot.objective - semi_dual)
            << "\nreport: " << (dir / "oracle_report.json").string() << "\n";
  return 0;
}

int cmd_plot(const std::string& dir) {
  if (fs::exists(fs::path(dir) / "sweep.json")) {
    plot_sweep_dir(dir);
    std::cout << "sweep figures written to " << dir << "\n";
    return 0;
  }
  if (fs::exists(fs::path(dir) / "run.json")) {
    plot_run_dir(dir);
    std::cout << "run figures written to " << dir << "\n";
    return 0;
  }
  std::cerr << "plot: no records in " << dir
            << " (expected run.json or sweep.json)\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"unified OT-based adversarial model laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir, preset, plot_dir;
  std::int64_t seed = -1;
  int parallel = 1;

  auto* train = app.add_subcommand("train", "run one training configuration");
  train->add_option("--config", config_path, "run config JSON");
  train->add_option("--seed", seed, "seed override");
  train->add_option("--out", out_dir, "output directory override");
  train->add_option("--preset", preset, "preset name override");

  auto* sweep = app.add_subcommand("sweep", "run a config sweep");
  std::string sweep_config, sweep_out;
  sweep->add_option("--config", sweep_config, "sweep config JSON")
      ->required();
  sweep->add_option("--out", sweep_out, "output directory override");
  sweep->add_option("--parallel", parallel, "worker threads");

  auto* oracle = app.add_subcommand(
      "oracle", "discrete solver checks: convergence curve, bounds, duality");
  std::string instance_path, alphas = "1,10,100,1000", pair_name = "KLExp",
              oracle_out;
  int atoms = 5, dim = 2;
  std::int64_t oracle_seed = 0;
  double tau = 1.0, tol = 1e-8;
  oracle->add_option("--instance", instance_path, "measure instance file");
  oracle->add_option("--atoms", atoms, "random instance atom count");
  oracle->add_option("--dim", dim, "random instance dimension");
  oracle->add_option("--seed", oracle_seed, "random instance seed");
  oracle->add_option("--alphas", alphas, "comma-separated alpha ladder");
  oracle->add_option("--pair", pair_name, "entropy pair (Softplus|KLExp)");
  oracle->add_option("--tau", tau, "cost intensity");
  oracle->add_option("--tol", tol, "KKT tolerance");
  oracle->add_option("--out", oracle_out, "output directory");

  auto* plot = app.add_subcommand("plot", "regenerate figures from records");
  plot->add_option("--dir", plot_dir, "run or sweep directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return cmd_train(config_path, seed, out_dir, preset);
    if (sweep->parsed()) return cmd_sweep(sweep_config, sweep_out, parallel);
    if (oracle->parsed()) {
      return cmd_oracle(instance_path, atoms, dim, oracle_seed, alphas,
                        pair_name, tau, tol, oracle_out);
    }
    if (plot->parsed()) return cmd_plot(plot_dir);
  } catch (const MeasureParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
