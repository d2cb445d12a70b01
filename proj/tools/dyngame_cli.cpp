// Copyright 2026 The dyngame Authors
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
//
// Command-line harness: expert-data generation, single solves, Monte Carlo
// studies and the benchmark verifications, all emitting CSV.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dyngame/experiment.hpp"
#include "dyngame/lq_solvers.hpp"

namespace {

using namespace dyngame;

constexpr int kExitSuccess = 0;
constexpr int kExitSolverFailure = 1;
constexpr int kExitConfigError = 2;

void print_error(const std::string& kind, const std::string& message) {
  nlohmann::json j{{"error", kind}, {"message", message}};
  std::cerr << j.dump() << "\n";
}

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

// Output directory priority: --out flag, then DYNGAME_OUT, then config.
void resolve_out_dir(ExperimentConfig& config, const std::string& flag_out) {
  if (!flag_out.empty()) {
    config.out_dir = flag_out;
    return;
  }
  if (const char* env = std::getenv("DYNGAME_OUT"); env != nullptr && *env) {
    config.out_dir = env;
  }
}

int run_forward(const ExperimentConfig& config, const std::string& method) {
  const ExperimentContext ctx(config);
  Trajectory traj;
  if (method == "olne") {
    traj = olne_iteration_solve(*ctx.model().instance.dynamics,
                                ctx.model().instance.cost.with_theta(
                                    ctx.theta_star()),
                                ctx.x1_star(), {}, config.solver.ilq)
               .trajectory;
  } else {
    traj = ctx.solve_truth(ctx.x1_star());
  }
  std::filesystem::create_directories(config.out_dir);
  const std::string path = config.out_dir + "/forward_" + method + ".csv";
  write_trajectory_csv(path, traj);
  std::cout << "wrote " << path << "\n";
  return kExitSuccess;
}

int run_inverse(const ExperimentConfig& config, const std::string& method,
                std::uint64_t seed) {
  const ExperimentContext ctx(config);
  std::filesystem::create_directories(config.out_dir);
  const ExpertData expert =
      ctx.generate_expert(config.sigma_grid.front(), seed);
  const InverseProblem problem = ctx.make_problem(expert.observations);
  const InverseReport report = method == "olne"
                                   ? solve_inverse_olne_baseline(problem)
                                   : solve_inverse(problem);

  const std::string path = config.out_dir + "/inverse_report.csv";
  std::ofstream out(path);
  out << "k,loss";
  for (int j = 0; j < report.iterates.front().theta.size(); ++j) {
    out << ",theta_" << j;
  }
  for (int j = 0; j < report.iterates.front().x1.size(); ++j) {
    out << ",x1_" << j;
  }
  out << "\n";
  for (size_t k = 0; k < report.iterates.size(); ++k) {
    const auto& it = report.iterates[k];
    out << k << "," << format_double(it.loss);
    for (int j = 0; j < it.theta.size(); ++j) {
      out << "," << format_double(it.theta[j]);
    }
    for (int j = 0; j < it.x1.size(); ++j) {
      out << "," << format_double(it.x1[j]);
    }
    out << "\n";
  }

  const Trajectory predicted =
      ctx.predicted_trajectory(report.best().theta, report.best().x1);
  write_trajectory_csv(config.out_dir + "/inverse_predicted.csv", predicted);

  std::cout << "method=" << report.method_label
            << " converged=" << (report.converged ? 1 : 0)
            << " best_loss=" << format_double(report.best().loss) << "\n";
  return std::isfinite(report.best().loss) ? kExitSuccess
                                           : kExitSolverFailure;
}

int run_compare(const std::string& model_name, int horizon,
                const std::string& out_dir) {
  PursuitVariant variant;
  if (model_name == "lq_pursuit") {
    variant = PursuitVariant::kBase;
  } else if (model_name == "lq_pursuit_ghat") {
    variant = PursuitVariant::kGhat;
  } else if (model_name == "lq_pursuit_ghhat") {
    variant = PursuitVariant::kGhhat;
  } else {
    throw ConfigError("compare-info-patterns: model must be one of "
                      "lq_pursuit, lq_pursuit_ghat, lq_pursuit_ghhat");
  }
  const AffineLQGame game = build_lq_pursuit(variant, horizon);
  const ModelDescriptor md = build_model(model_name, {}, horizon, {});
  const Vector x1 = md.x1_star;

  const Trajectory fbne = fbne_trajectory_lq(game, x1);
  const Trajectory olne = solve_olne_lq(game, x1).trajectory;

  std::filesystem::create_directories(out_dir);
  const std::string path = out_dir + "/compare_" + model_name + ".csv";
  std::ofstream out(path);
  out << "t,coordinate_index,fbne,olne,gap\n";
  double fb_norm = 0.0, gap_norm = 0.0;
  for (size_t t = 0; t < fbne.states.size(); ++t) {
    for (int c = 0; c < fbne.states[t].size(); ++c) {
      const double gap = std::abs(fbne.states[t][c] - olne.states[t][c]);
      out << (t + 1) << "," << c << "," << format_double(fbne.states[t][c])
          << "," << format_double(olne.states[t][c]) << ","
          << format_double(gap) << "\n";
    }
    fb_norm += fbne.states[t].squaredNorm();
    gap_norm += (fbne.states[t] - olne.states[t]).squaredNorm();
  }
  std::cout << "wrote " << path << " relative_gap="
            << format_double(std::sqrt(gap_norm) / std::sqrt(fb_norm)) << "\n";
  return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic-game toolkit: forward and inverse feedback/open-loop "
               "Nash solvers with a reproducible experiment harness"};
  app.require_subcommand(1);

  std::string config_path, out_flag, method = "fbne";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int samples = 100;
  std::string compare_model = "lq_pursuit";
  int compare_horizon = 10;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", config_path, "Experiment config (JSON)");
    if (needs_config) opt->required();
    cmd->add_option("--out", out_flag, "Output directory override");
    cmd->add_option("--seed", seed, "Master seed override")
        ->each([&](const std::string&) { seed_set = true; });
    cmd->add_option("--method", method, "Solver: fbne or olne")
        ->check(CLI::IsMember({"fbne", "olne"}));
  };

  auto* forward = app.add_subcommand("forward", "Solve and dump a trajectory");
  add_common(forward, true);
  auto* inverse = app.add_subcommand("inverse", "Single inverse solve");
  add_common(inverse, true);
  auto* montecarlo =
      app.add_subcommand("montecarlo", "Noise-grid Monte Carlo study");
  add_common(montecarlo, true);

  auto* prop1 = app.add_subcommand("prop1", "Verify the two-pair equivalence");
  prop1->add_option("--samples", samples, "Random initial states to test");

  auto* compare = app.add_subcommand(
      "compare-info-patterns",
      "FBNE vs OLNE trajectories for the pursuit variants");
  compare->add_option("--model", compare_model, "Pursuit variant name");
  compare->add_option("--horizon", compare_horizon, "Stages (states)");
  compare->add_option("--out", out_flag, "Output directory override");

  CLI11_PARSE(app, argc, argv);

  try {
    if (prop1->parsed()) {
      const Prop1Report report = verify_prop1(samples);
      std::cout << report.summary() << "\n";
      return report.all_passed ? kExitSuccess : kExitSolverFailure;
    }
    if (compare->parsed()) {
      std::string out_dir = out_flag.empty() ? "." : out_flag;
      if (out_flag.empty()) {
        if (const char* env = std::getenv("DYNGAME_OUT");
            env != nullptr && *env) {
          out_dir = env;
        }
      }
      return run_compare(compare_model, compare_horizon, out_dir);
    }

    ExperimentConfig config = load_config(config_path);
    resolve_out_dir(config, out_flag);
    if (config.out_dir.empty()) config.out_dir = ".";
    if (seed_set) config.master_seed = seed;

    if (forward->parsed()) return run_forward(config, method);
    if (inverse->parsed()) return run_inverse(config, method, config.master_seed);
    if (montecarlo->parsed()) {
      const auto records = run_montecarlo(config);
      int failures = 0;
      for (const auto& r : records) {
        if (!r.converged) ++failures;
      }
      std::cout << "arms=" << records.size() << " non_converged=" << failures
                << " out=" << config.out_dir << "\n";
      return kExitSuccess;
    }
  } catch (const ConfigError& e) {
    print_error("config", e.what());
    return kExitConfigError;
  } catch (const ShapeError& e) {
    print_error("config", e.what());
    return kExitConfigError;
  } catch (const std::exception& e) {
    print_error("solver", e.what());
    return kExitSolverFailure;
  }
  return kExitSuccess;
}
