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

#ifndef DYNGAME_EXPERIMENT_HPP
#define DYNGAME_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "dyngame/inverse.hpp"
#include "dyngame/models.hpp"

namespace dyngame {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Experiment description; unset optionals fall back to model defaults.
// Serialized as JSON with the same key names (see README for the schema).
struct ExperimentConfig {
  std::string model = "dubins2";
  std::optional<double> dt;
  std::optional<int> horizon;
  std::optional<double> target_lane;
  std::optional<std::vector<double>> theta_star;
  std::optional<std::vector<double>> x1_star;

  // Observation spec: selected coordinates (default: model preset) and the
  // occlusion window removed from [1, T] (0/0 when fully observed in time).
  std::optional<std::vector<int>> observed_coordinates;
  int occlusion_begin = 0;
  int occlusion_end = 0;
  std::vector<double> sigma_grid = {0.004, 0.02, 0.04};
  int seeds_per_level = 5;

  // Inverse solver settings.
  double regularization = 0.0;
  std::optional<std::vector<double>> theta0;
  InverseOptions solver;

  // Generalization study: unseen initial states sampled uniformly in a box
  // around x1_star over the model's position coordinates.
  int generalization_count = 4;
  double generalization_halfwidth = 0.5;

  std::uint64_t master_seed = 1;
  int workers = 0;  // 0 = hardware concurrency
  std::string out_dir;
  bool write_trajectories = true;

  void validate() const;  // throws ConfigError
};

ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& config, const std::string& path);
std::string config_to_json_string(const ExperimentConfig& config);
ExperimentConfig config_from_json_string(const std::string& text);

// FNV-1a hash of the canonical JSON form, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

// One Monte Carlo arm result. Wall time is kept out of records.csv (it is
// the one nondeterministic field) and written to timings.csv instead.
struct MonteCarloRecord {
  int sigma_index = 0;
  double sigma = 0.0;
  int seed = 0;
  std::string method;
  double metric_a = 0.0, metric_b = 0.0, metric_c = 0.0;
  double metric_a_rel = 0.0, metric_b_rel = 0.0, metric_c_rel = 0.0;
  double final_loss = 0.0;
  bool converged = false;
  int iterations = 0;
  double wall_time_s = 0.0;
  std::string config_hash;
};

struct ExpertData {
  Trajectory trajectory;
  ObservationSet observations;
};

// Binds a config to its built model and exposes the per-operation pieces of
// the experiment pipeline.
class ExperimentContext {
 public:
  explicit ExperimentContext(ExperimentConfig config);

  const ExperimentConfig& config() const { return config_; }
  const ModelDescriptor& model() const { return model_; }
  Vector theta_star() const;
  Vector x1_star() const;
  Vector theta0() const;
  ObservationModel observation_model(double sigma) const;

  // Forward FBNE solve under the ground-truth parameters.
  Trajectory solve_truth(const Vector& x1) const;

  // Expert trajectory plus seeded noisy observations; writes CSVs into
  // out_dir when it is set.
  ExpertData generate_expert(double sigma, std::uint64_t noise_seed) const;

  InverseProblem make_problem(const ObservationSet& observations) const;

  // FBNE trajectory under inferred parameters, used by every metric.
  Trajectory predicted_trajectory(const Vector& theta, const Vector& x1) const;

  // Unseen initial states for the generalization metric.
  std::vector<Vector> generalization_states() const;

 private:
  ExperimentConfig config_;
  ModelDescriptor model_;
};

// Stacked-vector L2 metrics (unnormalized; relative variants are extra
// record columns, never replacements).
double metric_a(const Trajectory& predicted, const ObservationSet& obs);
double metric_b(const Trajectory& predicted, const Trajectory& truth);

// Full Monte Carlo study over sigma_grid x seeds x {fbne, olne_surrogate};
// writes records.csv, summary.csv, timings.csv, metadata.json and the
// trajectory/observation CSVs into out_dir. Rows are ordered by
// (sigma_index, seed, method) regardless of worker count.
std::vector<MonteCarloRecord> run_montecarlo(const ExperimentConfig& config);

// Numeric verification of the two-pair equivalence: FBNE trajectories under
// (1,1) and (1/2,2) coincide for random initial states, the general solver
// matches the hand-coded stage formulas, and the gains at t=2 are exact.
struct Prop1Report {
  int samples = 0;
  bool all_passed = false;
  double max_pair_gap = 0.0;      // between the two weight pairs
  double max_oracle_gap = 0.0;    // solver vs closed-form oracle
  double max_gain_error = 0.0;    // gains at t=2 vs [2/5,1/5] and [1/5,2/5]
  std::vector<double> failed_x1;
  std::string summary() const;
};

Prop1Report verify_prop1(int samples, std::uint64_t seed = 7);

// Copy the earliest observation into its coordinates of the default state.
Vector initial_state_guess(const Vector& default_state,
                           const ObservationSet& observations);

// CSV I/O. Trajectories use rows (t, coordinate_index, value) with states at
// coordinates [0, n) for t = 1..T and controls at [n, n+m) for t <= T-1.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);
Trajectory read_trajectory_csv(const std::string& path, const GameShape& shape);
void write_observations_csv(const std::string& path, const ObservationSet& obs);
ObservationSet read_observations_csv(const std::string& path,
                                     const ObservationModel& model);
void write_records_csv(const std::string& path,
                       const std::vector<MonteCarloRecord>& records);

}  // namespace dyngame

#endif  // DYNGAME_EXPERIMENT_HPP
