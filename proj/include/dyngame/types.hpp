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

#ifndef DYNGAME_TYPES_HPP
#define DYNGAME_TYPES_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace dyngame {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

// Dimension or index inconsistency between objects.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A rollout or iteration produced non-finite state. `stage` is 1-based.
struct DivergenceError : std::runtime_error {
  explicit DivergenceError(const std::string& what, int stage_in)
      : std::runtime_error(what), stage(stage_in) {}
  int stage;
};

// A stage equilibrium system was singular beyond repair.
struct EquilibriumError : std::runtime_error {
  EquilibriumError(const std::string& what, int stage_in, double condition_in)
      : std::runtime_error(what), stage(stage_in), condition(condition_in) {}
  int stage;
  double condition;
};

// Non-finite value while evaluating a cost or derivative.
struct EvaluationError : std::runtime_error {
  explicit EvaluationError(const std::string& what, int stage_in)
      : std::runtime_error(what), stage(stage_in) {}
  int stage;
};

// ---------------------------------------------------------------------------
// GameShape
// ---------------------------------------------------------------------------

// Static dimensions of an N-player, T-stage game. The horizon T counts
// states; there are T-1 controls. Per-player state sizes may be zero for
// games whose state is shared among players (only the control partition is
// consumed by the solvers).
struct GameShape {
  int num_players = 0;            // N
  int horizon = 0;                // T, number of states
  std::vector<int> state_dims;    // n_i, may contain zeros
  std::vector<int> control_dims;  // m_i, all >= 1

  int state_dim() const;    // n = sum n_i
  int control_dim() const;  // m = sum m_i
  int state_offset(int player) const;
  int control_offset(int player) const;

  // Throws ShapeError if any invariant fails.
  void validate() const;
};

// ---------------------------------------------------------------------------
// Trajectory
// ---------------------------------------------------------------------------

// Joint state/control sequences: states x_1..x_T, controls u_1..u_{T-1}.
// Storage is 0-indexed; states[t-1] holds the 1-based x_t.
struct Trajectory {
  std::vector<Vector> states;
  std::vector<Vector> controls;

  int horizon() const { return static_cast<int>(states.size()); }
  void validate(const GameShape& shape) const;
};

// ---------------------------------------------------------------------------
// FeedbackStrategy
// ---------------------------------------------------------------------------

// Per-stage, per-player affine state feedback u_t^i = -P_t^i x_t - alpha_t^i.
// gains[t][i] is m_i x n for stage t+1 (1-based), t in 0..T-2.
struct FeedbackStrategy {
  std::vector<std::vector<Matrix>> gains;
  std::vector<std::vector<Vector>> feedforwards;

  int num_stages() const { return static_cast<int>(gains.size()); }

  // Joint control at 0-based stage index.
  Vector control(int stage_index, const Vector& x) const;

  void validate(const GameShape& shape) const;
};

// ---------------------------------------------------------------------------
// OpenLoopPlan
// ---------------------------------------------------------------------------

// Joint control sequence plus per-player costates, exposed for diagnostics.
// costates[t][i] holds the 1-based lambda_{t+1}^i, t in 0..T-1 (T entries, with
// the last equal to the terminal-cost gradient).
struct OpenLoopPlan {
  std::vector<Vector> controls;                // T-1 joint controls
  std::vector<std::vector<Vector>> costates;   // [T][N]
};

// ---------------------------------------------------------------------------
// Observations
// ---------------------------------------------------------------------------

// Coordinate-selection sensor: y = x(selection) + noise, reported at the
// 1-based stage indices in `times`.
struct ObservationModel {
  std::vector<int> selection;  // strictly increasing, in [0, n)
  double sigma = 0.0;          // isotropic Gaussian std deviation
  std::vector<int> times;      // nonempty, sorted, each in [1, T]

  int obs_dim() const { return static_cast<int>(selection.size()); }
  Vector observe(const Vector& x) const;  // noiseless h(x)
  void validate(int state_dim, int horizon) const;
};

struct ObservationSet {
  ObservationModel model;
  std::vector<Vector> measurements;  // aligned with model.times
};

// ---------------------------------------------------------------------------
// InverseReport
// ---------------------------------------------------------------------------

struct InverseIterate {
  Vector theta;
  Vector x1;
  double loss = 0.0;
};

// Iterate history and convergence status of the inverse solver.
struct InverseReport {
  std::vector<InverseIterate> iterates;  // index 0 is the initial guess
  int best_index = 0;                    // arg-min loss over iterates
  bool converged = false;
  int accepted_steps = 0;
  int line_search_failures = 0;
  std::string method_label;

  const InverseIterate& best() const { return iterates.at(best_index); }
};

}  // namespace dyngame

#endif  // DYNGAME_TYPES_HPP
