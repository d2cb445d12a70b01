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

#ifndef DYNGAME_ILQ_SOLVER_HPP
#define DYNGAME_ILQ_SOLVER_HPP

#include <optional>

#include "dyngame/cost.hpp"
#include "dyngame/dynamics.hpp"
#include "dyngame/lq_game.hpp"
#include "dyngame/lq_solvers.hpp"

namespace dyngame {

struct IlqOptions {
  int max_iterations = 100;
  // Convergence threshold on the successive-trajectory max norm.
  double trajectory_tolerance = 1e-6;
  // Step rule: geometric backtracking on the strategy blend, bounded by a
  // trust region on the per-iterate state deviation.
  double initial_step = 1.0;
  double backtrack_factor = 0.5;
  int max_backtracks = 20;
  double trust_radius_scale = 10.0;
  // Eigenvalue floor replacing negative eigenvalues of quadraticized
  // Hessian blocks.
  double psd_floor = 1e-6;

  void validate() const;
};

struct IlqResult {
  Trajectory trajectory;
  // Effective affine law of the final accepted iterate; its rollout on the
  // nonlinear dynamics reproduces `trajectory` exactly.
  FeedbackStrategy strategy;
  // Frozen linearization/quadraticization at the converged trajectory, with
  // the per-basis decomposition.
  AffineLQGame lq;
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;  // successive-trajectory max norms
};

// Linearize the dynamics and expand every cost term to second order about
// the trajectory, in absolute coordinates: A_t, B_t^i are Jacobians at
// (x_t, u_t), c_t = f_t(x_t,u_t) - A_t x_t - B_t u_t, and each basis keeps
// its own quadratic block. Negative Hessian eigenvalues are raised to
// psd_floor per (stage, player, block). Sets *clamped when any eigenvalue
// needed lifting.
AffineLQGame linearize_quadraticize(const DynamicsModel& dynamics,
                                    const ParamCost& cost,
                                    const Trajectory& traj,
                                    double psd_floor = 1e-6,
                                    bool* clamped = nullptr);

// Iterative LQ-approximation game solver: repeatedly approximate, solve the
// LQ feedback Nash game, and re-roll the blended strategy on the nonlinear
// dynamics until the trajectory stops moving.
IlqResult ilqgames_solve(const DynamicsModel& dynamics, const ParamCost& cost,
                         const Vector& x1,
                         const std::optional<Trajectory>& warm_start,
                         const IlqOptions& options);

// Open-loop analog used by the OLNE-surrogate baseline: the forward map is
// the open-loop Nash plan of the current LQ approximation, iterated to its
// own fixed point.
struct OlneIterationResult {
  Trajectory trajectory;
  AffineLQGame lq;
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;
};

OlneIterationResult olne_iteration_solve(
    const DynamicsModel& dynamics, const ParamCost& cost, const Vector& x1,
    const std::optional<Trajectory>& warm_start, const IlqOptions& options);

}  // namespace dyngame

#endif  // DYNGAME_ILQ_SOLVER_HPP
