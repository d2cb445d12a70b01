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

#ifndef DYNGAME_INVERSE_HPP
#define DYNGAME_INVERSE_HPP

#include <optional>

#include "dyngame/ilq_solver.hpp"
#include "dyngame/observation.hpp"

namespace dyngame {

struct LineSearchOptions {
  double armijo = 1e-4;       // sufficient-decrease constant
  double shrink = 0.5;
  double initial_step = 1.0;
  int max_backtracks = 25;
};

struct InverseOptions {
  int max_iterations = 50;        // K; 0 echoes the initial guess
  double theta_tolerance = 1e-6;  // epsilon on successive theta iterates
  LineSearchOptions x1_search;
  LineSearchOptions theta_search;
  IlqOptions ilq;
};

// Cost-inference problem: recover (theta, x1) whose forward feedback Nash
// trajectory explains the observations.
struct InverseProblem {
  std::shared_ptr<const DynamicsModel> dynamics;
  ParamCost cost;  // basis family; theta is overridden per evaluation
  ObservationSet observations;
  double regularization = 0.0;  // lambda, weight of |theta|^2
  Vector theta0;
  Vector x1_0;
  InverseOptions options;

  void validate() const;
};

// Negative log-likelihood (Gaussian, constant dropped) plus regularization:
//   loss = sum_{t in T} |y_t - h(x_t)|^2 + lambda |theta|^2.
struct LossValue {
  double loss = std::numeric_limits<double>::infinity();
  std::vector<Vector> residuals;  // h(x_t) - y_t per observed time
  double regularization = 0.0;    // lambda |theta|^2 contribution

  bool finite() const { return std::isfinite(loss); }
};

// Forward-solves at (theta, x1) and evaluates the loss on the resulting
// trajectory. Divergence of the forward solve yields an infinite-loss
// sentinel instead of an exception. The frozen LQ approximation is returned
// through forward_out when requested.
LossValue eval_loss(const InverseProblem& problem, const Vector& theta,
                    const Vector& x1,
                    const std::optional<Trajectory>& warm_start = {},
                    IlqResult* forward_out = nullptr);

// Gradient of the frozen-model loss with respect to theta: the LQ cost
// blocks are reassembled as sum_j theta_j b_j over the frozen bases, the
// feedback Nash trajectory of that LQ game is differentiated analytically
// (forward-mode propagation through the stage recursion), and the chain rule
// through the residuals plus 2 lambda theta gives the result.
Vector approx_grad_theta(const AffineLQGame& frozen, const Vector& theta,
                         const Vector& x1, const ObservationSet& observations,
                         double regularization);

// Gradient with respect to the initial state. The frozen strategy does not
// depend on x1; only the linear closed-loop rollout does.
Vector approx_grad_x1(const AffineLQGame& frozen, const Vector& theta,
                      const Vector& x1, const ObservationSet& observations);

// Coordinate gradient descent: per iteration, a forward solve freezes the
// approximation, a line-searched gradient step updates x1, a second forward
// solve refreshes the approximation, and a line-searched step updates theta.
// Every trial point is scored by a fresh forward solve of the true loss.
InverseReport solve_inverse(const InverseProblem& problem);

// Identical coordinate descent with the forward map swapped for the
// open-loop Nash plan of the iterated LQ approximation. A surrogate for
// open-loop baselines, labeled "olne_surrogate" in all outputs.
InverseReport solve_inverse_olne_baseline(const InverseProblem& problem);

}  // namespace dyngame

#endif  // DYNGAME_INVERSE_HPP
