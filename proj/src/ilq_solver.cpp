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

#include "dyngame/ilq_solver.hpp"

#include <cmath>

namespace dyngame {

namespace {

// Raise negative eigenvalues of a symmetric block to the floor.
Matrix clamp_negative_eigenvalues(const Matrix& H, double floor,
                                  bool* clamped) {
  const Matrix sym = 0.5 * (H + H.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  Vector values = eig.eigenvalues();
  bool touched = false;
  for (int k = 0; k < values.size(); ++k) {
    if (values[k] < 0.0) {
      values[k] = floor;
      touched = true;
    }
  }
  if (!touched) return sym;
  if (clamped != nullptr) *clamped = true;
  return eig.eigenvectors() * values.asDiagonal() *
         eig.eigenvectors().transpose();
}

// Expand one term about the trajectory point into absolute-coordinate
// blocks and accumulate them into `block`.
void accumulate_term(const CostTerm& term, const GameShape& shape,
                     const Vector& x_bar, const Vector& u_bar, bool terminal,
                     double psd_floor, bool* clamped, LqStageCost& block) {
  if (terminal && !term.state_only()) return;
  if (term.domain() == TermDomain::kState) {
    const TermQuadratic tq = term.quadratic(x_bar);
    const Matrix H = clamp_negative_eigenvalues(tq.hess, psd_floor, clamped);
    block.Q += H;
    block.q += tq.grad - H * x_bar;
    block.c0 += tq.value - tq.grad.dot(x_bar) + 0.5 * x_bar.dot(H * x_bar);
  } else {
    const TermQuadratic tq = term.quadratic(u_bar);
    // Control Hessians are consumed blockwise per player; cross-player
    // couplings are not representable in the LQ cost structure.
    for (int j = 0; j < shape.num_players; ++j) {
      const int off = shape.control_offset(j);
      const int mj = shape.control_dims[j];
      const Matrix Hj = clamp_negative_eigenvalues(
          tq.hess.block(off, off, mj, mj), psd_floor, clamped);
      const auto uj = u_bar.segment(off, mj);
      const auto gj = tq.grad.segment(off, mj);
      block.R[j] += Hj;
      block.r[j] += gj - Hj * uj;
      block.c0 += 0.5 * uj.dot(Hj * uj) - gj.dot(uj);
    }
    block.c0 += tq.value;
  }
}

}  // namespace

void IlqOptions::validate() const {
  if (max_iterations < 1) throw DomainError("IlqOptions: max_iterations < 1");
  if (!(trajectory_tolerance > 0.0)) {
    throw DomainError("IlqOptions: tolerance must be positive");
  }
  if (!(initial_step > 0.0) || initial_step > 1.0) {
    throw DomainError("IlqOptions: initial step must lie in (0, 1]");
  }
  if (!(backtrack_factor > 0.0) || backtrack_factor >= 1.0) {
    throw DomainError("IlqOptions: backtrack factor must lie in (0, 1)");
  }
}

AffineLQGame linearize_quadraticize(const DynamicsModel& dynamics,
                                    const ParamCost& cost,
                                    const Trajectory& traj, double psd_floor,
                                    bool* clamped) {
  cost.validate();
  const GameShape& shape = dynamics.shape();
  traj.validate(shape);
  const int N = shape.num_players;
  const int T = shape.horizon;
  const int n = shape.state_dim();
  const int m = shape.control_dim();

  AffineLQGame game;
  game.shape = shape;
  game.A.resize(T - 1);
  game.B.assign(T - 1, std::vector<Matrix>(N));
  game.c.resize(T - 1);

  Matrix A(n, n), B(n, m);
  for (int t = 0; t < T - 1; ++t) {
    dynamics.jacobians(t + 1, traj.states[t], traj.controls[t], A, B);
    if (!A.allFinite() || !B.allFinite()) {
      throw EvaluationError("linearize_quadraticize: non-finite Jacobian",
                            t + 1);
    }
    game.A[t] = A;
    for (int i = 0; i < N; ++i) {
      game.B[t][i] = B.middleCols(shape.control_offset(i),
                                  shape.control_dims[i]);
    }
    game.c[t] = dynamics.step(t + 1, traj.states[t], traj.controls[t]) -
                A * traj.states[t] - B * traj.controls[t];
  }

  game.basis_cost.resize(N);
  game.fixed_cost.resize(N);
  const Vector zero_u = Vector::Zero(m);
  for (int i = 0; i < N; ++i) {
    game.basis_cost[i].resize(cost.bases[i].size());
    game.fixed_cost[i].reserve(T);
    for (auto& per_basis : game.basis_cost[i]) per_basis.reserve(T);
    for (int t = 1; t <= T; ++t) {
      const bool terminal = (t == T);
      const Vector& x_bar = traj.states[t - 1];
      const Vector& u_bar = terminal ? zero_u : traj.controls[t - 1];
      for (size_t j = 0; j < cost.bases[i].size(); ++j) {
        LqStageCost block(n, shape.control_dims, terminal);
        accumulate_term(*cost.bases[i][j], shape, x_bar, u_bar, terminal,
                        psd_floor, clamped, block);
        game.basis_cost[i][j].push_back(std::move(block));
      }
      LqStageCost fixed_block(n, shape.control_dims, terminal);
      for (const auto& term : cost.fixed[i]) {
        accumulate_term(*term, shape, x_bar, u_bar, terminal, psd_floor,
                        clamped, fixed_block);
      }
      game.fixed_cost[i].push_back(std::move(fixed_block));
    }
  }

  game.cost.assign(T, std::vector<LqStageCost>(N));
  game.theta = cost.theta;
  return reassemble(game, cost.theta);
}

namespace {

// Effective affine law of the blended update
//   u_t(x) = u_bar_t + s (-P_t x - alpha_t - u_bar_t):
// gain s P_t, feedforward s alpha_t - (1-s) u_bar_t.
FeedbackStrategy blend_strategy(const FeedbackStrategy& lq_strategy,
                                const Trajectory& reference, double step,
                                const GameShape& shape) {
  FeedbackStrategy out = lq_strategy;
  for (int t = 0; t < out.num_stages(); ++t) {
    for (int i = 0; i < shape.num_players; ++i) {
      const auto u_bar = reference.controls[t].segment(
          shape.control_offset(i), shape.control_dims[i]);
      out.gains[t][i] *= step;
      out.feedforwards[t][i] =
          step * lq_strategy.feedforwards[t][i] - (1.0 - step) * u_bar;
    }
  }
  return out;
}

double max_state_deviation(const Trajectory& a, const Trajectory& b) {
  double worst = 0.0;
  for (size_t t = 0; t < a.states.size(); ++t) {
    worst = std::max(worst, (a.states[t] - b.states[t]).lpNorm<Eigen::Infinity>());
  }
  return worst;
}

double state_scale(const Trajectory& traj) {
  double scale = 1.0;
  for (const auto& x : traj.states) {
    scale = std::max(scale, x.lpNorm<Eigen::Infinity>());
  }
  return scale;
}

Trajectory initial_trajectory(const DynamicsModel& dynamics, const Vector& x1,
                              const std::optional<Trajectory>& warm_start) {
  if (!warm_start.has_value()) return zero_control_rollout(x1, dynamics);
  const Trajectory& warm = *warm_start;
  warm.validate(dynamics.shape());
  if (feasibility_defect(warm, dynamics) > 1e-6) {
    throw DomainError("warm start trajectory is not dynamically feasible");
  }
  if ((warm.states[0] - x1).lpNorm<Eigen::Infinity>() == 0.0) return warm;
  // Warm start from a different initial state: replay its controls from x1.
  return rollout_controls(warm.controls, x1, dynamics);
}

}  // namespace

IlqResult ilqgames_solve(const DynamicsModel& dynamics, const ParamCost& cost,
                         const Vector& x1,
                         const std::optional<Trajectory>& warm_start,
                         const IlqOptions& options) {
  options.validate();
  if (!x1.allFinite()) throw DomainError("ilqgames_solve: non-finite x1");
  const bool exact_lq = dynamics.is_affine() && cost.all_quadratic();

  IlqResult result;
  Trajectory traj = initial_trajectory(dynamics, x1, warm_start);
  double best_residual = std::numeric_limits<double>::infinity();

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    bool clamped = false;
    AffineLQGame lq =
        linearize_quadraticize(dynamics, cost, traj, options.psd_floor,
                               &clamped);
    const FbneSolution sol = solve_fbne_lq(lq);

    const double bound = options.trust_radius_scale * state_scale(traj);
    double step = options.initial_step;
    bool accepted = false;
    Trajectory candidate;
    FeedbackStrategy law;
    for (int b = 0; b <= options.max_backtracks; ++b) {
      law = blend_strategy(sol.strategy, traj, step, dynamics.shape());
      try {
        candidate = rollout(law, x1, dynamics);
      } catch (const DivergenceError&) {
        step *= options.backtrack_factor;
        continue;
      }
      if (max_state_deviation(candidate, traj) <= bound) {
        accepted = true;
        break;
      }
      step *= options.backtrack_factor;
    }
    if (!accepted) {
      throw DivergenceError(
          "ilqgames_solve: no step satisfied the trust bound", 0);
    }

    const double residual = max_state_deviation(candidate, traj);
    traj = std::move(candidate);
    result.residual_history.push_back(residual);
    result.iterations = iter;

    if (residual <= best_residual) {
      best_residual = residual;
      result.trajectory = traj;
      result.strategy = law;
    }

    if (residual <= options.trajectory_tolerance) {
      result.converged = true;
      break;
    }
    // The LQ approximation of an exact LQ game is the game itself, so a
    // full accepted step lands on the exact equilibrium immediately.
    if (exact_lq && !clamped && step == 1.0) {
      result.converged = true;
      result.trajectory = traj;
      result.strategy = law;
      break;
    }
  }

  if (result.converged) {
    // The last accepted iterate is the converged one.
    result.lq = linearize_quadraticize(dynamics, cost, traj, options.psd_floor);
    result.trajectory = traj;
  } else {
    // Budget exhausted: report the iterate with the smallest residual.
    result.lq = linearize_quadraticize(dynamics, cost, result.trajectory,
                                       options.psd_floor);
  }
  return result;
}

OlneIterationResult olne_iteration_solve(
    const DynamicsModel& dynamics, const ParamCost& cost, const Vector& x1,
    const std::optional<Trajectory>& warm_start, const IlqOptions& options) {
  options.validate();
  if (!x1.allFinite()) throw DomainError("olne_iteration_solve: non-finite x1");
  const bool exact_lq = dynamics.is_affine() && cost.all_quadratic();

  OlneIterationResult result;
  Trajectory traj = initial_trajectory(dynamics, x1, warm_start);
  double best_residual = std::numeric_limits<double>::infinity();

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    bool clamped = false;
    AffineLQGame lq =
        linearize_quadraticize(dynamics, cost, traj, options.psd_floor,
                               &clamped);
    const OlneSolution sol = OlneKktSystem(lq).solve(x1);

    const double bound = options.trust_radius_scale * state_scale(traj);
    double step = options.initial_step;
    bool accepted = false;
    Trajectory candidate;
    for (int b = 0; b <= options.max_backtracks; ++b) {
      std::vector<Vector> controls(traj.controls.size());
      for (size_t t = 0; t < controls.size(); ++t) {
        controls[t] =
            traj.controls[t] + step * (sol.plan.controls[t] - traj.controls[t]);
      }
      try {
        candidate = rollout_controls(controls, x1, dynamics);
      } catch (const DivergenceError&) {
        step *= options.backtrack_factor;
        continue;
      }
      if (max_state_deviation(candidate, traj) <= bound) {
        accepted = true;
        break;
      }
      step *= options.backtrack_factor;
    }
    if (!accepted) {
      throw DivergenceError(
          "olne_iteration_solve: no step satisfied the trust bound", 0);
    }

    const double residual = max_state_deviation(candidate, traj);
    traj = std::move(candidate);
    result.residual_history.push_back(residual);
    result.iterations = iter;
    if (residual <= best_residual) {
      best_residual = residual;
      result.trajectory = traj;
    }

    if (residual <= options.trajectory_tolerance ||
        (exact_lq && !clamped && step == 1.0)) {
      result.converged = true;
      result.trajectory = traj;
      break;
    }
  }

  result.lq = linearize_quadraticize(dynamics, cost, result.trajectory,
                                     options.psd_floor);
  return result;
}

}  // namespace dyngame
