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
// Observation-likelihood loss, frozen-linearization gradients, and the
// coordinate-descent inverse solver, plus the OLNE-surrogate baseline.

#include "dyngame/inverse.hpp"

#include <cmath>
#include <functional>

namespace dyngame {

namespace {

double data_loss(const Trajectory& traj, const ObservationSet& obs,
                 std::vector<Vector>* residuals_out = nullptr) {
  double total = 0.0;
  if (residuals_out != nullptr) residuals_out->clear();
  for (size_t k = 0; k < obs.model.times.size(); ++k) {
    Vector r = obs.model.observe(traj.states[obs.model.times[k] - 1]) -
               obs.measurements[k];
    total += r.squaredNorm();
    if (residuals_out != nullptr) residuals_out->push_back(std::move(r));
  }
  return total;
}

}  // namespace

void InverseProblem::validate() const {
  if (!dynamics) throw ShapeError("InverseProblem: missing dynamics");
  cost.validate();
  observations.model.validate(dynamics->shape().state_dim(),
                              dynamics->shape().horizon);
  if (observations.measurements.size() != observations.model.times.size()) {
    throw ShapeError("InverseProblem: measurement count mismatch");
  }
  if (regularization < 0.0) {
    throw DomainError("InverseProblem: negative regularization");
  }
  if (options.max_iterations < 0) {
    throw DomainError("InverseProblem: negative iteration budget");
  }
  if (!(options.theta_tolerance > 0.0)) {
    throw DomainError("InverseProblem: tolerance must be positive");
  }
  if (theta0.size() != cost.param_dim() || !theta0.allFinite()) {
    throw ShapeError("InverseProblem: bad initial theta");
  }
  if (x1_0.size() != dynamics->shape().state_dim() || !x1_0.allFinite()) {
    throw ShapeError("InverseProblem: bad initial state guess");
  }
}

LossValue eval_loss(const InverseProblem& problem, const Vector& theta,
                    const Vector& x1,
                    const std::optional<Trajectory>& warm_start,
                    IlqResult* forward_out) {
  LossValue out;
  if (!theta.allFinite() || !x1.allFinite()) return out;
  IlqResult forward;
  try {
    forward = ilqgames_solve(*problem.dynamics, problem.cost.with_theta(theta),
                             x1, warm_start, problem.options.ilq);
  } catch (const DivergenceError&) {
    return out;  // infinite-loss sentinel; line searches reject it
  } catch (const EquilibriumError&) {
    return out;
  } catch (const EvaluationError&) {
    return out;
  }
  out.regularization = problem.regularization * theta.squaredNorm();
  out.loss = data_loss(forward.trajectory, problem.observations,
                       &out.residuals) +
             out.regularization;
  if (forward_out != nullptr) *forward_out = std::move(forward);
  return out;
}

// ---------------------------------------------------------------------------
// Frozen-model gradients
// ---------------------------------------------------------------------------

Vector approx_grad_x1(const AffineLQGame& frozen, const Vector& theta,
                      const Vector& x1, const ObservationSet& obs) {
  const AffineLQGame game = reassemble(frozen, theta);
  const FbneSolution sol = solve_fbne_lq(game);
  const Trajectory traj = lq_rollout(game, sol.strategy, x1);

  const int n = game.shape.state_dim();
  const int N = game.shape.num_players;

  // Closed-loop transition maps Phi_t = d x_t / d x_1.
  std::vector<Matrix> phi(game.shape.horizon);
  phi[0] = Matrix::Identity(n, n);
  for (int t = 0; t + 1 < game.shape.horizon; ++t) {
    Matrix F = game.A[t];
    for (int j = 0; j < N; ++j) F -= game.B[t][j] * sol.strategy.gains[t][j];
    phi[t + 1] = F * phi[t];
  }

  Vector grad = Vector::Zero(n);
  for (size_t k = 0; k < obs.model.times.size(); ++k) {
    const int t = obs.model.times[k] - 1;
    const Vector r = obs.model.observe(traj.states[t]) - obs.measurements[k];
    for (size_t c = 0; c < obs.model.selection.size(); ++c) {
      grad += 2.0 * r[c] * phi[t].row(obs.model.selection[c]).transpose();
    }
  }
  return grad;
}

Vector approx_grad_theta(const AffineLQGame& frozen, const Vector& theta,
                         const Vector& x1, const ObservationSet& obs,
                         double regularization) {
  const AffineLQGame game = reassemble(frozen, theta);
  const GameShape& shape = game.shape;
  const int N = shape.num_players;
  const int T = shape.horizon;
  const int n = shape.state_dim();
  const int m = shape.control_dim();
  const int d = game.param_dim();

  // Directional derivatives of the value recursion, one direction per
  // parameter. direction k perturbs basis j0 = k - offset(i0) of player i0.
  std::vector<int> dir_player(d), dir_basis(d);
  for (int i = 0; i < N; ++i) {
    const int off = game.param_offset(i);
    for (size_t j = 0; j < game.basis_cost[i].size(); ++j) {
      dir_player[off + j] = i;
      dir_basis[off + j] = static_cast<int>(j);
    }
  }

  std::vector<std::vector<Matrix>> dZ(d, std::vector<Matrix>(N));
  std::vector<std::vector<Vector>> dzeta(d, std::vector<Vector>(N));
  // Working copies of Z_{t+1} and zeta_{t+1}.
  std::vector<Matrix> Z_next(N);
  std::vector<Vector> zeta_next(N);
  for (int i = 0; i < N; ++i) {
    Z_next[i] = game.cost[T - 1][i].Q;
    zeta_next[i] = game.cost[T - 1][i].q;
  }
  for (int k = 0; k < d; ++k) {
    for (int i = 0; i < N; ++i) {
      if (i == dir_player[k]) {
        const LqStageCost& b = game.basis_cost[i][dir_basis[k]][T - 1];
        dZ[k][i] = b.Q;
        dzeta[k][i] = b.q;
      } else {
        dZ[k][i] = Matrix::Zero(n, n);
        dzeta[k][i] = Vector::Zero(n);
      }
    }
  }

  // Per-stage closed-loop maps and their derivatives, for the forward pass.
  std::vector<Matrix> F_stage(T - 1);
  std::vector<Vector> beta_stage(T - 1);
  std::vector<std::vector<Matrix>> dF_stage(T - 1, std::vector<Matrix>(d));
  std::vector<std::vector<Vector>> dbeta_stage(T - 1, std::vector<Vector>(d));

  Matrix rhs(m, n + 1), drhs(m, n + 1);
  for (int t = T - 2; t >= 0; --t) {
    detail::StageSystem sys = detail::build_stage_system(game, t, Z_next);
    for (int i = 0; i < N; ++i) {
      const int row = shape.control_offset(i);
      rhs.block(row, 0, shape.control_dims[i], n) = sys.BtZ[i] * game.A[t];
      rhs.block(row, n, shape.control_dims[i], 1) =
          game.B[t][i].transpose() * (Z_next[i] * game.c[t] + zeta_next[i]) +
          game.cost[t][i].r[i];
    }
    const Matrix X = sys.lu.solve(rhs);

    std::vector<Matrix> P(N);
    std::vector<Vector> alpha(N);
    for (int i = 0; i < N; ++i) {
      const int row = shape.control_offset(i);
      P[i] = X.block(row, 0, shape.control_dims[i], n);
      alpha[i] = X.block(row, n, shape.control_dims[i], 1);
    }
    Matrix F = game.A[t];
    Vector beta = game.c[t];
    for (int j = 0; j < N; ++j) {
      F -= game.B[t][j] * P[j];
      beta -= game.B[t][j] * alpha[j];
    }
    F_stage[t] = F;
    beta_stage[t] = beta;

    std::vector<Matrix> Z_new(N);
    std::vector<Vector> zeta_new(N);
    for (int i = 0; i < N; ++i) {
      const LqStageCost& stage = game.cost[t][i];
      Matrix Zn = stage.Q + F.transpose() * Z_next[i] * F;
      Vector zn = stage.q + F.transpose() * (Z_next[i] * beta + zeta_next[i]);
      for (int j = 0; j < N; ++j) {
        Zn += P[j].transpose() * stage.R[j] * P[j];
        zn += P[j].transpose() * (stage.R[j] * alpha[j] - stage.r[j]);
      }
      Z_new[i] = 0.5 * (Zn + Zn.transpose());
      zeta_new[i] = std::move(zn);
    }

    for (int k = 0; k < d; ++k) {
      const int i0 = dir_player[k];
      const LqStageCost& b = game.basis_cost[i0][dir_basis[k]][t];

      // Derivative of the stacked system and right-hand sides.
      Matrix dS = Matrix::Zero(m, m);
      for (int i = 0; i < N; ++i) {
        const int row = shape.control_offset(i);
        const Matrix BtdZ = game.B[t][i].transpose() * dZ[k][i];
        for (int j = 0; j < N; ++j) {
          dS.block(row, shape.control_offset(j), shape.control_dims[i],
                   shape.control_dims[j]) = BtdZ * game.B[t][j];
        }
        if (i == i0) {
          dS.block(row, row, shape.control_dims[i], shape.control_dims[i]) +=
              b.R[i];
        }
        drhs.block(row, 0, shape.control_dims[i], n) = BtdZ * game.A[t];
        drhs.block(row, n, shape.control_dims[i], 1) =
            game.B[t][i].transpose() * (dZ[k][i] * game.c[t] + dzeta[k][i]);
        if (i == i0) {
          drhs.block(row, n, shape.control_dims[i], 1) += b.r[i];
        }
      }
      const Matrix dX = sys.lu.solve(drhs - dS * X);

      std::vector<Matrix> dP(N);
      std::vector<Vector> dalpha(N);
      for (int i = 0; i < N; ++i) {
        const int row = shape.control_offset(i);
        dP[i] = dX.block(row, 0, shape.control_dims[i], n);
        dalpha[i] = dX.block(row, n, shape.control_dims[i], 1);
      }
      Matrix dF = Matrix::Zero(n, n);
      Vector dbeta = Vector::Zero(n);
      for (int j = 0; j < N; ++j) {
        dF -= game.B[t][j] * dP[j];
        dbeta -= game.B[t][j] * dalpha[j];
      }
      dF_stage[t][k] = dF;
      dbeta_stage[t][k] = dbeta;

      for (int i = 0; i < N; ++i) {
        const LqStageCost& stage = game.cost[t][i];
        Matrix dZn = dF.transpose() * Z_next[i] * F +
                     F.transpose() * dZ[k][i] * F +
                     F.transpose() * Z_next[i] * dF;
        Vector dzn = dF.transpose() * (Z_next[i] * beta + zeta_next[i]) +
                     F.transpose() *
                         (dZ[k][i] * beta + Z_next[i] * dbeta + dzeta[k][i]);
        if (i == i0) {
          dZn += b.Q;
          dzn += b.q;
        }
        for (int j = 0; j < N; ++j) {
          dZn += dP[j].transpose() * stage.R[j] * P[j] +
                 P[j].transpose() * stage.R[j] * dP[j];
          dzn += dP[j].transpose() * (stage.R[j] * alpha[j] - stage.r[j]) +
                 P[j].transpose() * (stage.R[j] * dalpha[j]);
          if (i == i0) {
            dZn += P[j].transpose() * b.R[j] * P[j];
            dzn += P[j].transpose() * (b.R[j] * alpha[j] - b.r[j]);
          }
        }
        dZ[k][i] = 0.5 * (dZn + dZn.transpose());
        dzeta[k][i] = std::move(dzn);
      }
    }

    Z_next = std::move(Z_new);
    zeta_next = std::move(zeta_new);
  }

  // Forward pass: x_{t+1} = F_t x_t + beta_t and its derivatives.
  std::vector<Vector> x(T);
  x[0] = x1;
  std::vector<std::vector<Vector>> dx_all(T);
  dx_all[0].assign(d, Vector::Zero(n));
  for (int t = 0; t < T - 1; ++t) {
    x[t + 1] = F_stage[t] * x[t] + beta_stage[t];
    dx_all[t + 1].resize(d);
    for (int k = 0; k < d; ++k) {
      dx_all[t + 1][k] = F_stage[t] * dx_all[t][k] + dF_stage[t][k] * x[t] +
                         dbeta_stage[t][k];
    }
  }

  Vector grad = 2.0 * regularization * theta;
  for (size_t idx = 0; idx < obs.model.times.size(); ++idx) {
    const int t = obs.model.times[idx] - 1;
    const Vector r = obs.model.observe(x[t]) - obs.measurements[idx];
    for (size_t c = 0; c < obs.model.selection.size(); ++c) {
      const int coord = obs.model.selection[c];
      for (int k = 0; k < d; ++k) {
        grad[k] += 2.0 * r[c] * dx_all[t][k][coord];
      }
    }
  }
  return grad;
}

// ---------------------------------------------------------------------------
// Coordinate-descent driver (Algorithm skeleton shared by both solvers)
// ---------------------------------------------------------------------------

namespace {

// Forward map + gradients used by the coordinate descent. The FBNE oracle
// uses the analytic frozen gradients; the OLNE surrogate differentiates its
// frozen map by central differences.
struct ForwardOracle {
  std::function<LossValue(const Vector& theta, const Vector& x1,
                          const std::optional<Trajectory>& warm,
                          AffineLQGame* lq_out, Trajectory* traj_out)>
      evaluate;
  std::function<Vector(const AffineLQGame& lq, const Vector& theta,
                       const Vector& x1)>
      grad_theta;
  std::function<Vector(const AffineLQGame& lq, const Vector& theta,
                       const Vector& x1)>
      grad_x1;
};

InverseReport coordinate_descent(const InverseProblem& problem,
                                 const ForwardOracle& oracle,
                                 const std::string& label) {
  problem.validate();
  InverseReport report;
  report.method_label = label;

  Vector theta = problem.theta0;
  Vector x1 = problem.x1_0;
  std::optional<Trajectory> warm;

  AffineLQGame frozen;
  Trajectory incumbent_traj;
  LossValue current = oracle.evaluate(theta, x1, warm, &frozen, &incumbent_traj);
  if (current.finite()) warm = incumbent_traj;
  report.iterates.push_back({theta, x1, current.loss});

  // Backtracking line search with an Armijo sufficient-decrease test on the
  // true loss; each trial re-runs the forward solve. Two-way stepping: the
  // search resumes from the previously accepted step and grows it again
  // after an immediate acceptance.
  auto line_search = [&](Vector& point, const Vector& grad,
                         const LineSearchOptions& opts, auto& step_state,
                         bool is_theta) -> bool {
    const double g2 = grad.squaredNorm();
    if (g2 <= 1e-30) return false;
    double step = step_state.initial(point, grad);
    for (int b = 0; b <= opts.max_backtracks; ++b) {
      const Vector trial = point - step * grad;
      const Vector& theta_trial = is_theta ? trial : theta;
      const Vector& x1_trial = is_theta ? x1 : trial;
      AffineLQGame lq_trial;
      Trajectory traj_trial;
      const LossValue value = oracle.evaluate(theta_trial, x1_trial, warm,
                                              &lq_trial, &traj_trial);
      if (value.finite() &&
          value.loss <= current.loss - opts.armijo * step * g2) {
        point = trial;
        current = value;
        frozen = std::move(lq_trial);
        warm = std::move(traj_trial);
        step_state.memory = std::min(b == 0 ? step / opts.shrink : step, 1e8);
        return true;
      }
      step *= opts.shrink;
    }
    step_state.memory = std::max(step / opts.shrink, 1e-14);
    return false;
  };

  // Spectral (Barzilai-Borwein) initial trial step per block; backtracking
  // still enforces the Armijo decrease on every accepted step.
  struct StepState {
    double memory;
    Vector prev_point, prev_grad;
    bool has_history = false;

    double initial(const Vector& point, const Vector& grad) {
      double trial = memory;
      if (has_history) {
        const Vector s = point - prev_point;
        const Vector y = grad - prev_grad;
        const double sy = s.dot(y);
        if (sy > 1e-300) {
          trial = std::clamp(s.squaredNorm() / sy, 1e-14, 1e8);
        }
      }
      prev_point = point;
      prev_grad = grad;
      has_history = true;
      return trial;
    }
  };

  if (current.finite()) {
    StepState x1_step{problem.options.x1_search.initial_step, {}, {}};
    StepState theta_step{problem.options.theta_search.initial_step, {}, {}};
    for (int k = 1; k <= problem.options.max_iterations; ++k) {
      const Vector theta_prev = theta;

      const Vector gx = oracle.grad_x1(frozen, theta, x1);
      const bool x1_ok =
          line_search(x1, gx, problem.options.x1_search, x1_step, false);
      if (x1_ok) {
        ++report.accepted_steps;
      } else {
        ++report.line_search_failures;
      }

      // `frozen` now corresponds to the forward solve at (theta, x1^{k+1}).
      const Vector gt = oracle.grad_theta(frozen, theta, x1);
      const bool theta_ok =
          line_search(theta, gt, problem.options.theta_search, theta_step, true);
      if (theta_ok) {
        ++report.accepted_steps;
      } else {
        ++report.line_search_failures;
      }

      report.iterates.push_back({theta, x1, current.loss});

      if ((theta - theta_prev).norm() <= problem.options.theta_tolerance) {
        report.converged = true;
        break;
      }
      if (!x1_ok && !theta_ok) break;  // both searches exhausted
    }
  }

  report.best_index = 0;
  for (size_t i = 1; i < report.iterates.size(); ++i) {
    if (report.iterates[i].loss < report.iterates[report.best_index].loss) {
      report.best_index = static_cast<int>(i);
    }
  }
  return report;
}

}  // namespace

InverseReport solve_inverse(const InverseProblem& problem) {
  ForwardOracle oracle;
  oracle.evaluate = [&problem](const Vector& theta, const Vector& x1,
                               const std::optional<Trajectory>& warm,
                               AffineLQGame* lq_out, Trajectory* traj_out) {
    IlqResult forward;
    const LossValue value = eval_loss(problem, theta, x1, warm, &forward);
    if (value.finite()) {
      if (lq_out != nullptr) *lq_out = std::move(forward.lq);
      if (traj_out != nullptr) *traj_out = std::move(forward.trajectory);
    }
    return value;
  };
  oracle.grad_theta = [&problem](const AffineLQGame& lq, const Vector& theta,
                                 const Vector& x1) {
    return approx_grad_theta(lq, theta, x1, problem.observations,
                             problem.regularization);
  };
  oracle.grad_x1 = [&problem](const AffineLQGame& lq, const Vector& theta,
                              const Vector& x1) {
    return approx_grad_x1(lq, theta, x1, problem.observations);
  };
  return coordinate_descent(problem, oracle, "fbne");
}

InverseReport solve_inverse_olne_baseline(const InverseProblem& problem) {
  ForwardOracle oracle;
  oracle.evaluate = [&problem](const Vector& theta, const Vector& x1,
                               const std::optional<Trajectory>& warm,
                               AffineLQGame* lq_out, Trajectory* traj_out) {
    LossValue out;
    if (!theta.allFinite() || !x1.allFinite()) return out;
    OlneIterationResult forward;
    try {
      forward = olne_iteration_solve(*problem.dynamics,
                                     problem.cost.with_theta(theta), x1, warm,
                                     problem.options.ilq);
    } catch (const DivergenceError&) {
      return out;
    } catch (const EquilibriumError&) {
      return out;
    } catch (const EvaluationError&) {
      return out;
    }
    out.regularization = problem.regularization * theta.squaredNorm();
    out.loss = data_loss(forward.trajectory, problem.observations,
                         &out.residuals) +
               out.regularization;
    if (lq_out != nullptr) *lq_out = std::move(forward.lq);
    if (traj_out != nullptr) *traj_out = std::move(forward.trajectory);
    return out;
  };

  // Loss of the open-loop plan of the frozen LQ game, as a function of
  // whatever is being differentiated.
  auto frozen_loss = [&problem](const AffineLQGame& lq, const Vector& theta,
                                const Vector& x1) {
    const OlneSolution sol = solve_olne_lq(reassemble(lq, theta), x1);
    return data_loss(sol.trajectory, problem.observations);
  };

  oracle.grad_theta = [&problem, frozen_loss](const AffineLQGame& lq,
                                              const Vector& theta,
                                              const Vector& x1) {
    Vector grad = 2.0 * problem.regularization * theta;
    for (int j = 0; j < theta.size(); ++j) {
      const double h = 1e-5 * std::max(1.0, std::abs(theta[j]));
      Vector plus = theta, minus = theta;
      plus[j] += h;
      minus[j] -= h;
      grad[j] += (frozen_loss(lq, plus, x1) - frozen_loss(lq, minus, x1)) /
                 (2.0 * h);
    }
    return grad;
  };
  oracle.grad_x1 = [&problem](const AffineLQGame& lq, const Vector& theta,
                              const Vector& x1) {
    const OlneKktSystem system(reassemble(lq, theta));
    Vector grad = Vector::Zero(x1.size());
    for (int r = 0; r < x1.size(); ++r) {
      const double h = 1e-5 * std::max(1.0, std::abs(x1[r]));
      Vector plus = x1, minus = x1;
      plus[r] += h;
      minus[r] -= h;
      grad[r] = (data_loss(system.solve(plus).trajectory,
                           problem.observations) -
                 data_loss(system.solve(minus).trajectory,
                           problem.observations)) /
                (2.0 * h);
    }
    return grad;
  };
  return coordinate_descent(problem, oracle, "olne_surrogate");
}

}  // namespace dyngame
