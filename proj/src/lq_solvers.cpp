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
// Exact Nash solvers for affine-quadratic games. The feedback solver runs
// the backward value recursion with one stacked linear solve per stage in
// the joint gains; the open-loop solver factorizes the whole-horizon
// Pontryagin/KKT system once and re-solves it per initial state.

#include "dyngame/lq_solvers.hpp"

#include <Eigen/SparseLU>

#include <limits>

namespace dyngame {

namespace detail {

Matrix shift_to_spd(const Matrix& symmetric, double floor) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetric,
                                            Eigen::EigenvaluesOnly);
  const double lambda_min = eig.eigenvalues().minCoeff();
  if (lambda_min >= floor) return symmetric;
  return symmetric +
         (floor - lambda_min) * Matrix::Identity(symmetric.rows(),
                                                 symmetric.cols());
}

StageSystem build_stage_system(const AffineLQGame& game, int t,
                               const std::vector<Matrix>& Z_next) {
  const GameShape& shape = game.shape;
  const int N = shape.num_players;
  const int m = shape.control_dim();

  StageSystem sys;
  sys.BtZ.resize(N);
  sys.R_ii_shifted.resize(N);
  sys.S.resize(m, m);
  for (int i = 0; i < N; ++i) {
    sys.BtZ[i] = game.B[t][i].transpose() * Z_next[i];
    sys.R_ii_shifted[i] = shift_to_spd(game.cost[t][i].R[i], 1e-9);
  }
  for (int i = 0; i < N; ++i) {
    const int row = shape.control_offset(i);
    for (int j = 0; j < N; ++j) {
      const int col = shape.control_offset(j);
      sys.S.block(row, col, shape.control_dims[i], shape.control_dims[j]) =
          sys.BtZ[i] * game.B[t][j];
    }
    sys.S.block(row, row, shape.control_dims[i], shape.control_dims[i]) +=
        sys.R_ii_shifted[i];
  }

  sys.lu.compute(sys.S);
  sys.rcond = sys.lu.rcond();
  if (!(sys.rcond > 1e-12)) {
    const double mu = 1e-9 * std::max(1e-300, sys.S.cwiseAbs().maxCoeff());
    sys.S += mu * Matrix::Identity(m, m);
    sys.lu.compute(sys.S);
    sys.regularized = true;
    sys.rcond = sys.lu.rcond();
    if (!(sys.rcond > 1e-14)) {
      throw EquilibriumError("solve_fbne_lq: singular stage system", t + 1,
                             sys.rcond > 0.0 ? 1.0 / sys.rcond
                                             : std::numeric_limits<double>::infinity());
    }
  }
  return sys;
}

}  // namespace detail

FbneSolution solve_fbne_lq(const AffineLQGame& game) {
  game.validate();
  const GameShape& shape = game.shape;
  const int N = shape.num_players;
  const int T = shape.horizon;
  const int n = shape.state_dim();
  const int m = shape.control_dim();

  FbneSolution sol;
  sol.value_quadratic.assign(T, std::vector<Matrix>(N));
  sol.value_linear.assign(T, std::vector<Vector>(N));
  sol.value_offset.assign(T, std::vector<double>(N, 0.0));
  sol.strategy.gains.assign(T - 1, std::vector<Matrix>(N));
  sol.strategy.feedforwards.assign(T - 1, std::vector<Vector>(N));

  for (int i = 0; i < N; ++i) {
    sol.value_quadratic[T - 1][i] = game.cost[T - 1][i].Q;
    sol.value_linear[T - 1][i] = game.cost[T - 1][i].q;
    sol.value_offset[T - 1][i] = game.cost[T - 1][i].c0;
  }

  Matrix rhs(m, n + 1);
  for (int t = T - 2; t >= 0; --t) {
    const auto& Z_next = sol.value_quadratic[t + 1];
    const auto& zeta_next = sol.value_linear[t + 1];
    detail::StageSystem sys = detail::build_stage_system(game, t, Z_next);
    sol.regularized = sol.regularized || sys.regularized;

    for (int i = 0; i < N; ++i) {
      const int row = shape.control_offset(i);
      rhs.block(row, 0, shape.control_dims[i], n) = sys.BtZ[i] * game.A[t];
      rhs.block(row, n, shape.control_dims[i], 1) =
          game.B[t][i].transpose() * (Z_next[i] * game.c[t] + zeta_next[i]) +
          game.cost[t][i].r[i];
    }

    const Matrix solution = sys.lu.solve(rhs);
    if (!solution.allFinite()) {
      throw EquilibriumError("solve_fbne_lq: stage solve produced NaN", t + 1,
                             sys.rcond > 0.0 ? 1.0 / sys.rcond : 0.0);
    }
    sol.max_stationarity_residual =
        std::max(sol.max_stationarity_residual,
                 (sys.S * solution - rhs).cwiseAbs().maxCoeff());

    for (int i = 0; i < N; ++i) {
      const int row = shape.control_offset(i);
      sol.strategy.gains[t][i] = solution.block(row, 0, shape.control_dims[i], n);
      sol.strategy.feedforwards[t][i] =
          solution.block(row, n, shape.control_dims[i], 1);
    }

    // Closed-loop stage map x_{t+1} = F x_t + beta.
    Matrix F = game.A[t];
    Vector beta = game.c[t];
    for (int j = 0; j < N; ++j) {
      F -= game.B[t][j] * sol.strategy.gains[t][j];
      beta -= game.B[t][j] * sol.strategy.feedforwards[t][j];
    }

    for (int i = 0; i < N; ++i) {
      const LqStageCost& stage = game.cost[t][i];
      Matrix Z = stage.Q + F.transpose() * Z_next[i] * F;
      Vector zeta =
          stage.q + F.transpose() * (Z_next[i] * beta + zeta_next[i]);
      double offset = sol.value_offset[t + 1][i] + stage.c0 +
                      zeta_next[i].dot(beta) +
                      0.5 * beta.dot(Z_next[i] * beta);
      for (int j = 0; j < N; ++j) {
        const Matrix& P_j = sol.strategy.gains[t][j];
        const Vector& alpha_j = sol.strategy.feedforwards[t][j];
        Z += P_j.transpose() * stage.R[j] * P_j;
        zeta += P_j.transpose() * (stage.R[j] * alpha_j - stage.r[j]);
        offset += 0.5 * alpha_j.dot(stage.R[j] * alpha_j) -
                  stage.r[j].dot(alpha_j);
      }
      sol.value_quadratic[t][i] = 0.5 * (Z + Z.transpose());
      sol.value_linear[t][i] = std::move(zeta);
      sol.value_offset[t][i] = offset;
    }
  }
  return sol;
}

Trajectory fbne_trajectory_lq(const AffineLQGame& game, const Vector& x1) {
  const FbneSolution sol = solve_fbne_lq(game);
  return lq_rollout(game, sol.strategy, x1);
}

namespace {

// Unknown layout per stage s = 0..T-2 (1-based time t = s+1):
// [u_t (m); x_{t+1} (n); lambda_{t+1}^1..N (n each)].
struct KktLayout {
  int n, m, N, stages;
  int block() const { return m + n + N * n; }
  int u(int s) const { return s * block(); }
  int x(int s) const { return s * block() + m; }
  int lambda(int s, int i) const { return s * block() + m + n + i * n; }
  int size() const { return stages * block(); }
};

}  // namespace

OlneKktSystem::OlneKktSystem(const AffineLQGame& game) : game_(game) {
  game_.validate();
  const GameShape& shape = game_.shape;
  const int N = shape.num_players;
  const int T = shape.horizon;
  const int n = shape.state_dim();
  const int m = shape.control_dim();
  const KktLayout lay{n, m, N, T - 1};

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(lay.size()) * (n + m));
  rhs_fixed_ = Vector::Zero(lay.size());
  std::vector<Eigen::Triplet<double>> trip_x1;

  auto add_block = [&trip](int row, int col, const Matrix& M) {
    for (int c = 0; c < M.cols(); ++c) {
      for (int r = 0; r < M.rows(); ++r) {
        if (M(r, c) != 0.0) trip.emplace_back(row + r, col + c, M(r, c));
      }
    }
  };

  for (int s = 0; s < T - 1; ++s) {
    // Dynamics rows: x_{t+1} - A_t x_t - sum_j B_t^j u_t^j = c_t.
    const int dyn_row = lay.x(s);
    add_block(dyn_row, lay.x(s), Matrix::Identity(n, n));
    for (int j = 0; j < N; ++j) {
      add_block(dyn_row, lay.u(s) + shape.control_offset(j), -game_.B[s][j]);
    }
    if (s == 0) {
      // A_1 x_1 moves to the right-hand side.
      for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) {
          if (game_.A[0](r, c) != 0.0) {
            trip_x1.emplace_back(dyn_row + r, c, game_.A[0](r, c));
          }
        }
      }
    } else {
      add_block(dyn_row, lay.x(s - 1), -game_.A[s]);
    }
    rhs_fixed_.segment(dyn_row, n) = game_.c[s];

    // Stationarity rows: R_t^{ii} u_t^i + B_t^i' lambda_{t+1}^i = -r_t^{ii}.
    for (int i = 0; i < N; ++i) {
      const int stat_row = lay.u(s) + shape.control_offset(i);
      add_block(stat_row, lay.u(s) + shape.control_offset(i),
                detail::shift_to_spd(game_.cost[s][i].R[i], 1e-9));
      add_block(stat_row, lay.lambda(s, i), game_.B[s][i].transpose());
      rhs_fixed_.segment(stat_row, shape.control_dims[i]) =
          -game_.cost[s][i].r[i];
    }

    // Costate rows defining lambda_{t+1}^i.
    for (int i = 0; i < N; ++i) {
      const int cost_row = lay.lambda(s, i);
      add_block(cost_row, lay.lambda(s, i), Matrix::Identity(n, n));
      if (s < T - 2) {
        // lambda_{t+1}^i = Q_{t+1}^i x_{t+1} + q_{t+1}^i + A_{t+1}' lambda_{t+2}^i
        add_block(cost_row, lay.x(s), -game_.cost[s + 1][i].Q);
        add_block(cost_row, lay.lambda(s + 1, i), -game_.A[s + 1].transpose());
        rhs_fixed_.segment(cost_row, n) = game_.cost[s + 1][i].q;
      } else {
        // lambda_T^i = Q_T^i x_T + q_T^i (terminal-cost gradient).
        add_block(cost_row, lay.x(s), -game_.cost[T - 1][i].Q);
        rhs_fixed_.segment(cost_row, n) = game_.cost[T - 1][i].q;
      }
    }
  }

  kkt_.resize(lay.size(), lay.size());
  kkt_.setFromTriplets(trip.begin(), trip.end());
  kkt_.makeCompressed();
  rhs_x1_.resize(lay.size(), n);
  rhs_x1_.setFromTriplets(trip_x1.begin(), trip_x1.end());

  lu_.compute(kkt_);
  if (lu_.info() != Eigen::Success) {
    throw EquilibriumError("solve_olne_lq: singular KKT system", 0, 0.0);
  }
}

OlneSolution OlneKktSystem::solve(const Vector& x1) const {
  const GameShape& shape = game_.shape;
  const int N = shape.num_players;
  const int T = shape.horizon;
  const int n = shape.state_dim();
  const int m = shape.control_dim();
  const KktLayout lay{n, m, N, T - 1};
  if (x1.size() != n) throw ShapeError("solve_olne_lq: x1 dimension mismatch");

  const Vector rhs = rhs_fixed_ + rhs_x1_ * x1;
  const Vector z = lu_.solve(rhs);
  if (!z.allFinite()) {
    throw EquilibriumError("solve_olne_lq: KKT solve produced NaN", 0, 0.0);
  }

  OlneSolution sol;
  sol.kkt_residual = (kkt_ * z - rhs).cwiseAbs().maxCoeff();
  sol.plan.controls.reserve(T - 1);
  for (int s = 0; s < T - 1; ++s) {
    sol.plan.controls.push_back(z.segment(lay.u(s), m));
  }
  sol.plan.costates.assign(T, std::vector<Vector>(N));
  for (int s = 0; s < T - 1; ++s) {
    for (int i = 0; i < N; ++i) {
      sol.plan.costates[s + 1][i] = z.segment(lay.lambda(s, i), n);
    }
  }
  for (int i = 0; i < N; ++i) {
    sol.plan.costates[0][i] = game_.cost[0][i].Q * x1 + game_.cost[0][i].q +
                              game_.A[0].transpose() * sol.plan.costates[1][i];
  }
  sol.trajectory = lq_rollout_controls(game_, sol.plan.controls, x1);
  return sol;
}

OlneSolution solve_olne_lq(const AffineLQGame& game, const Vector& x1) {
  return OlneKktSystem(game).solve(x1);
}

Prop1Evaluation prop1_oracle(double Q1, double Q2, double x1) {
  if (Q1 <= 0.0 || Q2 <= 0.0) {
    throw DomainError("prop1_oracle: weights must be positive");
  }
  Prop1Evaluation out;
  const double den2 = 2.0 + 2.0 * Q1 + Q2;
  out.gain1_t2 = 2.0 * Q1 / den2;
  out.gain2_t2 = Q2 / den2;
  // Cost-to-go weights at t=2: Z^i = Q^i + (P^i)^2 R^ii + F^2 Q^i with the
  // closed-loop factor F = 2/den2.
  out.z2_1 = Q1 + (4.0 * Q1 + 4.0 * Q1 * Q1) / (den2 * den2);
  out.z2_2 = Q2 + (4.0 * Q2 + 2.0 * Q2 * Q2) / (den2 * den2);
  const double den1 = 2.0 + 2.0 * out.z2_1 + out.z2_2;
  out.x2 = (2.0 / den1) * x1;
  out.x3 = (2.0 / den2) * out.x2;
  return out;
}

}  // namespace dyngame
