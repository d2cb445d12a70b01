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

#include "dyngame/lq_game.hpp"

namespace dyngame {

LqStageCost::LqStageCost(int n, const std::vector<int>& control_dims,
                         bool terminal)
    : Q(Matrix::Zero(n, n)), q(Vector::Zero(n)) {
  if (!terminal) {
    R.reserve(control_dims.size());
    r.reserve(control_dims.size());
    for (int mj : control_dims) {
      R.push_back(Matrix::Zero(mj, mj));
      r.push_back(Vector::Zero(mj));
    }
  }
}

void LqStageCost::add_scaled(const LqStageCost& other, double scale) {
  Q += scale * other.Q;
  q += scale * other.q;
  c0 += scale * other.c0;
  for (size_t j = 0; j < R.size(); ++j) {
    R[j] += scale * other.R[j];
    r[j] += scale * other.r[j];
  }
}

double LqStageCost::eval(const Vector& x, const Vector& u,
                         const std::vector<int>& control_dims) const {
  double value = 0.5 * x.dot(Q * x) + q.dot(x) + c0;
  int offset = 0;
  for (size_t j = 0; j < R.size(); ++j) {
    const auto uj = u.segment(offset, control_dims[j]);
    value += 0.5 * uj.dot(R[j] * uj) + r[j].dot(uj);
    offset += control_dims[j];
  }
  return value;
}

int AffineLQGame::param_dim() const {
  int d = 0;
  for (const auto& player : basis_cost) d += static_cast<int>(player.size());
  return d;
}

int AffineLQGame::param_offset(int player) const {
  int offset = 0;
  for (int i = 0; i < player; ++i) {
    offset += static_cast<int>(basis_cost[i].size());
  }
  return offset;
}

double AffineLQGame::stage_cost_value(int t, int player, const Vector& x,
                                      const Vector& u) const {
  return cost[t - 1][player].eval(x, u, shape.control_dims);
}

double AffineLQGame::total_cost_value(const Trajectory& traj,
                                      int player) const {
  double total = 0.0;
  for (int t = 1; t < shape.horizon; ++t) {
    total += stage_cost_value(t, player, traj.states[t - 1],
                              traj.controls[t - 1]);
  }
  const Vector zero_u = Vector::Zero(shape.control_dim());
  total += stage_cost_value(shape.horizon, player,
                            traj.states[shape.horizon - 1], zero_u);
  return total;
}

void AffineLQGame::validate() const {
  shape.validate();
  const int n = shape.state_dim();
  const int T = shape.horizon;
  const int N = shape.num_players;
  if (static_cast<int>(A.size()) != T - 1 ||
      static_cast<int>(B.size()) != T - 1 ||
      static_cast<int>(c.size()) != T - 1 ||
      static_cast<int>(cost.size()) != T) {
    throw ShapeError("AffineLQGame: stage list lengths inconsistent");
  }
  auto check_symmetric = [](const Matrix& M, const char* what) {
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw ShapeError(std::string("AffineLQGame: asymmetric block: ") + what);
    }
  };
  for (int t = 0; t < T - 1; ++t) {
    if (A[t].rows() != n || A[t].cols() != n || c[t].size() != n ||
        static_cast<int>(B[t].size()) != N) {
      throw ShapeError("AffineLQGame: dynamics block dimension mismatch");
    }
    for (int i = 0; i < N; ++i) {
      if (B[t][i].rows() != n || B[t][i].cols() != shape.control_dims[i]) {
        throw ShapeError("AffineLQGame: B block dimension mismatch");
      }
    }
  }
  for (int t = 0; t < T; ++t) {
    if (static_cast<int>(cost[t].size()) != N) {
      throw ShapeError("AffineLQGame: cost player count mismatch");
    }
    const bool terminal = (t == T - 1);
    for (int i = 0; i < N; ++i) {
      const LqStageCost& block = cost[t][i];
      if (block.Q.rows() != n || block.Q.cols() != n || block.q.size() != n) {
        throw ShapeError("AffineLQGame: Q block dimension mismatch");
      }
      check_symmetric(block.Q, "Q");
      const size_t expected_r = terminal ? 0 : static_cast<size_t>(N);
      if (block.R.size() != expected_r || block.r.size() != expected_r) {
        throw ShapeError("AffineLQGame: R block count mismatch");
      }
      for (size_t j = 0; j < block.R.size(); ++j) {
        if (block.R[j].rows() != shape.control_dims[j] ||
            block.R[j].cols() != shape.control_dims[j] ||
            block.r[j].size() != shape.control_dims[j]) {
          throw ShapeError("AffineLQGame: R block dimension mismatch");
        }
        check_symmetric(block.R[j], "R");
      }
    }
  }
}

AffineLQGame reassemble(const AffineLQGame& frozen, const Vector& theta) {
  if (!frozen.has_basis_decomposition()) {
    throw ShapeError("reassemble: game carries no basis decomposition");
  }
  if (theta.size() != frozen.param_dim()) {
    throw ShapeError("reassemble: theta dimension mismatch");
  }
  AffineLQGame game = frozen;
  game.theta = theta;
  const int N = game.shape.num_players;
  const int T = game.shape.horizon;
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < N; ++i) {
      LqStageCost block = game.fixed_cost[i][t];
      const int offset = game.param_offset(i);
      for (size_t j = 0; j < game.basis_cost[i].size(); ++j) {
        block.add_scaled(game.basis_cost[i][j][t], theta[offset + j]);
      }
      game.cost[t][i] = std::move(block);
    }
  }
  return game;
}

Trajectory lq_rollout(const AffineLQGame& game,
                      const FeedbackStrategy& strategy, const Vector& x1) {
  const int T = game.shape.horizon;
  Trajectory traj;
  traj.states.reserve(T);
  traj.states.push_back(x1);
  for (int t = 0; t < T - 1; ++t) {
    const Vector u = strategy.control(t, traj.states.back());
    Vector next = game.A[t] * traj.states.back() + game.c[t];
    int offset = 0;
    for (int i = 0; i < game.shape.num_players; ++i) {
      next += game.B[t][i] * u.segment(offset, game.shape.control_dims[i]);
      offset += game.shape.control_dims[i];
    }
    if (!next.allFinite()) {
      throw DivergenceError("lq_rollout: non-finite state", t + 2);
    }
    traj.controls.push_back(u);
    traj.states.push_back(std::move(next));
  }
  return traj;
}

Trajectory lq_rollout_controls(const AffineLQGame& game,
                               const std::vector<Vector>& controls,
                               const Vector& x1) {
  const int T = game.shape.horizon;
  if (static_cast<int>(controls.size()) != T - 1) {
    throw ShapeError("lq_rollout_controls: expected T-1 controls");
  }
  Trajectory traj;
  traj.states.reserve(T);
  traj.states.push_back(x1);
  for (int t = 0; t < T - 1; ++t) {
    Vector next = game.A[t] * traj.states.back() + game.c[t];
    int offset = 0;
    for (int i = 0; i < game.shape.num_players; ++i) {
      next +=
          game.B[t][i] * controls[t].segment(offset, game.shape.control_dims[i]);
      offset += game.shape.control_dims[i];
    }
    traj.controls.push_back(controls[t]);
    traj.states.push_back(std::move(next));
  }
  return traj;
}

}  // namespace dyngame
