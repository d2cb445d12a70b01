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

#ifndef DYNGAME_LQ_GAME_HPP
#define DYNGAME_LQ_GAME_HPP

#include "dyngame/types.hpp"

namespace dyngame {

// One player's cost pieces at one stage:
//   1/2 x'Qx + q'x + sum_j (1/2 u_j'R[j]u_j + r[j]'u_j) + c0.
// At the terminal stage R and r are empty.
struct LqStageCost {
  Matrix Q;
  Vector q;
  std::vector<Matrix> R;  // R[j] is m_j x m_j
  std::vector<Vector> r;
  double c0 = 0.0;

  LqStageCost() = default;
  LqStageCost(int n, const std::vector<int>& control_dims, bool terminal);

  void add_scaled(const LqStageCost& other, double scale);
  double eval(const Vector& x, const Vector& u,
              const std::vector<int>& control_dims) const;  // u ignored at T
};

// Stagewise affine dynamics plus per-player affine-quadratic costs:
//   x_{t+1} = A_t x_t + sum_i B_t^i u_t^i + c_t.
// Exact LQ games and iterative LQ approximations both live here. When built
// by quadraticization the per-basis decomposition is retained so the cost
// blocks can be reassembled at a different parameter vector.
struct AffineLQGame {
  GameShape shape;
  std::vector<Matrix> A;               // T-1
  std::vector<std::vector<Matrix>> B;  // [T-1][N], each n x m_i
  std::vector<Vector> c;               // T-1

  std::vector<std::vector<LqStageCost>> cost;  // [T][N]

  // Optional per-basis decomposition: basis_cost[i][j][t] holds the blocks
  // contributed by basis j of player i at stage t+1; fixed_cost[i][t] the
  // aggregated unparameterized blocks. `theta` is the parameter at which
  // `cost` was assembled.
  std::vector<std::vector<std::vector<LqStageCost>>> basis_cost;
  std::vector<std::vector<LqStageCost>> fixed_cost;
  Vector theta;

  bool has_basis_decomposition() const { return !basis_cost.empty(); }
  int param_dim() const;
  int param_offset(int player) const;

  double stage_cost_value(int t, int player, const Vector& x,
                          const Vector& u) const;  // 1-based stage
  double total_cost_value(const Trajectory& traj, int player) const;

  void validate() const;
};

// Rebuild the assembled cost blocks as sum_j theta_j * basis + fixed.
// Requires the decomposition; dynamics are shared unchanged.
AffineLQGame reassemble(const AffineLQGame& frozen, const Vector& theta);

// Linear closed-loop rollout of a feedback strategy on the game's own
// stagewise affine dynamics.
Trajectory lq_rollout(const AffineLQGame& game, const FeedbackStrategy& strategy,
                      const Vector& x1);

// Rollout of a fixed control sequence on the game's dynamics.
Trajectory lq_rollout_controls(const AffineLQGame& game,
                               const std::vector<Vector>& controls,
                               const Vector& x1);

}  // namespace dyngame

#endif  // DYNGAME_LQ_GAME_HPP
