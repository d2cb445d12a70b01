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

#ifndef DYNGAME_LQ_SOLVERS_HPP
#define DYNGAME_LQ_SOLVERS_HPP

#include <Eigen/Sparse>

#include "dyngame/lq_game.hpp"

namespace dyngame {

// Feedback Nash solution: strategies plus the per-player value quadratics
//   V_t^i(x) = 1/2 x'Z_t^i x + zeta_t^i'x + offset.
struct FbneSolution {
  FeedbackStrategy strategy;
  std::vector<std::vector<Matrix>> value_quadratic;  // Z[t][i], t = 0..T-1
  std::vector<std::vector<Vector>> value_linear;     // zeta[t][i]
  std::vector<std::vector<double>> value_offset;
  bool regularized = false;                 // a stage system needed a shift
  double max_stationarity_residual = 0.0;   // over all stages and players
};

// Open-loop Nash solution from a given initial state.
struct OlneSolution {
  OpenLoopPlan plan;
  Trajectory trajectory;
  double kkt_residual = 0.0;
};

// Backward coupled-Riccati recursion with a stacked stage linear system in
// the joint gains. Requires R_t^{ii} positive definite (shifted up to a small
// floor otherwise); throws EquilibriumError when a stage system stays
// singular after regularization.
FbneSolution solve_fbne_lq(const AffineLQGame& game);

// FBNE strategies rolled out on the game's own affine dynamics.
Trajectory fbne_trajectory_lq(const AffineLQGame& game, const Vector& x1);

// Joint Pontryagin/KKT system over the whole horizon, factorized once and
// solvable for many initial states (the matrix does not depend on x1).
class OlneKktSystem {
 public:
  explicit OlneKktSystem(const AffineLQGame& game);
  OlneSolution solve(const Vector& x1) const;

 private:
  const AffineLQGame game_;
  Eigen::SparseMatrix<double> kkt_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
  Vector rhs_fixed_;
  Eigen::SparseMatrix<double> rhs_x1_;  // contribution linear in x1
};

OlneSolution solve_olne_lq(const AffineLQGame& game, const Vector& x1);

// Closed-form evaluation of the scalar two-player horizon-3 benchmark game,
// written directly from the stage formulas and independent of the general
// solver; serves as its oracle.
struct Prop1Evaluation {
  double x2 = 0.0;
  double x3 = 0.0;
  double gain1_t2 = 0.0;  // P_2^1
  double gain2_t2 = 0.0;  // P_2^2
  double z2_1 = 0.0;      // Z_2^1
  double z2_2 = 0.0;      // Z_2^2
};

Prop1Evaluation prop1_oracle(double Q1, double Q2, double x1);

namespace detail {

// Stacked stage stationarity system shared by the solver and the
// frozen-model derivative propagation. Applies the R floor shift and, when
// the stack is near singular, a diagonal shift.
struct StageSystem {
  Matrix S;  // regularized stack actually factorized
  Eigen::PartialPivLU<Matrix> lu;
  std::vector<Matrix> BtZ;  // B_t^i' Z_{t+1}^i per player
  std::vector<Matrix> R_ii_shifted;
  bool regularized = false;
  double rcond = 0.0;
};

StageSystem build_stage_system(const AffineLQGame& game, int t,
                               const std::vector<Matrix>& Z_next);

// Shift the whole spectrum of a symmetric block (add (floor - lambda_min) I)
// when its smallest eigenvalue is below the floor.
Matrix shift_to_spd(const Matrix& symmetric, double floor);

}  // namespace detail

}  // namespace dyngame

#endif  // DYNGAME_LQ_SOLVERS_HPP
