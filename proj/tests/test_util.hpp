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
// Shared test oracles: finite-difference audits, random game generators,
// an independent discrete-Riccati LQR recursion, a batch least-squares
// optimal-control solver, and brute-force Nash deviation replays.

#ifndef DYNGAME_TESTS_TEST_UTIL_HPP
#define DYNGAME_TESTS_TEST_UTIL_HPP

#include <random>

#include "dyngame/cost.hpp"
#include "dyngame/dynamics.hpp"
#include "dyngame/lq_game.hpp"
#include "dyngame/types.hpp"

namespace dyngame::testing {

// Central-difference Jacobians of a dynamics model at (x, u).
inline void fd_jacobians(const DynamicsModel& dyn, int t, const Vector& x,
                         const Vector& u, Matrix& A, Matrix& B,
                         double h = 1e-6) {
  const int n = x.size();
  const int m = u.size();
  A.resize(n, n);
  B.resize(n, m);
  for (int k = 0; k < n; ++k) {
    Vector xp = x, xm = x;
    const double step = h * std::max(1.0, std::abs(x[k]));
    xp[k] += step;
    xm[k] -= step;
    A.col(k) = (dyn.step(t, xp, u) - dyn.step(t, xm, u)) / (2.0 * step);
  }
  for (int k = 0; k < m; ++k) {
    Vector up = u, um = u;
    const double step = h * std::max(1.0, std::abs(u[k]));
    up[k] += step;
    um[k] -= step;
    B.col(k) = (dyn.step(t, x, up) - dyn.step(t, x, um)) / (2.0 * step);
  }
}

// Central-difference gradient and Hessian of a cost term.
inline void fd_term_derivatives(const CostTerm& term, const Vector& z,
                                Vector& grad, Matrix& hess, double h = 1e-5) {
  const int dim = z.size();
  grad.resize(dim);
  hess.resize(dim, dim);
  for (int k = 0; k < dim; ++k) {
    Vector zp = z, zm = z;
    const double step = h * std::max(1.0, std::abs(z[k]));
    zp[k] += step;
    zm[k] -= step;
    grad[k] = (term.value(zp) - term.value(zm)) / (2.0 * step);
    Vector gp(dim), gm(dim);
    for (int l = 0; l < dim; ++l) {
      Vector zpp = zp, zpm = zp, zmp = zm, zmm = zm;
      const double step_l = h * std::max(1.0, std::abs(z[l]));
      zpp[l] += step_l;
      zpm[l] -= step_l;
      zmp[l] += step_l;
      zmm[l] -= step_l;
      hess(k, l) = ((term.value(zpp) - term.value(zpm)) -
                    (term.value(zmp) - term.value(zmm))) /
                   (4.0 * step * step_l);
    }
  }
}

inline Matrix random_matrix(std::mt19937_64& rng, int rows, int cols,
                            double scale = 1.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Matrix M(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) M(r, c) = dist(rng);
  }
  return M;
}

inline Vector random_vector(std::mt19937_64& rng, int dim, double scale = 1.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Vector v(dim);
  for (int r = 0; r < dim; ++r) v[r] = dist(rng);
  return v;
}

inline Matrix random_psd(std::mt19937_64& rng, int dim, double scale = 1.0) {
  const Matrix G = random_matrix(rng, dim, dim, scale);
  return G * G.transpose();
}

// Random stage-invariant affine-quadratic game with PSD state costs and
// positive definite own-control costs.
inline AffineLQGame random_lq_game(std::mt19937_64& rng, int num_players,
                                   const std::vector<int>& control_dims,
                                   int state_dim, int horizon,
                                   bool affine_terms = true) {
  GameShape shape;
  shape.num_players = num_players;
  shape.horizon = horizon;
  shape.state_dims.assign(num_players, 0);
  shape.state_dims[0] = state_dim;
  shape.control_dims = control_dims;

  AffineLQGame game;
  game.shape = shape;
  const Matrix A = random_matrix(rng, state_dim, state_dim,
                                 1.0 / std::sqrt(double(state_dim)));
  std::vector<Matrix> B(num_players);
  for (int i = 0; i < num_players; ++i) {
    B[i] = random_matrix(rng, state_dim, control_dims[i]);
  }
  const Vector c = affine_terms ? random_vector(rng, state_dim, 0.3)
                                : Vector::Zero(state_dim);
  for (int t = 0; t < horizon - 1; ++t) {
    game.A.push_back(A);
    game.B.push_back(B);
    game.c.push_back(c);
  }
  game.cost.resize(horizon);
  for (int t = 0; t < horizon; ++t) {
    const bool terminal = (t == horizon - 1);
    for (int i = 0; i < num_players; ++i) {
      LqStageCost block(state_dim, control_dims, terminal);
      block.Q = random_psd(rng, state_dim);
      if (affine_terms) block.q = random_vector(rng, state_dim, 0.5);
      if (!terminal) {
        for (int j = 0; j < num_players; ++j) {
          if (j == i) {
            block.R[j] = random_psd(rng, control_dims[j], 0.5) +
                         Matrix::Identity(control_dims[j], control_dims[j]);
          } else {
            block.R[j] = 0.1 * random_psd(rng, control_dims[j], 0.5);
          }
          if (affine_terms) block.r[j] = random_vector(rng, control_dims[j], 0.3);
        }
      }
      game.cost[t].push_back(std::move(block));
    }
  }
  return game;
}

// Single-player discrete-Riccati LQR gains through the textbook update
//   Z <- Q + A'ZA - A'ZB (R + B'ZB)^{-1} B'ZA,
// algebraically distinct from the solver's closed-loop recursion.
inline std::vector<Matrix> lqr_gains_dare(const AffineLQGame& game) {
  const int T = game.shape.horizon;
  std::vector<Matrix> K(T - 1);
  Matrix Z = game.cost[T - 1][0].Q;
  for (int t = T - 2; t >= 0; --t) {
    const Matrix& A = game.A[t];
    const Matrix& B = game.B[t][0];
    const Matrix S = game.cost[t][0].R[0] + B.transpose() * Z * B;
    K[t] = S.ldlt().solve(B.transpose() * Z * A);
    Z = game.cost[t][0].Q + A.transpose() * Z * A -
        A.transpose() * Z * B * K[t];
    Z = 0.5 * (Z + Z.transpose());
  }
  return K;
}

// Single-player batch solution: stack all controls, minimize the exact
// quadratic total cost by one dense solve. No Riccati structure anywhere.
inline std::vector<Vector> batch_optimal_controls(const AffineLQGame& game,
                                                  const Vector& x1) {
  const int T = game.shape.horizon;
  const int n = game.shape.state_dim();
  const int m = game.shape.control_dim();
  const int dim = (T - 1) * m;

  // x_t = phi_t + Gamma_t * U with U the stacked controls.
  std::vector<Vector> phi(T);
  std::vector<Matrix> gamma(T, Matrix::Zero(n, dim));
  phi[0] = x1;
  for (int t = 0; t < T - 1; ++t) {
    Matrix B(n, m);
    int off = 0;
    for (int i = 0; i < game.shape.num_players; ++i) {
      B.middleCols(off, game.shape.control_dims[i]) = game.B[t][i];
      off += game.shape.control_dims[i];
    }
    phi[t + 1] = game.A[t] * phi[t] + game.c[t];
    gamma[t + 1] = game.A[t] * gamma[t];
    gamma[t + 1].middleCols(t * m, m) += B;
  }

  Matrix H = Matrix::Zero(dim, dim);
  Vector g = Vector::Zero(dim);
  for (int t = 0; t < T; ++t) {
    const LqStageCost& blk = game.cost[t][0];
    H += gamma[t].transpose() * blk.Q * gamma[t];
    g += gamma[t].transpose() * (blk.Q * phi[t] + blk.q);
    if (t < T - 1) {
      Matrix R = Matrix::Zero(m, m);
      Vector r(m);
      int off = 0;
      for (size_t j = 0; j < blk.R.size(); ++j) {
        R.block(off, off, blk.R[j].rows(), blk.R[j].cols()) = blk.R[j];
        r.segment(off, blk.r[j].size()) = blk.r[j];
        off += static_cast<int>(blk.r[j].size());
      }
      H.block(t * m, t * m, m, m) += R;
      g.segment(t * m, m) += r;
    }
  }
  const Vector U = (-H.ldlt().solve(g)).eval();
  std::vector<Vector> controls(T - 1);
  for (int t = 0; t < T - 1; ++t) controls[t] = U.segment(t * m, m);
  return controls;
}

// Player cost-to-go of a feedback profile replayed from stage `from` (0-based
// state index) at state x, with an additive perturbation delta on player i's
// control at that first stage only.
inline double replay_cost_to_go(const AffineLQGame& game,
                                const FeedbackStrategy& strategy, int from,
                                const Vector& x_start, int player,
                                const Vector& delta) {
  const GameShape& shape = game.shape;
  const int T = shape.horizon;
  Vector x = x_start;
  double cost = 0.0;
  for (int t = from; t < T - 1; ++t) {
    Vector u = strategy.control(t, x);
    if (t == from) {
      u.segment(shape.control_offset(player), shape.control_dims[player]) +=
          delta;
    }
    cost += game.stage_cost_value(t + 1, player, x, u);
    Vector next = game.A[t] * x + game.c[t];
    int off = 0;
    for (int i = 0; i < shape.num_players; ++i) {
      next += game.B[t][i] * u.segment(off, shape.control_dims[i]);
      off += shape.control_dims[i];
    }
    x = next;
  }
  cost += game.stage_cost_value(T, player, x, Vector::Zero(shape.control_dim()));
  return cost;
}

// Player total cost of an open-loop profile with player i's control sequence
// perturbed by eps * direction, dynamics re-rolled.
inline double replay_open_loop(const AffineLQGame& game,
                               const std::vector<Vector>& controls,
                               const Vector& x1, int player, double eps,
                               const std::vector<Vector>& direction) {
  std::vector<Vector> perturbed = controls;
  const int off = game.shape.control_offset(player);
  const int mi = game.shape.control_dims[player];
  for (size_t t = 0; t < perturbed.size(); ++t) {
    perturbed[t].segment(off, mi) += eps * direction[t];
  }
  const Trajectory traj = lq_rollout_controls(game, perturbed, x1);
  return game.total_cost_value(traj, player);
}

}  // namespace dyngame::testing

#endif  // DYNGAME_TESTS_TEST_UTIL_HPP
