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

#ifndef DYNGAME_DYNAMICS_HPP
#define DYNGAME_DYNAMICS_HPP

#include <memory>

#include "dyngame/types.hpp"

namespace dyngame {

// Joint discrete-time dynamics x_{t+1} = f_t(x_t, u_t) with analytic
// Jacobians A = df/dx (n x n) and B = df/du (n x m, joint control).
// Stage indices are 1-based as in the game definition; models that are
// time-invariant simply ignore them.
class DynamicsModel {
 public:
  explicit DynamicsModel(GameShape shape) : shape_(std::move(shape)) {
    shape_.validate();
  }
  virtual ~DynamicsModel() = default;

  const GameShape& shape() const { return shape_; }

  virtual Vector step(int t, const Vector& x, const Vector& u) const = 0;
  virtual void jacobians(int t, const Vector& x, const Vector& u, Matrix& A,
                         Matrix& B) const = 0;

  // True when step() is exactly affine in (x, u) at every stage, in which
  // case the linearization is globally exact.
  virtual bool is_affine() const { return false; }

 protected:
  GameShape shape_;
};

// Stage-invariant affine dynamics x_{t+1} = A x + B u + c.
class AffineDynamics final : public DynamicsModel {
 public:
  AffineDynamics(GameShape shape, Matrix A, Matrix B, Vector c);

  Vector step(int t, const Vector& x, const Vector& u) const override;
  void jacobians(int t, const Vector& x, const Vector& u, Matrix& A,
                 Matrix& B) const override;
  bool is_affine() const override { return true; }

  const Matrix& A() const { return A_; }
  const Matrix& B() const { return B_; }
  const Vector& c() const { return c_; }

 private:
  Matrix A_, B_;
  Vector c_;
};

// Simulates u_t = -P_t x_t - alpha_t against the dynamics. Throws
// DivergenceError (with the 1-based stage) if a state goes non-finite.
Trajectory rollout(const FeedbackStrategy& strategy, const Vector& x1,
                   const DynamicsModel& dynamics);

// Rollout under a fixed open-loop control sequence.
Trajectory rollout_controls(const std::vector<Vector>& controls,
                            const Vector& x1, const DynamicsModel& dynamics);

// Rollout with all controls zero; the default ILQ warm start.
Trajectory zero_control_rollout(const Vector& x1,
                                const DynamicsModel& dynamics);

// Max per-coordinate defect |x_{t+1} - f_t(x_t, u_t)| over the horizon.
double feasibility_defect(const Trajectory& traj,
                          const DynamicsModel& dynamics);

}  // namespace dyngame

#endif  // DYNGAME_DYNAMICS_HPP
