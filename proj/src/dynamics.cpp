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

#include "dyngame/dynamics.hpp"

namespace dyngame {

AffineDynamics::AffineDynamics(GameShape shape, Matrix A, Matrix B, Vector c)
    : DynamicsModel(std::move(shape)),
      A_(std::move(A)),
      B_(std::move(B)),
      c_(std::move(c)) {
  const int n = shape_.state_dim();
  const int m = shape_.control_dim();
  if (A_.rows() != n || A_.cols() != n || B_.rows() != n || B_.cols() != m ||
      c_.size() != n) {
    throw ShapeError("AffineDynamics: block dimensions inconsistent");
  }
}

Vector AffineDynamics::step(int, const Vector& x, const Vector& u) const {
  return A_ * x + B_ * u + c_;
}

void AffineDynamics::jacobians(int, const Vector&, const Vector&, Matrix& A,
                               Matrix& B) const {
  A = A_;
  B = B_;
}

Trajectory rollout(const FeedbackStrategy& strategy, const Vector& x1,
                   const DynamicsModel& dynamics) {
  const GameShape& shape = dynamics.shape();
  strategy.validate(shape);
  if (x1.size() != shape.state_dim()) {
    throw ShapeError("rollout: x1 dimension mismatch");
  }

  Trajectory traj;
  traj.states.reserve(shape.horizon);
  traj.controls.reserve(shape.horizon - 1);
  traj.states.push_back(x1);
  for (int t = 0; t < shape.horizon - 1; ++t) {
    const Vector u = strategy.control(t, traj.states.back());
    Vector next = dynamics.step(t + 1, traj.states.back(), u);
    if (!next.allFinite()) {
      throw DivergenceError("rollout: non-finite state", t + 2);
    }
    traj.controls.push_back(u);
    traj.states.push_back(std::move(next));
  }
  return traj;
}

Trajectory rollout_controls(const std::vector<Vector>& controls,
                            const Vector& x1, const DynamicsModel& dynamics) {
  const GameShape& shape = dynamics.shape();
  if (static_cast<int>(controls.size()) != shape.horizon - 1) {
    throw ShapeError("rollout_controls: expected T-1 controls");
  }
  Trajectory traj;
  traj.states.reserve(shape.horizon);
  traj.states.push_back(x1);
  for (int t = 0; t < shape.horizon - 1; ++t) {
    Vector next = dynamics.step(t + 1, traj.states.back(), controls[t]);
    if (!next.allFinite()) {
      throw DivergenceError("rollout_controls: non-finite state", t + 2);
    }
    traj.controls.push_back(controls[t]);
    traj.states.push_back(std::move(next));
  }
  return traj;
}

Trajectory zero_control_rollout(const Vector& x1,
                                const DynamicsModel& dynamics) {
  const GameShape& shape = dynamics.shape();
  std::vector<Vector> zeros(shape.horizon - 1,
                            Vector::Zero(shape.control_dim()));
  return rollout_controls(zeros, x1, dynamics);
}

double feasibility_defect(const Trajectory& traj,
                          const DynamicsModel& dynamics) {
  traj.validate(dynamics.shape());
  double worst = 0.0;
  for (int t = 0; t + 1 < traj.horizon(); ++t) {
    const Vector predicted =
        dynamics.step(t + 1, traj.states[t], traj.controls[t]);
    worst = std::max(
        worst, (traj.states[t + 1] - predicted).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace dyngame
