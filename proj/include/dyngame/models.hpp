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

#ifndef DYNGAME_MODELS_HPP
#define DYNGAME_MODELS_HPP

#include <optional>
#include <string>

#include "dyngame/cost.hpp"
#include "dyngame/dynamics.hpp"
#include "dyngame/lq_game.hpp"

namespace dyngame {

// Unicycle kinematics per vehicle: state (px, py, heading, speed), control
// (yaw rate, acceleration), explicit-Euler discretized with step dt.
class DubinsDynamics final : public DynamicsModel {
 public:
  DubinsDynamics(int num_vehicles, int horizon, double dt);

  Vector step(int t, const Vector& x, const Vector& u) const override;
  void jacobians(int t, const Vector& x, const Vector& u, Matrix& A,
                 Matrix& B) const override;
  double dt() const { return dt_; }

 private:
  double dt_;
};

struct GameInstance {
  std::shared_ptr<const DynamicsModel> dynamics;
  ParamCost cost;
};

// Two-vehicle platooning game: the leader guides the follower toward the
// target lane px_star. Parameter layout theta = [theta^1 (2); theta^2 (2)].
GameInstance build_dubins2(double dt, int horizon, double px_star);

// Three-vehicle extension with the nonconvex log collision-repulsion term in
// player 2's fixed cost. theta in R^5 = [theta^1 (2); theta^2 (2); theta^3].
GameInstance build_dubins3(double dt, int horizon, double px_star);

// Single-integrator pursuit games whose feedback and open-loop equilibria
// separate; three cost variants for player 1.
enum class PursuitVariant { kBase, kGhat, kGhhat };
AffineLQGame build_lq_pursuit(PursuitVariant variant, int horizon);
GameInstance build_lq_pursuit_instance(PursuitVariant variant, int horizon);

// Scalar two-player horizon-3 game with weights (Q1, Q2); the benchmark
// whose distinct weight pairs share one feedback Nash trajectory.
AffineLQGame build_prop1(double Q1, double Q2);
// Same game as a parameterized instance with theta = (Q1, Q2).
GameInstance build_prop1_instance();

// Registry used by the experiment harness and the CLI.
struct ModelDescriptor {
  std::string name;
  GameInstance instance;
  Vector theta_star;            // reference ground truth where defined
  Vector x1_star;               // reference initial condition where defined
  Vector default_state;         // fill-in for unobserved x1 coordinates
  std::vector<int> default_observed;  // partial-observation preset
  std::vector<int> position_coordinates;  // perturbed when sampling unseen x1
  double dt = 0.0;
  double target_lane = 0.0;
};

std::vector<std::string> registered_models();
bool is_registered_model(const std::string& name);

// Builds a registered model; unset overrides pick the model's defaults.
// Throws DomainError for unknown names.
ModelDescriptor build_model(const std::string& name,
                            std::optional<double> dt = {},
                            std::optional<int> horizon = {},
                            std::optional<double> target_lane = {});

}  // namespace dyngame

#endif  // DYNGAME_MODELS_HPP
