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

#include "dyngame/models.hpp"

#include <cmath>

#include "dyngame/ilq_solver.hpp"

namespace dyngame {

namespace {

GameShape dubins_shape(int num_vehicles, int horizon) {
  GameShape shape;
  shape.num_players = num_vehicles;
  shape.horizon = horizon;
  shape.state_dims.assign(num_vehicles, 4);
  shape.control_dims.assign(num_vehicles, 2);
  return shape;
}

}  // namespace

DubinsDynamics::DubinsDynamics(int num_vehicles, int horizon, double dt)
    : DynamicsModel(dubins_shape(num_vehicles, horizon)), dt_(dt) {
  if (dt <= 0.0) throw DomainError("DubinsDynamics: dt must be positive");
}

Vector DubinsDynamics::step(int, const Vector& x, const Vector& u) const {
  Vector next = x;
  for (int i = 0; i < shape_.num_players; ++i) {
    const int b = 4 * i;
    const double beta = x[b + 2];
    const double v = x[b + 3];
    next[b + 0] += dt_ * v * std::cos(beta);
    next[b + 1] += dt_ * v * std::sin(beta);
    next[b + 2] += dt_ * u[2 * i + 0];
    next[b + 3] += dt_ * u[2 * i + 1];
  }
  return next;
}

void DubinsDynamics::jacobians(int, const Vector& x, const Vector&, Matrix& A,
                               Matrix& B) const {
  const int n = shape_.state_dim();
  const int m = shape_.control_dim();
  A = Matrix::Identity(n, n);
  B = Matrix::Zero(n, m);
  for (int i = 0; i < shape_.num_players; ++i) {
    const int b = 4 * i;
    const double beta = x[b + 2];
    const double v = x[b + 3];
    A(b + 0, b + 2) = -dt_ * v * std::sin(beta);
    A(b + 0, b + 3) = dt_ * std::cos(beta);
    A(b + 1, b + 2) = dt_ * v * std::cos(beta);
    A(b + 1, b + 3) = dt_ * std::sin(beta);
    B(b + 2, 2 * i + 0) = dt_;
    B(b + 3, 2 * i + 1) = dt_;
  }
}

GameInstance build_dubins2(double dt, int horizon, double px_star) {
  GameInstance game;
  game.dynamics = std::make_shared<DubinsDynamics>(2, horizon, dt);
  const int n = 8, m = 4;

  ParamCost& cost = game.cost;
  cost.shape = game.dynamics->shape();
  cost.bases.resize(2);
  cost.fixed.resize(2);

  // Player 1 steers its own lane position and the follower's lane offset.
  cost.bases[0] = {
      QuadraticTerm::coordinate(TermDomain::kState, n, 0, 0.0),
      QuadraticTerm::coordinate(TermDomain::kState, n, 4, px_star),
  };
  cost.fixed[0] = {
      QuadraticTerm::squared_norm(TermDomain::kControl, m, {0, 1},
                                  Vector::Zero(2)),
  };
  // Player 2 tracks the leader laterally and holds unit speed.
  cost.bases[1] = {
      QuadraticTerm::combination(TermDomain::kState, n, {4, 0}, {1.0, -1.0},
                                 0.0),
      QuadraticTerm::coordinate(TermDomain::kState, n, 7, 1.0),
  };
  cost.fixed[1] = {
      QuadraticTerm::squared_norm(TermDomain::kControl, m, {2, 3},
                                  Vector::Zero(2)),
  };
  cost.theta = Vector::Zero(4);
  return game;
}

GameInstance build_dubins3(double dt, int horizon, double px_star) {
  GameInstance game;
  game.dynamics = std::make_shared<DubinsDynamics>(3, horizon, dt);
  const int n = 12, m = 6;
  const double half_pi = M_PI / 2.0;

  ParamCost& cost = game.cost;
  cost.shape = game.dynamics->shape();
  cost.bases.resize(3);
  cost.fixed.resize(3);

  cost.bases[0] = {
      QuadraticTerm::coordinate(TermDomain::kState, n, 0, 0.0),
      QuadraticTerm::coordinate(TermDomain::kState, n, 4, px_star),
  };
  cost.fixed[0] = {
      QuadraticTerm::coordinate(TermDomain::kState, n, 3, 2.0),
      QuadraticTerm::coordinate(TermDomain::kState, n, 2, half_pi),
      QuadraticTerm::squared_norm(TermDomain::kControl, m, {0, 1},
                                  Vector::Zero(2)),
  };

  cost.bases[1] = {
      QuadraticTerm::coordinate(TermDomain::kState, n, 4, 0.0),
      QuadraticTerm::combination(TermDomain::kState, n, {4, 0}, {1.0, -1.0},
                                 0.0),
  };
  cost.fixed[1] = {
      QuadraticTerm::coordinate(TermDomain::kState, n, 6, half_pi),
      QuadraticTerm::coordinate(TermDomain::kState, n, 7, 2.0),
      std::make_shared<LogDistanceTerm>(n, 4, 5, 8, 9),
      QuadraticTerm::squared_norm(TermDomain::kControl, m, {2, 3},
                                  Vector::Zero(2)),
  };

  cost.bases[2] = {
      QuadraticTerm::coordinate(TermDomain::kState, n, 8, 0.5),
  };
  cost.fixed[2] = {
      QuadraticTerm::squared_norm(TermDomain::kControl, m, {4, 5},
                                  Vector::Zero(2)),
  };
  cost.theta = Vector::Zero(5);
  return game;
}

GameInstance build_lq_pursuit_instance(PursuitVariant variant, int horizon) {
  GameShape shape;
  shape.num_players = 2;
  shape.horizon = horizon;
  shape.state_dims = {2, 2};
  shape.control_dims = {2, 2};

  const int n = 4, m = 4;
  Matrix A = Matrix::Identity(n, n);
  Matrix B = Matrix::Zero(n, m);
  B.block(0, 0, 2, 2) = Matrix::Identity(2, 2);
  B.block(2, 2, 2, 2) = Matrix::Identity(2, 2);

  GameInstance game;
  game.dynamics =
      std::make_shared<AffineDynamics>(shape, A, B, Vector::Zero(n));

  ParamCost& cost = game.cost;
  cost.shape = shape;
  cost.bases.assign(2, {});
  cost.fixed.resize(2);

  switch (variant) {
    case PursuitVariant::kBase:
      // Drive the second agent to the origin.
      cost.fixed[0] = {
          QuadraticTerm::squared_norm(TermDomain::kState, n, {2, 3},
                                      Vector::Zero(2)),
      };
      break;
    case PursuitVariant::kGhat:
      // Align the second agent's x and y positions.
      cost.fixed[0] = {
          QuadraticTerm::combination(TermDomain::kState, n, {2, 3},
                                     {1.0, -1.0}, 0.0),
      };
      break;
    case PursuitVariant::kGhhat:
      // Chase a doubled (mis-scaled) observation of the second agent.
      cost.fixed[0] = {
          QuadraticTerm::combination(TermDomain::kState, n, {0, 2},
                                     {1.0, -2.0}, 0.0),
          QuadraticTerm::combination(TermDomain::kState, n, {1, 3},
                                     {1.0, -2.0}, 0.0),
      };
      break;
  }
  cost.fixed[0].push_back(QuadraticTerm::squared_norm(
      TermDomain::kControl, m, {0, 1}, Vector::Zero(2)));

  cost.fixed[1] = {
      QuadraticTerm::combination(TermDomain::kState, n, {2, 0}, {1.0, -1.0},
                                 0.0),
      QuadraticTerm::combination(TermDomain::kState, n, {3, 1}, {1.0, -1.0},
                                 0.0),
      QuadraticTerm::squared_norm(TermDomain::kControl, m, {2, 3},
                                  Vector::Zero(2)),
  };
  cost.theta = Vector::Zero(0);
  return game;
}

AffineLQGame build_lq_pursuit(PursuitVariant variant, int horizon) {
  const GameInstance game = build_lq_pursuit_instance(variant, horizon);
  const Trajectory zero =
      zero_control_rollout(Vector::Zero(4), *game.dynamics);
  return linearize_quadraticize(*game.dynamics, game.cost, zero);
}

GameInstance build_prop1_instance() {
  GameShape shape;
  shape.num_players = 2;
  shape.horizon = 3;
  shape.state_dims = {1, 0};  // single shared scalar state
  shape.control_dims = {1, 1};

  GameInstance game;
  Matrix A = Matrix::Identity(1, 1);
  Matrix B(1, 2);
  B << 1.0, 1.0;
  game.dynamics =
      std::make_shared<AffineDynamics>(shape, A, B, Vector::Zero(1));

  ParamCost& cost = game.cost;
  cost.shape = shape;
  cost.bases.resize(2);
  cost.fixed.resize(2);
  // g^1 = 1/2 (Q1 x^2 + u1^2), g^2 = 1/2 (Q2 x^2 + 2 u2^2); the state bases
  // also serve as the terminal costs.
  cost.bases[0] = {QuadraticTerm::coordinate(TermDomain::kState, 1, 0, 0.0,
                                             0.5)};
  cost.fixed[0] = {QuadraticTerm::coordinate(TermDomain::kControl, 2, 0, 0.0,
                                             0.5)};
  cost.bases[1] = {QuadraticTerm::coordinate(TermDomain::kState, 1, 0, 0.0,
                                             0.5)};
  cost.fixed[1] = {QuadraticTerm::coordinate(TermDomain::kControl, 2, 1, 0.0,
                                             1.0)};
  cost.theta = Vector::Ones(2);
  return game;
}

AffineLQGame build_prop1(double Q1, double Q2) {
  if (Q1 <= 0.0 || Q2 <= 0.0) {
    throw DomainError("build_prop1: weights must be positive");
  }
  GameInstance game = build_prop1_instance();
  game.cost.theta << Q1, Q2;
  const Trajectory zero =
      zero_control_rollout(Vector::Zero(1), *game.dynamics);
  return linearize_quadraticize(*game.dynamics, game.cost, zero);
}

std::vector<std::string> registered_models() {
  return {"dubins2",         "dubins3",          "lq_pursuit",
          "lq_pursuit_ghat", "lq_pursuit_ghhat", "prop1"};
}

bool is_registered_model(const std::string& name) {
  for (const auto& m : registered_models()) {
    if (m == name) return true;
  }
  return false;
}

ModelDescriptor build_model(const std::string& name, std::optional<double> dt,
                            std::optional<int> horizon,
                            std::optional<double> target_lane) {
  ModelDescriptor md;
  md.name = name;
  md.dt = dt.value_or(0.1);

  const double half_pi = M_PI / 2.0;
  if (name == "dubins2") {
    md.target_lane = target_lane.value_or(0.0);
    const int T = horizon.value_or(40);
    md.instance = build_dubins2(md.dt, T, md.target_lane);
    md.theta_star = (Vector(4) << 0.0, 8.0, 4.0, 4.0).finished();
    md.x1_star = (Vector(8) << 0.0, 0.5, half_pi, 1.0, 1.0, 0.0, half_pi, 1.0)
                     .finished();
    md.default_state =
        (Vector(8) << 0.0, 0.0, half_pi, 1.0, 0.0, 0.0, half_pi, 1.0)
            .finished();
    md.default_observed = {0, 1, 2, 4, 5, 6};
    md.position_coordinates = {0, 1, 4, 5};
  } else if (name == "dubins3") {
    md.target_lane = target_lane.value_or(0.2);
    const int T = horizon.value_or(30);
    md.instance = build_dubins3(md.dt, T, md.target_lane);
    md.theta_star = (Vector(5) << 0.0, 4.0, 0.0, 4.0, 2.0).finished();
    md.x1_star = (Vector(12) << 0.0, 1.0, half_pi, 2.0, 0.3, 0.0, half_pi,
                  2.0, 0.5, 0.5, half_pi, 2.0)
                     .finished();
    md.default_state = (Vector(12) << 0.0, 0.0, half_pi, 2.0, 0.0, 0.0,
                        half_pi, 2.0, 0.0, 0.0, half_pi, 2.0)
                           .finished();
    md.default_observed = {0, 1, 2, 4, 5, 6, 8, 9, 10};
    md.position_coordinates = {0, 1, 4, 5, 8, 9};
  } else if (name == "lq_pursuit" || name == "lq_pursuit_ghat" ||
             name == "lq_pursuit_ghhat") {
    const int T = horizon.value_or(10);
    PursuitVariant variant = PursuitVariant::kBase;
    if (name == "lq_pursuit_ghat") variant = PursuitVariant::kGhat;
    if (name == "lq_pursuit_ghhat") variant = PursuitVariant::kGhhat;
    md.instance = build_lq_pursuit_instance(variant, T);
    md.theta_star = Vector::Zero(0);
    md.x1_star = (Vector(4) << 1.0, 0.5, -1.0, 1.0).finished();
    md.default_state = Vector::Zero(4);
    md.default_observed = {0, 1, 2, 3};
    md.position_coordinates = {0, 1, 2, 3};
  } else if (name == "prop1") {
    md.instance = build_prop1_instance();
    md.theta_star = (Vector(2) << 1.0, 1.0).finished();
    md.x1_star = Vector::Ones(1);
    md.default_state = Vector::Zero(1);
    md.default_observed = {0};
    md.position_coordinates = {0};
  } else {
    throw DomainError("build_model: unknown model name: " + name);
  }
  return md;
}

}  // namespace dyngame
