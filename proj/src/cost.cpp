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

#include "dyngame/cost.hpp"

#include <cmath>
#include <limits>

namespace dyngame {

QuadraticTerm::QuadraticTerm(TermDomain domain, Matrix C, Vector d,
                             double scale)
    : domain_(domain), C_(std::move(C)), d_(std::move(d)), scale_(scale) {
  if (C_.rows() != d_.size()) {
    throw ShapeError("QuadraticTerm: C rows must match d");
  }
}

double QuadraticTerm::value(const Vector& z) const {
  return scale_ * (C_ * z - d_).squaredNorm();
}

TermQuadratic QuadraticTerm::quadratic(const Vector& z) const {
  TermQuadratic q;
  const Vector residual = C_ * z - d_;
  q.value = scale_ * residual.squaredNorm();
  q.grad = 2.0 * scale_ * C_.transpose() * residual;
  q.hess = 2.0 * scale_ * C_.transpose() * C_;
  return q;
}

CostTermPtr QuadraticTerm::coordinate(TermDomain domain, int dim, int index,
                                      double target, double scale) {
  Matrix C = Matrix::Zero(1, dim);
  C(0, index) = 1.0;
  return std::make_shared<QuadraticTerm>(domain, std::move(C),
                                         Vector::Constant(1, target), scale);
}

CostTermPtr QuadraticTerm::squared_norm(TermDomain domain, int dim,
                                        const std::vector<int>& indices,
                                        const Vector& targets, double scale) {
  Matrix C = Matrix::Zero(indices.size(), dim);
  for (size_t k = 0; k < indices.size(); ++k) C(k, indices[k]) = 1.0;
  return std::make_shared<QuadraticTerm>(domain, std::move(C), targets, scale);
}

CostTermPtr QuadraticTerm::combination(TermDomain domain, int dim,
                                       const std::vector<int>& indices,
                                       const std::vector<double>& weights,
                                       double target, double scale) {
  Matrix C = Matrix::Zero(1, dim);
  for (size_t k = 0; k < indices.size(); ++k) C(0, indices[k]) = weights[k];
  return std::make_shared<QuadraticTerm>(domain, std::move(C),
                                         Vector::Constant(1, target), scale);
}

LogDistanceTerm::LogDistanceTerm(int dim, int ix1, int iy1, int ix2, int iy2)
    : dim_(dim), ix1_(ix1), iy1_(iy1), ix2_(ix2), iy2_(iy2) {}

double LogDistanceTerm::value(const Vector& z) const {
  const double dx = z[ix1_] - z[ix2_];
  const double dy = z[iy1_] - z[iy2_];
  const double s = dx * dx + dy * dy;
  if (s <= 0.0) return std::numeric_limits<double>::infinity();
  return -0.5 * std::log(s);
}

TermQuadratic LogDistanceTerm::quadratic(const Vector& z) const {
  const double dx = z[ix1_] - z[ix2_];
  const double dy = z[iy1_] - z[iy2_];
  const double s = dx * dx + dy * dy;
  if (s <= 0.0) {
    throw EvaluationError("LogDistanceTerm: coincident positions", 0);
  }
  TermQuadratic q;
  q.value = -0.5 * std::log(s);

  // Derivatives with respect to (dx, dy), then chained through the +/-1
  // selection into the full state.
  const double gx = -dx / s;
  const double gy = -dy / s;
  const double s2 = s * s;
  Eigen::Matrix2d H2;
  H2(0, 0) = -(s - 2.0 * dx * dx) / s2;
  H2(1, 1) = -(s - 2.0 * dy * dy) / s2;
  H2(0, 1) = H2(1, 0) = 2.0 * dx * dy / s2;

  Matrix J = Matrix::Zero(2, dim_);
  J(0, ix1_) = 1.0;
  J(0, ix2_) = -1.0;
  J(1, iy1_) = 1.0;
  J(1, iy2_) = -1.0;

  q.grad = J.transpose() * Eigen::Vector2d(gx, gy);
  q.hess = J.transpose() * H2 * J;
  return q;
}

int ParamCost::param_dim() const {
  int d = 0;
  for (const auto& player_bases : bases) d += static_cast<int>(player_bases.size());
  return d;
}

int ParamCost::param_offset(int player) const {
  int offset = 0;
  for (int i = 0; i < player; ++i) offset += static_cast<int>(bases[i].size());
  return offset;
}

ParamCost ParamCost::with_theta(Vector new_theta) const {
  if (new_theta.size() != param_dim()) {
    throw ShapeError("ParamCost: theta dimension mismatch");
  }
  ParamCost copy = *this;
  copy.theta = std::move(new_theta);
  return copy;
}

void ParamCost::validate() const {
  shape.validate();
  if (static_cast<int>(bases.size()) != shape.num_players ||
      static_cast<int>(fixed.size()) != shape.num_players) {
    throw ShapeError("ParamCost: per-player term lists sized wrongly");
  }
  if (theta.size() != param_dim()) {
    throw ShapeError("ParamCost: theta dimension mismatch");
  }
  auto check_term = [&](const CostTermPtr& term) {
    const int expected = term->domain() == TermDomain::kState
                             ? shape.state_dim()
                             : shape.control_dim();
    if (term->domain_dim() != expected) {
      throw ShapeError("ParamCost: term domain dimension mismatch");
    }
  };
  for (int i = 0; i < shape.num_players; ++i) {
    for (const auto& term : bases[i]) check_term(term);
    for (const auto& term : fixed[i]) check_term(term);
  }
}

double ParamCost::stage_cost(int t, int player, const Vector& x,
                             const Vector& u) const {
  const bool terminal = (t == shape.horizon);
  const int offset = param_offset(player);
  double total = 0.0;
  for (size_t j = 0; j < bases[player].size(); ++j) {
    const CostTerm& term = *bases[player][j];
    if (terminal && !term.state_only()) continue;
    const Vector& z = term.domain() == TermDomain::kState ? x : u;
    total += theta[offset + j] * term.value(z);
  }
  for (const auto& term : fixed[player]) {
    if (terminal && !term->state_only()) continue;
    const Vector& z = term->domain() == TermDomain::kState ? x : u;
    total += term->value(z);
  }
  return total;
}

double total_cost(const Trajectory& traj, const ParamCost& cost, int player) {
  cost.validate();
  traj.validate(cost.shape);
  if (player < 0 || player >= cost.shape.num_players) {
    throw ShapeError("total_cost: player index out of range");
  }
  double total = 0.0;
  for (int t = 1; t < cost.shape.horizon; ++t) {
    total += cost.stage_cost(t, player, traj.states[t - 1],
                             traj.controls[t - 1]);
  }
  const Vector zero_u = Vector::Zero(cost.shape.control_dim());
  total += cost.stage_cost(cost.shape.horizon, player,
                           traj.states[cost.shape.horizon - 1], zero_u);
  return total;
}

bool ParamCost::all_quadratic() const {
  for (const auto& player_bases : bases) {
    for (const auto& term : player_bases) {
      if (!term->is_quadratic()) return false;
    }
  }
  for (const auto& player_fixed : fixed) {
    for (const auto& term : player_fixed) {
      if (!term->is_quadratic()) return false;
    }
  }
  return true;
}

}  // namespace dyngame
