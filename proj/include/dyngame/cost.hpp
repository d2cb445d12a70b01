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

#ifndef DYNGAME_COST_HPP
#define DYNGAME_COST_HPP

#include <memory>

#include "dyngame/types.hpp"

namespace dyngame {

// Whether a term reads the state or the control vector. State terms apply at
// every stage including the terminal one; control terms apply at t <= T-1
// only (there is no u_T).
enum class TermDomain { kState, kControl };

// Value, gradient and Hessian of a scalar term at a point. Terms are
// separable in x and u, so no cross block is carried.
struct TermQuadratic {
  double value = 0.0;
  Vector grad;  // over the term's domain vector
  Matrix hess;
};

// One scalar summand of a stage cost.
class CostTerm {
 public:
  virtual ~CostTerm() = default;

  virtual TermDomain domain() const = 0;
  virtual int domain_dim() const = 0;
  virtual double value(const Vector& z) const = 0;
  virtual TermQuadratic quadratic(const Vector& z) const = 0;

  // True when value() is exactly quadratic, making quadratic() global.
  virtual bool is_quadratic() const { return false; }

  bool state_only() const { return domain() == TermDomain::kState; }
};

using CostTermPtr = std::shared_ptr<const CostTerm>;

// scale * ||C z - d||^2 over the chosen domain vector. Covers every weighted
// squared norm in the vehicle and pursuit models.
class QuadraticTerm final : public CostTerm {
 public:
  QuadraticTerm(TermDomain domain, Matrix C, Vector d, double scale = 1.0);

  TermDomain domain() const override { return domain_; }
  int domain_dim() const override { return static_cast<int>(C_.cols()); }
  double value(const Vector& z) const override;
  TermQuadratic quadratic(const Vector& z) const override;
  bool is_quadratic() const override { return true; }

  // scale * (z[index] - target)^2
  static CostTermPtr coordinate(TermDomain domain, int dim, int index,
                                double target, double scale = 1.0);
  // scale * sum_k (z[indices[k]] - targets[k])^2
  static CostTermPtr squared_norm(TermDomain domain, int dim,
                                  const std::vector<int>& indices,
                                  const Vector& targets, double scale = 1.0);
  // scale * (sum_k weights[k] * z[indices[k]] - target)^2
  static CostTermPtr combination(TermDomain domain, int dim,
                                 const std::vector<int>& indices,
                                 const std::vector<double>& weights,
                                 double target, double scale = 1.0);

 private:
  TermDomain domain_;
  Matrix C_;
  Vector d_;
  double scale_;
};

// -1/2 * log((x[ix1]-x[ix2])^2 + (x[iy1]-x[iy2])^2): the collision-repulsion
// term of the three-vehicle game. Nonconvex; value is +inf at coincident
// positions and quadratic() throws EvaluationError there.
class LogDistanceTerm final : public CostTerm {
 public:
  LogDistanceTerm(int dim, int ix1, int iy1, int ix2, int iy2);

  TermDomain domain() const override { return TermDomain::kState; }
  int domain_dim() const override { return dim_; }
  double value(const Vector& z) const override;
  TermQuadratic quadratic(const Vector& z) const override;

 private:
  int dim_, ix1_, iy1_, ix2_, iy2_;
};

// Per-player linearly parameterized cost: player i's stage cost is
//   g_t^i(x, u) = sum_j theta_j^i * bases[i][j](x, u) + sum_k fixed[i][k](x, u)
// with control-domain terms dropped at the terminal stage.
struct ParamCost {
  GameShape shape;
  std::vector<std::vector<CostTermPtr>> bases;  // [N][d_i]
  std::vector<std::vector<CostTermPtr>> fixed;  // [N][...]
  Vector theta;                                 // size d = sum d_i

  int param_dim() const;
  int param_offset(int player) const;   // start of theta^i within theta
  ParamCost with_theta(Vector new_theta) const;
  void validate() const;

  // g_t^i at 1-based stage t; t == T evaluates the terminal cost (state
  // terms only, u ignored).
  double stage_cost(int t, int player, const Vector& x, const Vector& u) const;

  // True when every term is exactly quadratic.
  bool all_quadratic() const;
};

// J^i = sum_{t=1}^{T-1} g_t^i(x_t, u_t) + g_T^i(x_T).
double total_cost(const Trajectory& traj, const ParamCost& cost, int player);

}  // namespace dyngame

#endif  // DYNGAME_COST_HPP
