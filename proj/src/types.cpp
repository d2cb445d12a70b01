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

#include "dyngame/types.hpp"

#include <numeric>

namespace dyngame {

int GameShape::state_dim() const {
  return std::accumulate(state_dims.begin(), state_dims.end(), 0);
}

int GameShape::control_dim() const {
  return std::accumulate(control_dims.begin(), control_dims.end(), 0);
}

int GameShape::state_offset(int player) const {
  return std::accumulate(state_dims.begin(), state_dims.begin() + player, 0);
}

int GameShape::control_offset(int player) const {
  return std::accumulate(control_dims.begin(), control_dims.begin() + player,
                         0);
}

void GameShape::validate() const {
  if (num_players < 1) throw ShapeError("GameShape: need at least one player");
  if (horizon < 2) throw ShapeError("GameShape: horizon must be >= 2 states");
  if (static_cast<int>(state_dims.size()) != num_players ||
      static_cast<int>(control_dims.size()) != num_players) {
    throw ShapeError("GameShape: per-player dimension lists sized wrongly");
  }
  for (int ni : state_dims) {
    if (ni < 0) throw ShapeError("GameShape: negative state dimension");
  }
  for (int mi : control_dims) {
    if (mi < 1) throw ShapeError("GameShape: control dimensions must be >= 1");
  }
  if (state_dim() < 1) throw ShapeError("GameShape: joint state is empty");
}

void Trajectory::validate(const GameShape& shape) const {
  if (static_cast<int>(states.size()) != shape.horizon) {
    throw ShapeError("Trajectory: expected exactly T states");
  }
  if (static_cast<int>(controls.size()) != shape.horizon - 1) {
    throw ShapeError("Trajectory: expected exactly T-1 controls");
  }
  for (const auto& x : states) {
    if (x.size() != shape.state_dim()) {
      throw ShapeError("Trajectory: state dimension mismatch");
    }
  }
  for (const auto& u : controls) {
    if (u.size() != shape.control_dim()) {
      throw ShapeError("Trajectory: control dimension mismatch");
    }
  }
}

Vector FeedbackStrategy::control(int stage_index, const Vector& x) const {
  const auto& P = gains.at(stage_index);
  const auto& alpha = feedforwards.at(stage_index);
  int m = 0;
  for (const auto& a : alpha) m += static_cast<int>(a.size());
  Vector u(m);
  int offset = 0;
  for (size_t i = 0; i < P.size(); ++i) {
    u.segment(offset, alpha[i].size()) = -P[i] * x - alpha[i];
    offset += static_cast<int>(alpha[i].size());
  }
  return u;
}

void FeedbackStrategy::validate(const GameShape& shape) const {
  if (num_stages() != shape.horizon - 1 ||
      static_cast<int>(feedforwards.size()) != shape.horizon - 1) {
    throw ShapeError("FeedbackStrategy: expected T-1 stages");
  }
  for (int t = 0; t < num_stages(); ++t) {
    if (static_cast<int>(gains[t].size()) != shape.num_players ||
        static_cast<int>(feedforwards[t].size()) != shape.num_players) {
      throw ShapeError("FeedbackStrategy: player count mismatch");
    }
    for (int i = 0; i < shape.num_players; ++i) {
      if (gains[t][i].rows() != shape.control_dims[i] ||
          gains[t][i].cols() != shape.state_dim() ||
          feedforwards[t][i].size() != shape.control_dims[i]) {
        throw ShapeError("FeedbackStrategy: gain block dimension mismatch");
      }
    }
  }
}

Vector ObservationModel::observe(const Vector& x) const {
  Vector y(selection.size());
  for (size_t k = 0; k < selection.size(); ++k) y[k] = x[selection[k]];
  return y;
}

void ObservationModel::validate(int state_dim, int horizon) const {
  if (selection.empty()) throw ShapeError("ObservationModel: empty selection");
  for (size_t k = 0; k < selection.size(); ++k) {
    if (selection[k] < 0 || selection[k] >= state_dim) {
      throw ShapeError("ObservationModel: selection index out of range");
    }
    if (k > 0 && selection[k] <= selection[k - 1]) {
      throw ShapeError("ObservationModel: selection not strictly increasing");
    }
  }
  if (times.empty()) throw ShapeError("ObservationModel: empty time set");
  for (size_t k = 0; k < times.size(); ++k) {
    if (times[k] < 1 || times[k] > horizon) {
      throw ShapeError("ObservationModel: observed time outside [1, T]");
    }
    if (k > 0 && times[k] <= times[k - 1]) {
      throw ShapeError("ObservationModel: times not strictly increasing");
    }
  }
  if (sigma < 0.0) throw DomainError("ObservationModel: negative sigma");
}

}  // namespace dyngame
