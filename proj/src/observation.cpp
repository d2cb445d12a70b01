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

#include "dyngame/observation.hpp"

#include "dyngame/rng.hpp"

namespace dyngame {

ObservationSet apply_observation(const Trajectory& traj,
                                 const ObservationModel& model,
                                 std::uint64_t seed) {
  const int n = traj.states.empty() ? 0 : static_cast<int>(traj.states[0].size());
  model.validate(n, traj.horizon());

  const int ell = model.obs_dim();
  ObservationSet out;
  out.model = model;
  out.measurements.reserve(model.times.size());
  for (size_t k = 0; k < model.times.size(); ++k) {
    Vector y = model.observe(traj.states[model.times[k] - 1]);
    if (model.sigma > 0.0) {
      for (int j = 0; j < ell; ++j) {
        y[j] += model.sigma *
                rng::normal(seed, static_cast<std::uint64_t>(k) * ell + j);
      }
    }
    out.measurements.push_back(std::move(y));
  }
  return out;
}

std::vector<int> occluded_times(int horizon, int gap_begin, int gap_end) {
  std::vector<int> times;
  times.reserve(horizon);
  for (int t = 1; t <= horizon; ++t) {
    if (t >= gap_begin && t <= gap_end) continue;
    times.push_back(t);
  }
  return times;
}

}  // namespace dyngame
