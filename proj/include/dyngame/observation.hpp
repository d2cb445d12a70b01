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

#ifndef DYNGAME_OBSERVATION_HPP
#define DYNGAME_OBSERVATION_HPP

#include <cstdint>

#include "dyngame/types.hpp"

namespace dyngame {

// y_t = h(x_t) + e_t with e_t ~ N(0, sigma^2 I), drawn only at the model's
// observed times. Deterministic given the seed; the draw for coordinate j of
// the k-th observed time depends only on (seed, k, j).
ObservationSet apply_observation(const Trajectory& traj,
                                 const ObservationModel& model,
                                 std::uint64_t seed);

// The observed-time index set [1, T] \ {gap_begin..gap_end} (1-based,
// inclusive); the occlusion-window pattern of the experiments.
std::vector<int> occluded_times(int horizon, int gap_begin, int gap_end);

}  // namespace dyngame

#endif  // DYNGAME_OBSERVATION_HPP
