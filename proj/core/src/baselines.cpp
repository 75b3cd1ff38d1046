// Copyright 2026 The trajgan Authors
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

#include "trajgan/baselines.hpp"

#include <algorithm>

#include "trajgan/errors.hpp"

namespace trajgan {

PredictionSample linear_predict(const Scene& scene, const LinearPredictorConfig& config) {
  const auto& states = scene.target_states();
  if (states.empty()) throw ValidationError("linear_predict: empty observation");
  if (config.k < 1) throw ValidationError("linear_predict: k must be >= 1");

  Vec2 velocity;
  if (config.velocity_estimate == VelocityEstimate::last_frame) {
    velocity = states.back().velocity;
  } else {
    const int k = std::min<int>(config.k, static_cast<int>(states.size()));
    Vec2 sum(0.0, 0.0);
    for (int i = 0; i < k; ++i) sum += states[states.size() - 1 - i].velocity;
    velocity = sum / static_cast<double>(k);
  }

  PredictionSample out;
  out.parameter_version = "linear";
  Vec2 position = states.back().position;
  for (int t = 0; t < scene.pred_len; ++t) {
    position += scene.dt * velocity;
    out.positions.push_back(position);
    out.velocities.push_back(velocity);
  }
  return out;
}

}  // namespace trajgan
