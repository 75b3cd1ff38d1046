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

#include "trajgan/interaction.hpp"

#include <algorithm>
#include <cmath>

namespace trajgan {

double euclidean_distance(const Vec2& p_i, const Vec2& p_j) {
  return (p_j - p_i).norm();
}

double bearing_angle(const AgentState& state_i, const Vec2& p_j) {
  const Vec2 los = p_j - state_i.position;
  const double v_norm = state_i.velocity.norm();
  const double los_norm = los.norm();
  if (v_norm < kVelocityEpsilon || los_norm < kVelocityEpsilon) return 0.0;
  double cosine = state_i.velocity.dot(los) / (v_norm * los_norm);
  cosine = std::clamp(cosine, -1.0, 1.0);
  return std::acos(cosine);
}

double distance_of_closest_approach(const AgentState& state_i, const AgentState& state_j) {
  const Vec2 dp = state_j.position - state_i.position;
  const Vec2 dv = state_j.velocity - state_i.velocity;
  const double dv_sq = dv.squaredNorm();
  if (std::sqrt(dv_sq) < kVelocityEpsilon) return dp.norm();
  const double t_star = std::max(0.0, -dp.dot(dv) / dv_sq);
  return (dp + t_star * dv).norm();
}

SocialFeatures social_features(const AgentState& state_i, const AgentState& state_j) {
  SocialFeatures f;
  f.distance = euclidean_distance(state_i.position, state_j.position);
  f.bearing = bearing_angle(state_i, state_j.position);
  f.dca = distance_of_closest_approach(state_i, state_j);
  return f;
}

FeatureStandardizer FeatureStandardizer::fit(const std::vector<Scene>& scenes) {
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  Eigen::Vector3d sum_sq = Eigen::Vector3d::Zero();
  long count = 0;
  for (const Scene& scene : scenes) {
    const int last = scene.obs_len - 1;
    const AgentState& target = scene.states[scene.target_index][last];
    for (int j = 0; j < scene.num_agents(); ++j) {
      if (j == scene.target_index) continue;
      const Eigen::Vector3d f = social_features(target, scene.states[j][last]).vec();
      sum += f;
      sum_sq += f.cwiseProduct(f);
      ++count;
    }
  }
  FeatureStandardizer out;
  if (count == 0) return out;
  out.enabled = true;
  out.mean = sum / static_cast<double>(count);
  const Eigen::Vector3d var =
      (sum_sq / static_cast<double>(count) - out.mean.cwiseProduct(out.mean)).cwiseMax(0.0);
  for (int k = 0; k < 3; ++k) {
    const double sd = std::sqrt(var[k]);
    out.inv_std[k] = sd > 1e-12 ? 1.0 / sd : 1.0;
  }
  return out;
}

}  // namespace trajgan
