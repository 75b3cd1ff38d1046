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

#pragma once

#include <vector>

#include "trajgan/types.hpp"

namespace trajgan {

// Threshold below which a speed or relative speed counts as zero.
inline constexpr double kVelocityEpsilon = 1e-6;  // m/s

// Hand-designed pairwise geometric features feeding attention pooling.
struct SocialFeatures {
  double distance = 0.0;  // meters, >= 0
  double bearing = 0.0;   // radians in [0, pi]
  double dca = 0.0;       // distance of closest approach, meters, >= 0

  Eigen::Vector3d vec() const { return {distance, bearing, dca}; }
};

double euclidean_distance(const Vec2& p_i, const Vec2& p_j);

// Angle between agent i's velocity and the line of sight to p_j, unsigned.
// Degenerate geometry (zero speed or coincident points) returns 0.
double bearing_angle(const AgentState& state_i, const Vec2& p_j);

// Smallest future distance under constant velocities, time clamped to t >= 0.
// Equal velocities (relative speed below kVelocityEpsilon) return the current
// distance.
double distance_of_closest_approach(const AgentState& state_i, const AgentState& state_j);

SocialFeatures social_features(const AgentState& state_i, const AgentState& state_j);

// Optional affine standardization of raw features, fit on training scenes.
struct FeatureStandardizer {
  Eigen::Vector3d mean{0.0, 0.0, 0.0};
  Eigen::Vector3d inv_std{1.0, 1.0, 1.0};
  bool enabled = false;

  Eigen::Vector3d apply(const SocialFeatures& f) const {
    if (!enabled) return f.vec();
    return (f.vec() - mean).cwiseProduct(inv_std);
  }

  // Fits mean/std over all ordered (target, neighbor) pairs at the last
  // observed frame. Scenes without neighbors contribute nothing; an empty
  // fit leaves the identity mapping.
  static FeatureStandardizer fit(const std::vector<Scene>& scenes);
};

}  // namespace trajgan
