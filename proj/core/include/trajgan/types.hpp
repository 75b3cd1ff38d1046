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

#include <Eigen/Core>
#include <string>
#include <vector>

namespace trajgan {

using Vec2 = Eigen::Vector2d;

// One agent at one timestep: position and velocity in world meters.
struct AgentState {
  Vec2 position{0.0, 0.0};
  Vec2 velocity{0.0, 0.0};
};

struct TrajectoryRow {
  long frame_id = 0;
  long agent_id = 0;
  double x = 0.0;
  double y = 0.0;
};

// Canonical trajectory annotations: "frame_id agent_id x y", world meters.
// Rows are kept sorted by (agent_id, frame_id).
struct TrajectoryTable {
  std::vector<TrajectoryRow> rows;
  double frame_rate = 2.5;  // Hz
  std::string source_name;

  double dt() const { return 1.0 / frame_rate; }
};

// A fixed-length multi-agent observation window plus the target's future.
// states[i] covers obs_len frames for every agent i; future[i] covers
// pred_len frames when known for that agent and is empty otherwise (the
// target's future is always present in training/eval scenes).
struct Scene {
  int target_index = 0;
  std::vector<std::vector<AgentState>> states;
  std::vector<std::vector<AgentState>> future;
  int obs_len = 8;
  int pred_len = 12;
  double dt = 0.4;

  // Provenance, used for reporting and per-condition evaluation.
  std::string source;
  long target_agent_id = -1;
  long start_frame = 0;
  int toy_condition = -1;
  int toy_branch = -1;

  int num_agents() const { return static_cast<int>(states.size()); }
  const std::vector<AgentState>& target_states() const { return states[target_index]; }
  const std::vector<AgentState>& target_future() const { return future[target_index]; }
  bool has_target_future() const {
    return target_index < static_cast<int>(future.size()) &&
           !future[target_index].empty();
  }
};

// One generated future trajectory plus the inputs that produced it.
struct PredictionSample {
  std::vector<Vec2> positions;   // [pred_len], world meters
  std::vector<Vec2> velocities;  // per-frame displacement / dt
  Eigen::VectorXd z;             // noise input (empty for deterministic predictors)
  Eigen::VectorXd c;             // latent code input
  std::string parameter_version;
};

// Translation (and optional rotation) applied by scene normalization.
// apply() maps world coordinates into the normalized frame; invert() maps
// back exactly (one subtract/add pair).
struct SceneTransform {
  Vec2 translation{0.0, 0.0};  // subtracted from every position
  double rotation = 0.0;       // radians, applied after translation

  Vec2 apply_position(const Vec2& p) const {
    return rotate(p - translation, rotation);
  }
  Vec2 invert_position(const Vec2& p) const {
    return rotate(p, -rotation) + translation;
  }
  Vec2 apply_velocity(const Vec2& v) const { return rotate(v, rotation); }
  Vec2 invert_velocity(const Vec2& v) const { return rotate(v, -rotation); }

 private:
  static Vec2 rotate(const Vec2& p, double angle) {
    if (angle == 0.0) return p;
    const double c = std::cos(angle), s = std::sin(angle);
    return Vec2(c * p.x() - s * p.y(), s * p.x() + c * p.y());
  }
};

}  // namespace trajgan
