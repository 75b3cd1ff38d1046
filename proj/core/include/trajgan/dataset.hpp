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

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "trajgan/types.hpp"

namespace trajgan {

// Leave-one-out split over the five standard recordings.
struct SplitSpec {
  std::vector<std::string> dataset_names{"ETH", "Hotel", "Univ", "ZARA01", "ZARA02"};
  int test_index = 0;
};

// Reads canonical "frame_id agent_id x y" text. '#' starts a comment. Rows
// come back sorted by (agent_id, frame_id); duplicate (frame, agent) pairs
// are a validation error.
TrajectoryTable load_trajectory_file(const std::filesystem::path& path, double frame_rate = 2.5);

void write_trajectory_file(const std::filesystem::path& path, const TrajectoryTable& table);

// Finite-difference velocities; v_0 copies v_1. Needs at least 2 positions.
std::vector<Vec2> compute_velocities(std::span<const Vec2> positions, double dt);

// Smallest positive frame delta in the table; windowing advances in these
// units and an agent is split into tracklets wherever its delta differs.
long table_frame_step(const TrajectoryTable& table);

// Exhaustive windowing: one scene per (window start, target agent) pair
// where the target spans obs_len + pred_len consecutive frames. Neighbors
// fully present over the observation window are kept; partial ones dropped.
std::vector<Scene> build_scenes(const TrajectoryTable& table, int obs_len = 8, int pred_len = 12,
                                int stride = 1);

std::pair<std::vector<Scene>, std::vector<Scene>> split_leave_one_out(
    const SplitSpec& spec, const std::map<std::string, TrajectoryTable>& tables, int obs_len = 8,
    int pred_len = 12, int stride = 1);

// Translates every position so the target's last observed position is the
// origin. Velocities are untouched. The transform inverts the mapping
// exactly.
std::pair<Scene, SceneTransform> normalize_scene(const Scene& scene);

// Rotates every position and velocity about the origin (training-time
// augmentation; off by default).
Scene rotate_scene(const Scene& scene, double angle);

}  // namespace trajgan
