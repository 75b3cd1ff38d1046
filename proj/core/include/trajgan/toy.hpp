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
#include <vector>

#include "trajgan/metrics.hpp"
#include "trajgan/types.hpp"

namespace trajgan {

// Synthetic multi-modal benchmark: trajectories start on a circle, head for
// the center, and fan out onto one of n_branches headings once they cross
// split_radius. Conditions are the starting points; branches are the modes.
struct ToyConfig {
  int n_conditions = 6;
  int n_branches = 3;
  int samples_per_branch = 128;
  double circle_radius = 8.0;       // meters
  double branch_half_angle = 30.0;  // degrees
  double split_radius = 2.0;        // meters
  double noise_sigma = 0.05;        // meters
  double speed = 0.5;               // meters per frame
  uint64_t seed = 1;

  void validate() const;
};

struct ModeLabel {
  long agent_id = 0;
  int condition = 0;
  int branch = 0;
};

struct ToyDataset {
  TrajectoryTable table;
  std::vector<ModeLabel> labels;
};

// Deterministic in the config (same config, bit-identical output).
ToyDataset generate_toy_dataset(const ToyConfig& config);

// One scene per trajectory, with the observation window ending right before
// the split-radius crossing and the prediction covering the branch segment.
// Scenes carry (condition, branch) provenance; agents are independent (no
// neighbors).
std::vector<Scene> build_toy_scenes(const ToyDataset& dataset, const ToyConfig& config,
                                    int obs_len = 8, int pred_len = 12, double frame_rate = 2.5);

// Ground-truth endpoint cluster statistics of the real dataset, one per
// (condition, branch) mode.
std::vector<EndpointCluster> endpoint_clusters(const ToyDataset& dataset, const ToyConfig& config);

// Noise-free endpoint of one (condition, branch) mode.
Vec2 nominal_endpoint(const ToyConfig& config, int condition, int branch, int pred_len = 12);

void write_mode_labels(const std::filesystem::path& path, const std::vector<ModeLabel>& labels);
std::vector<ModeLabel> read_mode_labels(const std::filesystem::path& path);

}  // namespace trajgan
