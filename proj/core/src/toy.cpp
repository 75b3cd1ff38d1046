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

#include "trajgan/toy.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "trajgan/dataset.hpp"
#include "trajgan/errors.hpp"
#include "trajgan/rng.hpp"

namespace trajgan {

namespace {

// Frames appended after (and including) the split-radius crossing. This is
// the prediction horizon of the scenes the dataset is built for.
constexpr int kToyPredFrames = 12;

Vec2 rotate(const Vec2& v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return Vec2(c * v.x() - s * v.y(), s * v.x() + c * v.y());
}

double branch_offset(const ToyConfig& config, int branch) {
  if (config.n_branches == 1) return 0.0;
  const double half = config.branch_half_angle * M_PI / 180.0;
  return -half + 2.0 * half * branch / (config.n_branches - 1);
}

// Noise-free trajectory of one mode: straight run at the center, one turn at
// the first split-radius crossing, then kToyPredFrames frames along the
// branch heading.
std::vector<Vec2> nominal_path(const ToyConfig& config, int condition, int branch) {
  const double theta = 2.0 * M_PI * condition / config.n_conditions;
  Vec2 p(config.circle_radius * std::cos(theta), config.circle_radius * std::sin(theta));
  Vec2 dir(-std::cos(theta), -std::sin(theta));

  std::vector<Vec2> path{p};
  bool turned = false;
  int post = 0;
  while (post < kToyPredFrames) {
    p += config.speed * dir;
    // The crossing is the first frame inside split_radius; a zero radius
    // degenerates to the frame where the path passes the center.
    if (!turned && (p.norm() <= config.split_radius || p.dot(dir) >= 0.0)) {
      turned = true;
      dir = rotate(dir, branch_offset(config, branch));
    }
    path.push_back(p);
    if (turned) ++post;
  }
  return path;
}

int presplit_frames(const ToyConfig& config) {
  // Identical for every condition; compute once from condition 0.
  const std::vector<Vec2> path = nominal_path(config, 0, 0);
  return static_cast<int>(path.size()) - kToyPredFrames;
}

}  // namespace

void ToyConfig::validate() const {
  if (n_conditions < 1) throw ValidationError("ToyConfig: n_conditions must be >= 1");
  if (n_branches < 1) throw ValidationError("ToyConfig: n_branches must be >= 1");
  if (samples_per_branch < 1) throw ValidationError("ToyConfig: samples_per_branch must be >= 1");
  if (noise_sigma < 0.0) throw ValidationError("ToyConfig: noise_sigma must be >= 0");
  if (split_radius < 0.0 || circle_radius <= split_radius)
    throw ValidationError("ToyConfig: need circle_radius > split_radius >= 0");
  if (speed <= 0.0) throw ValidationError("ToyConfig: speed must be positive");
}

ToyDataset generate_toy_dataset(const ToyConfig& config) {
  config.validate();

  RngStreams streams(config.seed);
  std::mt19937_64 rng = streams.stream("toy-noise");
  GaussianSampler gauss;

  ToyDataset out;
  out.table.frame_rate = 2.5;
  out.table.source_name = "toy";

  long agent_id = 0;
  for (int k = 0; k < config.n_conditions; ++k) {
    for (int b = 0; b < config.n_branches; ++b) {
      const std::vector<Vec2> nominal = nominal_path(config, k, b);
      for (int s = 0; s < config.samples_per_branch; ++s) {
        // Disjoint frame ranges: toy agents never share a frame, so the
        // dataset stays interaction-free under any windowing.
        const long frame_base = agent_id * static_cast<long>(nominal.size());
        for (size_t t = 0; t < nominal.size(); ++t) {
          const double nx = nominal[t].x() + config.noise_sigma * gauss(rng);
          const double ny = nominal[t].y() + config.noise_sigma * gauss(rng);
          out.table.rows.push_back({frame_base + static_cast<long>(t), agent_id, nx, ny});
        }
        out.labels.push_back({agent_id, k, b});
        ++agent_id;
      }
    }
  }
  return out;
}

std::vector<Scene> build_toy_scenes(const ToyDataset& dataset, const ToyConfig& config,
                                    int obs_len, int pred_len, double frame_rate) {
  config.validate();
  const int n_pre = presplit_frames(config);
  if (n_pre < obs_len)
    throw ValidationError("toy geometry yields only " + std::to_string(n_pre) +
                          " pre-split frames; need obs_len = " + std::to_string(obs_len));
  if (pred_len > kToyPredFrames)
    throw ValidationError("toy trajectories carry " + std::to_string(kToyPredFrames) +
                          " post-split frames; need pred_len = " + std::to_string(pred_len));

  std::map<long, ModeLabel> labels;
  for (const ModeLabel& l : dataset.labels) labels[l.agent_id] = l;

  const double dt = 1.0 / frame_rate;
  const int window = obs_len + pred_len;
  std::vector<Scene> scenes;

  // Rows arrive sorted by (agent_id, frame_id); walk one agent at a time.
  size_t i = 0;
  const auto& rows = dataset.table.rows;
  while (i < rows.size()) {
    const long agent = rows[i].agent_id;
    const long first_frame = rows[i].frame_id;
    std::vector<Vec2> positions;
    while (i < rows.size() && rows[i].agent_id == agent) {
      positions.push_back({rows[i].x, rows[i].y});
      ++i;
    }
    if (static_cast<int>(positions.size()) < n_pre + pred_len)
      throw ValidationError("toy agent " + std::to_string(agent) + " has too few frames");

    const int begin = n_pre - obs_len;  // observation ends right before the crossing
    std::vector<Vec2> pos(positions.begin() + begin, positions.begin() + begin + window);
    const std::vector<Vec2> vel = compute_velocities(pos, dt);

    Scene scene;
    scene.obs_len = obs_len;
    scene.pred_len = pred_len;
    scene.dt = dt;
    scene.source = dataset.table.source_name;
    scene.target_agent_id = agent;
    scene.start_frame = first_frame + begin;
    scene.target_index = 0;
    scene.states.resize(1);
    scene.future.resize(1);
    for (int t = 0; t < obs_len; ++t) scene.states[0].push_back({pos[t], vel[t]});
    for (int t = obs_len; t < window; ++t) scene.future[0].push_back({pos[t], vel[t]});

    const auto it = labels.find(agent);
    if (it != labels.end()) {
      scene.toy_condition = it->second.condition;
      scene.toy_branch = it->second.branch;
    }
    scenes.push_back(std::move(scene));
  }
  return scenes;
}

std::vector<EndpointCluster> endpoint_clusters(const ToyDataset& dataset,
                                               const ToyConfig& config) {
  std::map<long, Vec2> endpoint;  // last row per agent (rows sorted by frame)
  for (const TrajectoryRow& r : dataset.table.rows) endpoint[r.agent_id] = Vec2(r.x, r.y);

  std::map<std::pair<int, int>, std::vector<Vec2>> groups;
  for (const ModeLabel& l : dataset.labels) {
    const auto it = endpoint.find(l.agent_id);
    if (it == endpoint.end())
      throw ValidationError("mode label for unknown agent " + std::to_string(l.agent_id));
    groups[{l.condition, l.branch}].push_back(it->second);
  }

  std::vector<EndpointCluster> clusters;
  for (const auto& [key, points] : groups) {
    EndpointCluster c;
    c.condition = key.first;
    c.branch = key.second;
    c.count = static_cast<long>(points.size());
    Vec2 sum(0.0, 0.0);
    for (const Vec2& p : points) sum += p;
    c.center = sum / static_cast<double>(points.size());
    double sq = 0.0;
    for (const Vec2& p : points) sq += (p - c.center).squaredNorm();
    c.stddev = std::sqrt(sq / static_cast<double>(points.size()));
    clusters.push_back(c);
  }
  return clusters;
}

Vec2 nominal_endpoint(const ToyConfig& config, int condition, int branch, int pred_len) {
  const std::vector<Vec2> path = nominal_path(config, condition, branch);
  const int n_pre = static_cast<int>(path.size()) - kToyPredFrames;
  if (pred_len > kToyPredFrames || pred_len < 1)
    throw ValidationError("nominal_endpoint: pred_len out of range");
  return path[n_pre + pred_len - 1];
}

void write_mode_labels(const std::filesystem::path& path, const std::vector<ModeLabel>& labels) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write mode labels: " + path.string());
  for (const ModeLabel& l : labels)
    out << l.agent_id << ' ' << l.condition << ' ' << l.branch << '\n';
}

std::vector<ModeLabel> read_mode_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read mode labels: " + path.string());
  std::vector<ModeLabel> labels;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ss(line);
    ModeLabel l;
    if (!(ss >> l.agent_id)) continue;
    if (!(ss >> l.condition >> l.branch))
      throw ParseError("expected 'agent_id condition branch'", line_no);
    labels.push_back(l);
  }
  return labels;
}

}  // namespace trajgan
