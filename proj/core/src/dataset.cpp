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

#include "trajgan/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "trajgan/errors.hpp"

namespace trajgan {

TrajectoryTable load_trajectory_file(const std::filesystem::path& path, double frame_rate) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open trajectory file: " + path.string());
  if (frame_rate <= 0.0) throw ValidationError("frame_rate must be positive");

  TrajectoryTable table;
  table.frame_rate = frame_rate;
  table.source_name = path.stem().string();

  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ss(line);
    double frame, agent, x, y;
    if (!(ss >> frame)) continue;  // blank or comment-only line
    if (!(ss >> agent >> x >> y))
      throw ParseError("expected 4 numbers (frame_id agent_id x y)", line_no);
    double extra;
    if (ss >> extra) throw ParseError("trailing fields after (frame_id agent_id x y)", line_no);
    if (frame != std::floor(frame) || agent != std::floor(agent))
      throw ParseError("frame_id and agent_id must be integers", line_no);
    if (!std::isfinite(x) || !std::isfinite(y))
      throw ParseError("non-finite coordinates", line_no);
    table.rows.push_back({static_cast<long>(frame), static_cast<long>(agent), x, y});
  }

  std::sort(table.rows.begin(), table.rows.end(), [](const auto& a, const auto& b) {
    return std::tie(a.agent_id, a.frame_id) < std::tie(b.agent_id, b.frame_id);
  });
  for (size_t i = 1; i < table.rows.size(); ++i) {
    if (table.rows[i].agent_id == table.rows[i - 1].agent_id &&
        table.rows[i].frame_id == table.rows[i - 1].frame_id)
      throw ValidationError("duplicate (frame_id, agent_id) pair: frame " +
                            std::to_string(table.rows[i].frame_id) + ", agent " +
                            std::to_string(table.rows[i].agent_id));
  }
  return table;
}

void write_trajectory_file(const std::filesystem::path& path, const TrajectoryTable& table) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write trajectory file: " + path.string());
  out.precision(17);
  for (const TrajectoryRow& r : table.rows)
    out << r.frame_id << ' ' << r.agent_id << ' ' << r.x << ' ' << r.y << '\n';
}

std::vector<Vec2> compute_velocities(std::span<const Vec2> positions, double dt) {
  if (positions.size() < 2)
    throw ValidationError("compute_velocities: need at least 2 positions");
  if (dt <= 0.0) throw ValidationError("compute_velocities: dt must be positive");
  std::vector<Vec2> velocities(positions.size());
  for (size_t t = 1; t < positions.size(); ++t)
    velocities[t] = (positions[t] - positions[t - 1]) / dt;
  velocities[0] = velocities[1];
  return velocities;
}

long table_frame_step(const TrajectoryTable& table) {
  long step = std::numeric_limits<long>::max();
  for (size_t i = 1; i < table.rows.size(); ++i) {
    if (table.rows[i].agent_id != table.rows[i - 1].agent_id) continue;
    step = std::min(step, table.rows[i].frame_id - table.rows[i - 1].frame_id);
  }
  return step == std::numeric_limits<long>::max() ? 1 : step;
}

namespace {

struct Tracklet {
  long agent_id = 0;
  long start_frame = 0;  // frames advance by the table step
  std::vector<Vec2> positions;

  long end_frame(long step) const {
    return start_frame + step * static_cast<long>(positions.size() - 1);
  }
  // Index of `frame` within this tracklet, or -1.
  long index_of(long frame, long step) const {
    if (frame < start_frame || (frame - start_frame) % step != 0) return -1;
    const long idx = (frame - start_frame) / step;
    return idx < static_cast<long>(positions.size()) ? idx : -1;
  }
};

// Splits each agent into maximal runs of consecutive frames (delta == step).
std::vector<Tracklet> to_tracklets(const TrajectoryTable& table, long step) {
  std::vector<Tracklet> tracklets;
  size_t i = 0;
  while (i < table.rows.size()) {
    Tracklet t;
    t.agent_id = table.rows[i].agent_id;
    t.start_frame = table.rows[i].frame_id;
    t.positions.push_back({table.rows[i].x, table.rows[i].y});
    while (i + 1 < table.rows.size() && table.rows[i + 1].agent_id == t.agent_id &&
           table.rows[i + 1].frame_id == table.rows[i].frame_id + step) {
      ++i;
      t.positions.push_back({table.rows[i].x, table.rows[i].y});
    }
    tracklets.push_back(std::move(t));
    ++i;
  }
  return tracklets;
}

std::vector<AgentState> window_states(const Tracklet& t, long begin_idx, int len, double dt) {
  // Velocities are finite differences within the extracted window.
  std::vector<Vec2> pos(t.positions.begin() + begin_idx, t.positions.begin() + begin_idx + len);
  const std::vector<Vec2> vel = compute_velocities(pos, dt);
  std::vector<AgentState> states(len);
  for (int k = 0; k < len; ++k) states[k] = {pos[k], vel[k]};
  return states;
}

}  // namespace

std::vector<Scene> build_scenes(const TrajectoryTable& table, int obs_len, int pred_len,
                                int stride) {
  if (obs_len < 2) throw ValidationError("build_scenes: obs_len must be >= 2");
  if (pred_len < 1) throw ValidationError("build_scenes: pred_len must be >= 1");
  if (stride < 1) throw ValidationError("build_scenes: stride must be >= 1");

  const long step = table_frame_step(table);
  const double dt = table.dt();
  const std::vector<Tracklet> tracklets = to_tracklets(table, step);
  const int window = obs_len + pred_len;

  std::vector<Scene> scenes;
  for (const Tracklet& target : tracklets) {
    const long n_frames = static_cast<long>(target.positions.size());
    for (long begin = 0; begin + window <= n_frames; begin += stride) {
      const long obs_start_frame = target.start_frame + step * begin;
      const long obs_end_frame = obs_start_frame + step * (obs_len - 1);

      Scene scene;
      scene.obs_len = obs_len;
      scene.pred_len = pred_len;
      scene.dt = dt;
      scene.source = table.source_name;
      scene.target_agent_id = target.agent_id;
      scene.start_frame = obs_start_frame;

      // Target first, with its future split out of one contiguous window.
      {
        std::vector<AgentState> full = window_states(target, begin, window, dt);
        scene.states.push_back({full.begin(), full.begin() + obs_len});
        scene.future.push_back({full.begin() + obs_len, full.end()});
      }
      scene.target_index = 0;

      for (const Tracklet& other : tracklets) {
        if (&other == &target) continue;
        if (other.agent_id == target.agent_id) continue;  // gap-split remnants
        const long first = other.index_of(obs_start_frame, step);
        if (first < 0) continue;
        if (other.index_of(obs_end_frame, step) < 0) continue;
        scene.states.push_back(window_states(other, first, obs_len, dt));
        // Keep the neighbor's future when it is fully present too.
        const long last_pred = obs_end_frame + step * pred_len;
        if (other.index_of(last_pred, step) >= 0) {
          std::vector<AgentState> full = window_states(other, first, window, dt);
          scene.future.push_back({full.begin() + obs_len, full.end()});
        } else {
          scene.future.push_back({});
        }
      }
      scenes.push_back(std::move(scene));
    }
  }
  return scenes;
}

std::pair<std::vector<Scene>, std::vector<Scene>> split_leave_one_out(
    const SplitSpec& spec, const std::map<std::string, TrajectoryTable>& tables, int obs_len,
    int pred_len, int stride) {
  if (spec.test_index < 0 || spec.test_index >= static_cast<int>(spec.dataset_names.size()))
    throw ValidationError("split_leave_one_out: test_index out of range");
  for (const std::string& name : spec.dataset_names)
    if (!tables.count(name)) throw DataError("split_leave_one_out: missing dataset: " + name);

  std::vector<Scene> train, test;
  for (size_t i = 0; i < spec.dataset_names.size(); ++i) {
    const std::string& name = spec.dataset_names[i];
    std::vector<Scene> scenes = build_scenes(tables.at(name), obs_len, pred_len, stride);
    for (Scene& s : scenes) s.source = name;
    auto& sink = (static_cast<int>(i) == spec.test_index) ? test : train;
    std::move(scenes.begin(), scenes.end(), std::back_inserter(sink));
  }
  return {std::move(train), std::move(test)};
}

std::pair<Scene, SceneTransform> normalize_scene(const Scene& scene) {
  SceneTransform transform;
  transform.translation = scene.states[scene.target_index][scene.obs_len - 1].position;

  Scene out = scene;
  for (auto& agent : out.states)
    for (AgentState& s : agent) s.position -= transform.translation;
  for (auto& agent : out.future)
    for (AgentState& s : agent) s.position -= transform.translation;
  return {std::move(out), transform};
}

Scene rotate_scene(const Scene& scene, double angle) {
  SceneTransform rot;
  rot.rotation = angle;
  Scene out = scene;
  for (auto& agent : out.states)
    for (AgentState& s : agent) {
      s.position = rot.apply_position(s.position);
      s.velocity = rot.apply_velocity(s.velocity);
    }
  for (auto& agent : out.future)
    for (AgentState& s : agent) {
      s.position = rot.apply_position(s.position);
      s.velocity = rot.apply_velocity(s.velocity);
    }
  return out;
}

}  // namespace trajgan
