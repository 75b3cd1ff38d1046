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
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "trajgan/types.hpp"

namespace trajgan {

using Trajectory = std::vector<Vec2>;
using TrajectoryDistance = std::function<double(const Trajectory&, const Trajectory&)>;

enum class SampleLabel { real, generated };

struct SampleSet {
  std::vector<Trajectory> trajectories;
  SampleLabel label = SampleLabel::real;
};

// Mean Euclidean position error over all timesteps.
double ade(const Trajectory& pred, const Trajectory& gt);

// Euclidean position error at the final timestep.
double fde(const Trajectory& pred, const Trajectory& gt);

// Minimum of `metric` over K stochastic samples.
double best_of_k(const std::vector<Trajectory>& samples, const Trajectory& gt,
                 const TrajectoryDistance& metric);

// Leave-one-out 1-NN two-sample accuracy between equal-size sets. Exact
// distance ties resolve toward the real label. 0.5 means the sets are
// statistically indistinguishable under `distance`.
double one_nn_accuracy(const SampleSet& s_real, const SampleSet& s_gen,
                       const TrajectoryDistance& distance = ade);

// Earth mover's distance with uniform marginals 1/n and 1/m. Equal sizes
// reduce to a minimum-cost perfect matching; unequal sizes solve the general
// transport program. Both routes are exact.
double emd(const SampleSet& s_real, const SampleSet& s_gen,
           const TrajectoryDistance& distance = ade);

// Ground-truth endpoint cluster of one (condition, branch) mode.
struct EndpointCluster {
  int condition = 0;
  int branch = 0;
  Vec2 center{0.0, 0.0};
  double stddev = 0.0;  // RMS endpoint distance from the center
  long count = 0;
};

// Fraction of clusters hit by at least one sample. A sample counts for its
// nearest cluster (final-position distance) only when it lands within
// 3x that cluster's ground-truth endpoint standard deviation.
double mode_coverage(const std::vector<Trajectory>& samples,
                     const std::vector<EndpointCluster>& clusters);

struct MetricsReport {
  double ade = -1.0;
  double fde = -1.0;
  int K = 20;
  double one_nn_accuracy = -1.0;  // mean over condition groups; -1 when not computed
  double emd = -1.0;
  double mode_coverage = -1.0;
  std::string config_hash;
  std::map<std::string, double> breakdown;  // per-dataset / per-condition values

  void write(const std::filesystem::path& path) const;
  static MetricsReport read(const std::filesystem::path& path);
};

// Anything that can propose futures for a scene.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual PredictionSample sample(const Scene& scene, std::mt19937_64& rng) = 0;
  virtual bool is_stochastic() const = 0;
  virtual std::string name() const = 0;
};

struct EvaluateOptions {
  int K = 20;
  uint64_t seed = 1;
  int distribution_set_size = 20;        // |S_r| = |S_g| per condition
  int coverage_samples_per_condition = 128;
  const std::vector<EndpointCluster>* clusters = nullptr;  // enables mode coverage
  std::filesystem::path per_scene_table;  // optional per-scene dump
};

// Best-of-K ADE/FDE over all test scenes; distribution metrics per condition
// group where toy provenance exists. Deterministic predictors are evaluated
// with K = 1.
MetricsReport evaluate_model(Predictor& predictor, const std::vector<Scene>& test_scenes,
                             const EvaluateOptions& options = {});

Trajectory future_positions(const Scene& scene);

}  // namespace trajgan
