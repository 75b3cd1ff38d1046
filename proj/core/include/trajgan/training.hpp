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
#include <optional>
#include <string>
#include <vector>

#include "trajgan/checkpoint.hpp"
#include "trajgan/metrics.hpp"
#include "trajgan/model.hpp"

namespace trajgan {

enum class Regime { infogan, vanilla, l2, variety, unrolled, info_unrolled };

Regime parse_regime(const std::string& name);
std::string regime_name(Regime regime);

struct TrainConfig {
  Regime regime = Regime::infogan;
  int batch_size = 64;
  double lr_generator = 1e-3;
  double lr_discriminator = 1e-4;
  double beta1 = 0.9;  // first-moment coefficient ("momentum")
  long iterations = 20000;
  double info_lambda = 1.0;
  int variety_v = 20;
  int unroll_steps = -1;  // -1 resolves to 10, or 5 for info_unrolled
  uint64_t seed = 1;
  long checkpoint_every = 5000;
  long log_every = 100;
  bool use_sgd_momentum = false;  // adaptive moments by default
  double grad_clip = 10.0;        // global-norm safety valve, <= 0 disables
  bool standardize_features = true;
  bool rotation_augment = false;

  int resolved_unroll_steps() const {
    if (unroll_steps >= 0) return unroll_steps;
    return regime == Regime::info_unrolled ? 5 : 10;
  }
  bool uses_info() const { return regime == Regime::infogan || regime == Regime::info_unrolled; }
  bool uses_unrolling() const {
    return regime == Regime::unrolled || regime == Regime::info_unrolled;
  }
  void validate() const;
};

// --- Loss primitives (also used by tests as oracles) ---

// Mean over timesteps of squared Euclidean position error.
double l2_loss(const Trajectory& pred, const Trajectory& gt);

// lambda * MSE between code and reconstruction (fixed-variance Gaussian
// surrogate, constants dropped).
double info_loss(const Eigen::VectorXd& c, const Eigen::VectorXd& c_hat, double lambda);

// Best-of-V L2: only the closest sample is penalized.
double variety_loss(const std::vector<Trajectory>& samples, const Trajectory& gt);

struct StepStats {
  double d_loss = 0.0;
  double g_loss = 0.0;
  double info_loss = 0.0;
  double d_real_mean = 0.0;
  double d_fake_mean = 0.0;
  double d_grad_norm = 0.0;
  double g_grad_norm = 0.0;
  bool d_clipped = false;
  bool g_clipped = false;
};

struct TrainLogRecord {
  long iteration = 0;
  double d_loss = 0.0;
  double g_loss = 0.0;
  double info_loss = 0.0;
  double d_real = 0.0;
  double d_fake = 0.0;
  double wall_s = 0.0;
};

struct TrainLog {
  std::vector<TrainLogRecord> records;

  void write(const std::filesystem::path& path) const;
  static TrainLog read(const std::filesystem::path& path);
};

// One optimization step pair: a discriminator update followed by a generator
// update (1:1 ratio), with fresh z, c per sample in each phase.
template <class S>
class Trainer {
 public:
  Trainer(Model<S>& model, const TrainConfig& config);

  StepStats adversarial_step(const std::vector<const Scene*>& batch, uint64_t iteration);

  // Exposed separately so the unrolling-isolation and wiring invariants can
  // be probed between the two phases.
  void discriminator_phase(const std::vector<const Scene*>& batch, uint64_t iteration,
                           StepStats& stats);
  void generator_phase(const std::vector<const Scene*>& batch, uint64_t iteration,
                       StepStats& stats, bool apply_update = true);

  Model<S>& model() { return model_; }
  Optimizer<S>& generator_optimizer() { return opt_g_; }
  Optimizer<S>& discriminator_optimizer() { return opt_d_; }
  Optimizer<S>& q_optimizer() { return opt_q_; }

  void export_optimizer_state(CheckpointData& data);
  void import_optimizer_state(const CheckpointData& data);

 private:
  struct FakeRollout {
    std::vector<MatX<S>> states;  // pred_len of 4 x B, constants
  };

  MatX<S> draw_noise(std::mt19937_64& rng, int batch) const;
  MatX<S> draw_codes(std::mt19937_64& rng, int batch) const;
  FakeRollout rollout_nograd(const SceneBatch<S>& batch, const MatX<S>& z, const MatX<S>& c);
  // Discriminator loss graph on given parameters; returns the loss node.
  int d_loss_graph(Tape<S>& t, Discriminator<S>& disc, const SceneBatch<S>& batch,
                   const FakeRollout& fake, double* d_real_mean, double* d_fake_mean);

  Model<S>& model_;
  TrainConfig cfg_;
  Optimizer<S> opt_g_, opt_d_, opt_q_;
  Tape<S> tape_;
  RngStreams streams_;
};

struct TrainPaths {
  std::filesystem::path checkpoint_dir;  // empty: no checkpoints
  std::filesystem::path log_file;        // empty: no log file
};

struct TrainResult {
  std::filesystem::path final_checkpoint;
  TrainLog log;
};

// Runs the configured regime for config.iterations, emitting checkpoints and
// key=value log records at the configured cadence. Fully seeded; aborts on
// non-finite losses with a reference to the last good checkpoint.
template <class S>
TrainResult train(const std::vector<Scene>& train_scenes, Model<S>& model,
                  const TrainConfig& config, const TrainPaths& paths,
                  const std::string& config_hash, const CheckpointData* resume = nullptr);

extern template class Trainer<float>;
extern template class Trainer<double>;
extern template TrainResult train<float>(const std::vector<Scene>&, Model<float>&,
                                         const TrainConfig&, const TrainPaths&,
                                         const std::string&, const CheckpointData*);
extern template TrainResult train<double>(const std::vector<Scene>&, Model<double>&,
                                          const TrainConfig&, const TrainPaths&,
                                          const std::string&, const CheckpointData*);

}  // namespace trajgan
