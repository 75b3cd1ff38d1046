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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trajgan/interaction.hpp"
#include "trajgan/metrics.hpp"
#include "trajgan/nn.hpp"
#include "trajgan/types.hpp"

namespace trajgan {

struct ModelDims {
  int state_dim = 4;
  int embed_dim = 128;
  int hidden_dim = 128;
  int pool_dim = 64;   // d_sigma: feature embedding and pooled vector width
  int noise_dim = 62;
  int code_dim = 2;
  std::vector<int> decoder_head_dims{64, 32, 2};
  int disc_proj_dim = 64;
  int obs_len = 8;
  int pred_len = 12;

  // Decoder input stacks [history | pooled | z | c]; 256 at paper defaults.
  int decoder_input() const { return hidden_dim + pool_dim + noise_dim + code_dim; }
  void validate() const;
  bool operator==(const ModelDims&) const = default;
};

// One mini-batch of normalized scenes laid out for column-batched forwards.
template <class S>
struct SceneBatch {
  int batch = 0;
  int obs_len = 0;
  int pred_len = 0;
  S dt = S(0);
  std::vector<MatX<S>> target_obs;    // obs_len entries, 4 x B
  std::vector<MatX<S>> real_future;   // pred_len entries, 4 x B (only when all known)
  std::vector<MatX<S>> neighbor_obs;  // obs_len entries, 4 x M
  MatX<S> features;                   // 3 x M, standardized
  std::vector<std::pair<int, int>> neighbor_range;  // per scene, [begin, end) into M
  std::vector<Vec2> origin;           // world position of the normalization origin
  bool has_future = false;

  int total_neighbors() const { return static_cast<int>(features.cols()); }

  static SceneBatch from_scenes(const std::vector<const Scene*>& scenes,
                                const FeatureStandardizer& standardizer);
};

template <class S>
struct Generator {
  ModelDims dims;
  Linear<S> embed;        // state -> embed_dim
  LstmCell<S> encoder;    // embed_dim -> hidden
  Linear<S> feat_embed;   // social features -> pool_dim (phi)
  Parameter<S> w_sigma;   // pool_dim x hidden
  LstmCell<S> decoder;    // decoder_input -> hidden
  std::vector<Linear<S>> head;  // hidden -> ... -> 2, LeakyReLU between, linear last

  void init(const ModelDims& d, std::mt19937_64& rng);
  std::vector<Parameter<S>*> parameters();

  struct Forward {
    std::vector<int> displacements;  // pred_len nodes, 2 x B
    std::vector<int> positions;      // pred_len nodes, 2 x B, normalized frame
    std::vector<int> fake_states;    // pred_len nodes, 4 x B (position, velocity)
    int h_target = -1;               // hidden x B at the last observed frame
    int pooled = -1;                 // pool_dim x B
  };

  // Full batched forward. z is noise_dim x B, c is code_dim x B.
  Forward forward(Tape<S>& t, const SceneBatch<S>& batch, const MatX<S>& z, const MatX<S>& c);

  // Encoder over a state sequence (4 x N per step); returns every hidden id.
  std::vector<int> encode(Tape<S>& t, const std::vector<MatX<S>>& sequence);
};

template <class S>
struct Discriminator {
  ModelDims dims;
  LstmCell<S> obs_encoder;   // state -> hidden (LSTM-OE)
  LstmCell<S> pred_encoder;  // state -> hidden (LSTM-PE)
  Linear<S> proj_obs;        // hidden -> proj
  Linear<S> proj_pred;       // hidden -> proj
  Linear<S> d_head_hidden;   // 2*proj -> proj
  Linear<S> d_head_out;      // proj -> 1 (logit)
  Linear<S> q_head_hidden;   // 2*proj -> proj
  Linear<S> q_head_out;      // proj -> code_dim, linear

  void init(const ModelDims& d, std::mt19937_64& rng);
  // Trunk + D-head: the adversarially trained set (theta_D).
  std::vector<Parameter<S>*> d_parameters();
  // Q-head only (theta_Q); the trunk is shared but owned by theta_D.
  std::vector<Parameter<S>*> q_parameters();
  std::vector<Parameter<S>*> all_parameters();

  // Both encoders + projections; obs/fut are node ids of 4 x B states.
  int trunk(Tape<S>& t, const std::vector<int>& obs_states,
            const std::vector<int>& fut_states);
  int d_logit(Tape<S>& t, int trunk_node);   // 1 x B
  int q_codes(Tape<S>& t, int trunk_node);   // code_dim x B
};

// Self-describing version tag written into checkpoints and sample files.
inline constexpr int kCheckpointFormatVersion = 1;

template <class S>
struct Model {
  ModelDims dims;
  Generator<S> generator;
  Discriminator<S> discriminator;
  FeatureStandardizer standardizer;
  std::string version = "init";
  long iteration = 0;

  void init(const ModelDims& d, uint64_t seed);

  std::vector<Parameter<S>*> generator_parameters() { return generator.parameters(); }
  std::vector<Parameter<S>*> discriminator_parameters() { return discriminator.d_parameters(); }
  std::vector<Parameter<S>*> q_parameters() { return discriminator.q_parameters(); }
  std::vector<Parameter<S>*> all_parameters();

  std::map<std::string, Eigen::MatrixXd> export_tensors();
  void import_tensors(const std::map<std::string, Eigen::MatrixXd>& tensors);

  // --- Spec-level single-sample operations (deterministic) ---

  // Linear state embedding; post-activation by default.
  Eigen::VectorXd embed_state(const AgentState& x, bool preactivation = false);

  // All encoder hiddens over one observation window, hidden x obs_len.
  Eigen::MatrixXd encode_history(const std::vector<AgentState>& states);

  // Softmax attention over neighbors; features must already be standardized.
  Eigen::VectorXd attention_weights(const std::vector<Eigen::Vector3d>& features,
                                    const Eigen::MatrixXd& neighbor_hiddens);

  // Weighted sum of projected neighbor hiddens; zero vector without
  // neighbors.
  Eigen::VectorXd pool_neighbors(const Eigen::VectorXd& weights,
                                 const Eigen::MatrixXd& neighbor_hiddens);

  // One generated future for the scene's target agent, world coordinates.
  PredictionSample generate(const Scene& scene, const Eigen::VectorXd& z,
                            const Eigen::VectorXd& c);

  double discriminate(const std::vector<AgentState>& obs, const std::vector<AgentState>& pred);

  Eigen::VectorXd reconstruct_code(const std::vector<AgentState>& obs,
                                   const std::vector<AgentState>& pred);
};

// Stochastic predictor over a trained model: z ~ N(0, I), c ~ U(-1, 1).
template <class S>
class ModelPredictor : public Predictor {
 public:
  explicit ModelPredictor(Model<S>& model) : model_(model) {}
  PredictionSample sample(const Scene& scene, std::mt19937_64& rng) override;
  bool is_stochastic() const override { return true; }
  std::string name() const override { return "model"; }

 private:
  Model<S>& model_;
  GaussianSampler gauss_;
};

extern template struct Generator<float>;
extern template struct Generator<double>;
extern template struct Discriminator<float>;
extern template struct Discriminator<double>;
extern template struct Model<float>;
extern template struct Model<double>;
extern template struct SceneBatch<float>;
extern template struct SceneBatch<double>;
extern template class ModelPredictor<float>;
extern template class ModelPredictor<double>;

}  // namespace trajgan
