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

#include "trajgan/model.hpp"

#include <cmath>

#include "trajgan/dataset.hpp"
#include "trajgan/errors.hpp"

namespace trajgan {

void ModelDims::validate() const {
  if (state_dim != 4) throw ValidationError("ModelDims: state_dim must be 4 (position, velocity)");
  if (embed_dim < 1 || hidden_dim < 1 || pool_dim < 1 || noise_dim < 1 || code_dim < 1 ||
      disc_proj_dim < 1)
    throw ValidationError("ModelDims: all widths must be positive");
  if (obs_len < 2 || pred_len < 1) throw ValidationError("ModelDims: bad sequence lengths");
  if (decoder_head_dims.empty() || decoder_head_dims.back() != 2)
    throw ValidationError("ModelDims: decoder head must end in a 2-d displacement");
}

template <class S>
SceneBatch<S> SceneBatch<S>::from_scenes(const std::vector<const Scene*>& scenes,
                                         const FeatureStandardizer& standardizer) {
  if (scenes.empty()) throw ValidationError("SceneBatch: empty batch");
  SceneBatch<S> out;
  out.batch = static_cast<int>(scenes.size());
  out.obs_len = scenes[0]->obs_len;
  out.pred_len = scenes[0]->pred_len;
  out.dt = static_cast<S>(scenes[0]->dt);

  int total_neighbors = 0;
  out.has_future = true;
  for (const Scene* s : scenes) {
    if (s->obs_len != out.obs_len || s->pred_len != out.pred_len)
      throw ValidationError("SceneBatch: scenes disagree on window lengths");
    total_neighbors += s->num_agents() - 1;
    if (!s->has_target_future()) out.has_future = false;
  }

  const int B = out.batch;
  out.target_obs.assign(out.obs_len, MatX<S>(4, B));
  if (out.has_future) out.real_future.assign(out.pred_len, MatX<S>(4, B));
  out.neighbor_obs.assign(out.obs_len, MatX<S>(4, total_neighbors));
  out.features.resize(3, total_neighbors);
  out.neighbor_range.resize(B);
  out.origin.resize(B);

  auto put = [](MatX<S>& m, int col, const AgentState& s) {
    m(0, col) = static_cast<S>(s.position.x());
    m(1, col) = static_cast<S>(s.position.y());
    m(2, col) = static_cast<S>(s.velocity.x());
    m(3, col) = static_cast<S>(s.velocity.y());
  };

  int cursor = 0;
  for (int i = 0; i < B; ++i) {
    auto [scene, transform] = normalize_scene(*scenes[i]);
    out.origin[i] = transform.translation;

    for (int t = 0; t < out.obs_len; ++t) put(out.target_obs[t], i, scene.target_states()[t]);
    if (out.has_future)
      for (int t = 0; t < out.pred_len; ++t) put(out.real_future[t], i, scene.target_future()[t]);

    const int begin = cursor;
    const AgentState& target_last = scene.target_states()[out.obs_len - 1];
    for (int j = 0; j < scene.num_agents(); ++j) {
      if (j == scene.target_index) continue;
      for (int t = 0; t < out.obs_len; ++t) put(out.neighbor_obs[t], cursor, scene.states[j][t]);
      const Eigen::Vector3d f =
          standardizer.apply(social_features(target_last, scene.states[j][out.obs_len - 1]));
      out.features.col(cursor) = f.cast<S>();
      ++cursor;
    }
    out.neighbor_range[i] = {begin, cursor};
  }
  return out;
}

template <class S>
void Generator<S>::init(const ModelDims& d, std::mt19937_64& rng) {
  d.validate();
  dims = d;
  embed.init("gen.embed", d.embed_dim, d.state_dim, rng);
  encoder.init("gen.encoder", d.hidden_dim, d.embed_dim, rng);
  feat_embed.init("gen.feat_embed", d.pool_dim, 3, rng);
  w_sigma.name = "gen.w_sigma";
  w_sigma.value.resize(d.pool_dim, d.hidden_dim);
  init_uniform(w_sigma, d.hidden_dim, rng);
  w_sigma.zero_grad();
  decoder.init("gen.decoder", d.hidden_dim, d.decoder_input(), rng);
  head.clear();
  head.resize(d.decoder_head_dims.size());
  int in = d.hidden_dim;
  for (size_t l = 0; l < d.decoder_head_dims.size(); ++l) {
    head[l].init("gen.head" + std::to_string(l), d.decoder_head_dims[l], in, rng);
    in = d.decoder_head_dims[l];
  }
}

template <class S>
std::vector<Parameter<S>*> Generator<S>::parameters() {
  std::vector<Parameter<S>*> out{&embed.W,   &embed.b,   &encoder.Wx, &encoder.Wh,
                                 &encoder.b, &feat_embed.W, &feat_embed.b, &w_sigma,
                                 &decoder.Wx, &decoder.Wh, &decoder.b};
  for (Linear<S>& l : head) {
    out.push_back(&l.W);
    out.push_back(&l.b);
  }
  return out;
}

template <class S>
std::vector<int> Generator<S>::encode(Tape<S>& t, const std::vector<MatX<S>>& sequence) {
  const int cols = static_cast<int>(sequence[0].cols());
  typename LstmCell<S>::State state = encoder.initial(t, cols);
  std::vector<int> hiddens;
  hiddens.reserve(sequence.size());
  for (const MatX<S>& x : sequence) {
    const int e = embed.forward_leaky(t, t.input(x));
    state = encoder.step(t, e, state);
    hiddens.push_back(state.h);
  }
  return hiddens;
}

template <class S>
typename Generator<S>::Forward Generator<S>::forward(Tape<S>& t, const SceneBatch<S>& batch,
                                                     const MatX<S>& z, const MatX<S>& c) {
  const int B = batch.batch;
  const int M = batch.total_neighbors();

  // Targets and neighbors share the encoder; encode them in one pass.
  std::vector<MatX<S>> combined(batch.obs_len);
  if (M > 0) {
    for (int s = 0; s < batch.obs_len; ++s) {
      combined[s].resize(4, B + M);
      combined[s] << batch.target_obs[s], batch.neighbor_obs[s];
    }
  }
  const std::vector<int> hiddens = encode(t, M > 0 ? combined : batch.target_obs);
  const int h_all = hiddens.back();

  Forward out;
  if (M > 0) {
    std::vector<int> target_cols(B);
    for (int i = 0; i < B; ++i) target_cols[i] = i;
    out.h_target = t.gather_cols(h_all, target_cols);
  } else {
    out.h_target = h_all;
  }

  // Attention pooling from end-of-observation hiddens, held fixed over
  // decoding.
  std::vector<int> pooled_parts(B);
  const int w_sigma_node = M > 0 ? t.param(w_sigma) : -1;
  for (int i = 0; i < B; ++i) {
    const auto [begin, end] = batch.neighbor_range[i];
    const int K = end - begin;
    if (K == 0) {
      pooled_parts[i] = t.zeros(dims.pool_dim, 1);
      continue;
    }
    std::vector<int> columns(K);
    for (int k = 0; k < K; ++k) columns[k] = B + begin + k;
    const int h_n = t.gather_cols(h_all, columns);              // hidden x K
    const int values = t.matmul(w_sigma_node, h_n);             // pool x K
    const int f = feat_embed.forward_leaky(
        t, t.input(MatX<S>(batch.features.middleCols(begin, K))));  // pool x K
    const S scale = static_cast<S>(K) / static_cast<S>(std::sqrt(double(dims.pool_dim)));
    const int scores = t.scale(t.colwise_sum(t.hadamard(f, values)), scale);  // 1 x K
    const int weights = t.softmax_cols(t.transpose(scores));                  // K x 1
    pooled_parts[i] = t.matmul(values, weights);                              // pool x 1
  }
  out.pooled = B == 1 ? pooled_parts[0] : t.concat_cols(pooled_parts);

  const int decoder_in =
      t.concat_rows({out.h_target, out.pooled, t.input(z), t.input(c)});

  typename LstmCell<S>::State state = decoder.initial(t, B);
  int position = t.zeros(2, B);  // normalized frame: last observed position is 0
  const S inv_dt = S(1) / batch.dt;
  for (int step = 0; step < batch.pred_len; ++step) {
    state = decoder.step(t, decoder_in, state);
    int a = state.h;
    for (size_t l = 0; l + 1 < head.size(); ++l) a = head[l].forward_leaky(t, a);
    const int disp = head.back().forward(t, a);
    position = t.add(position, disp);
    out.displacements.push_back(disp);
    out.positions.push_back(position);
    out.fake_states.push_back(t.concat_rows({position, t.scale(disp, inv_dt)}));
  }
  return out;
}

template <class S>
void Discriminator<S>::init(const ModelDims& d, std::mt19937_64& rng) {
  d.validate();
  dims = d;
  obs_encoder.init("disc.obs_encoder", d.hidden_dim, d.state_dim, rng);
  pred_encoder.init("disc.pred_encoder", d.hidden_dim, d.state_dim, rng);
  proj_obs.init("disc.proj_obs", d.disc_proj_dim, d.hidden_dim, rng);
  proj_pred.init("disc.proj_pred", d.disc_proj_dim, d.hidden_dim, rng);
  d_head_hidden.init("disc.d_head_hidden", d.disc_proj_dim, 2 * d.disc_proj_dim, rng);
  d_head_out.init("disc.d_head_out", 1, d.disc_proj_dim, rng);
  q_head_hidden.init("disc.q_head_hidden", d.disc_proj_dim, 2 * d.disc_proj_dim, rng);
  q_head_out.init("disc.q_head_out", d.code_dim, d.disc_proj_dim, rng);
}

template <class S>
std::vector<Parameter<S>*> Discriminator<S>::d_parameters() {
  return {&obs_encoder.Wx,  &obs_encoder.Wh,  &obs_encoder.b,  &pred_encoder.Wx,
          &pred_encoder.Wh, &pred_encoder.b,  &proj_obs.W,     &proj_obs.b,
          &proj_pred.W,     &proj_pred.b,     &d_head_hidden.W, &d_head_hidden.b,
          &d_head_out.W,    &d_head_out.b};
}

template <class S>
std::vector<Parameter<S>*> Discriminator<S>::q_parameters() {
  return {&q_head_hidden.W, &q_head_hidden.b, &q_head_out.W, &q_head_out.b};
}

template <class S>
std::vector<Parameter<S>*> Discriminator<S>::all_parameters() {
  std::vector<Parameter<S>*> out = d_parameters();
  for (Parameter<S>* p : q_parameters()) out.push_back(p);
  return out;
}

template <class S>
int Discriminator<S>::trunk(Tape<S>& t, const std::vector<int>& obs_states,
                            const std::vector<int>& fut_states) {
  const int B = static_cast<int>(t.value(obs_states[0]).cols());
  typename LstmCell<S>::State so = obs_encoder.initial(t, B);
  for (int x : obs_states) so = obs_encoder.step(t, x, so);
  typename LstmCell<S>::State sp = pred_encoder.initial(t, B);
  for (int x : fut_states) sp = pred_encoder.step(t, x, sp);
  const int eo = proj_obs.forward_leaky(t, so.h);
  const int ep = proj_pred.forward_leaky(t, sp.h);
  return t.concat_rows({eo, ep});
}

template <class S>
int Discriminator<S>::d_logit(Tape<S>& t, int trunk_node) {
  return d_head_out.forward(t, d_head_hidden.forward_leaky(t, trunk_node));
}

template <class S>
int Discriminator<S>::q_codes(Tape<S>& t, int trunk_node) {
  return q_head_out.forward(t, q_head_hidden.forward_leaky(t, trunk_node));
}

template <class S>
void Model<S>::init(const ModelDims& d, uint64_t seed) {
  dims = d;
  RngStreams streams(seed);
  std::mt19937_64 rng = streams.stream("model-init");
  generator.init(d, rng);
  discriminator.init(d, rng);
  standardizer = FeatureStandardizer{};
  version = "init-seed" + std::to_string(seed);
  iteration = 0;
}

template <class S>
std::vector<Parameter<S>*> Model<S>::all_parameters() {
  std::vector<Parameter<S>*> out = generator.parameters();
  for (Parameter<S>* p : discriminator.all_parameters()) out.push_back(p);
  return out;
}

template <class S>
std::map<std::string, Eigen::MatrixXd> Model<S>::export_tensors() {
  std::map<std::string, Eigen::MatrixXd> out;
  for (Parameter<S>* p : all_parameters()) out[p->name] = p->value.template cast<double>();
  Eigen::MatrixXd fstd(2, 3);
  fstd.row(0) = standardizer.mean.transpose();
  fstd.row(1) = standardizer.inv_std.transpose();
  out["feature_standardizer"] = fstd;
  return out;
}

template <class S>
void Model<S>::import_tensors(const std::map<std::string, Eigen::MatrixXd>& tensors) {
  for (Parameter<S>* p : all_parameters()) {
    const auto it = tensors.find(p->name);
    if (it == tensors.end()) throw DataError("checkpoint missing tensor: " + p->name);
    if (it->second.rows() != p->value.rows() || it->second.cols() != p->value.cols())
      throw DataError("checkpoint tensor shape mismatch for " + p->name);
    p->value = it->second.template cast<S>();
  }
  const auto it = tensors.find("feature_standardizer");
  if (it != tensors.end()) {
    standardizer.mean = it->second.row(0).transpose();
    standardizer.inv_std = it->second.row(1).transpose();
  }
}

template <class S>
Eigen::VectorXd Model<S>::embed_state(const AgentState& x, bool preactivation) {
  Eigen::Vector4d v(x.position.x(), x.position.y(), x.velocity.x(), x.velocity.y());
  Eigen::VectorXd e = generator.embed.W.value.template cast<double>() * v +
                      generator.embed.b.value.template cast<double>();
  if (!preactivation)
    e = e.unaryExpr([](double a) { return a > 0.0 ? a : kLeakySlope * a; });
  return e;
}

template <class S>
Eigen::MatrixXd Model<S>::encode_history(const std::vector<AgentState>& states) {
  if (static_cast<int>(states.size()) != dims.obs_len)
    throw ValidationError("encode_history: expected a full observation window");
  Tape<S> t;
  t.set_grad_enabled(false);
  std::vector<MatX<S>> seq;
  for (const AgentState& s : states) {
    MatX<S> x(4, 1);
    x << static_cast<S>(s.position.x()), static_cast<S>(s.position.y()),
        static_cast<S>(s.velocity.x()), static_cast<S>(s.velocity.y());
    seq.push_back(x);
  }
  const std::vector<int> hiddens = generator.encode(t, seq);
  Eigen::MatrixXd out(dims.hidden_dim, dims.obs_len);
  for (int s = 0; s < dims.obs_len; ++s)
    out.col(s) = t.value(hiddens[s]).template cast<double>();
  return out;
}

template <class S>
Eigen::VectorXd Model<S>::attention_weights(const std::vector<Eigen::Vector3d>& features,
                                            const Eigen::MatrixXd& neighbor_hiddens) {
  const int K = static_cast<int>(features.size());
  if (K == 0) return Eigen::VectorXd();
  if (neighbor_hiddens.cols() != K)
    throw ValidationError("attention_weights: features/hiddens disagree on neighbor count");

  const Eigen::MatrixXd w_phi = generator.feat_embed.W.value.template cast<double>();
  const Eigen::VectorXd b_phi = generator.feat_embed.b.value.template cast<double>();
  const Eigen::MatrixXd w_sig = generator.w_sigma.value.template cast<double>();

  Eigen::VectorXd scores(K);
  const double scale = static_cast<double>(K) / std::sqrt(static_cast<double>(dims.pool_dim));
  for (int k = 0; k < K; ++k) {
    Eigen::VectorXd f = w_phi * features[k] + b_phi;
    f = f.unaryExpr([](double a) { return a > 0.0 ? a : kLeakySlope * a; });
    scores[k] = scale * f.dot(w_sig * neighbor_hiddens.col(k));
  }
  const double max = scores.maxCoeff();
  Eigen::VectorXd weights = (scores.array() - max).exp();
  return weights / weights.sum();
}

template <class S>
Eigen::VectorXd Model<S>::pool_neighbors(const Eigen::VectorXd& weights,
                                         const Eigen::MatrixXd& neighbor_hiddens) {
  if (weights.size() == 0) return Eigen::VectorXd::Zero(dims.pool_dim);
  if (neighbor_hiddens.cols() != weights.size())
    throw ValidationError("pool_neighbors: weights/hiddens disagree on neighbor count");
  const Eigen::MatrixXd w_sig = generator.w_sigma.value.template cast<double>();
  return (w_sig * neighbor_hiddens) * weights;
}

template <class S>
PredictionSample Model<S>::generate(const Scene& scene, const Eigen::VectorXd& z,
                                    const Eigen::VectorXd& c) {
  if (z.size() != dims.noise_dim)
    throw ValidationError("generate: z has wrong length");
  if (c.size() != dims.code_dim)
    throw ValidationError("generate: c has wrong length");
  if (static_cast<int>(scene.target_states().size()) != dims.obs_len)
    throw ValidationError("generate: scene observation length mismatch");

  const std::vector<const Scene*> ptr{&scene};
  const SceneBatch<S> batch = SceneBatch<S>::from_scenes(ptr, standardizer);

  Tape<S> t;
  t.set_grad_enabled(false);
  const MatX<S> zb = z.cast<S>();
  const MatX<S> cb = c.cast<S>();
  const auto fwd = generator.forward(t, batch, zb, cb);

  PredictionSample sample;
  sample.z = z;
  sample.c = c;
  sample.parameter_version = version + "@" + std::to_string(iteration);
  for (int step = 0; step < batch.pred_len; ++step) {
    const auto& pos = t.value(fwd.positions[step]);
    const auto& disp = t.value(fwd.displacements[step]);
    const Vec2 world(static_cast<double>(pos(0, 0)) + batch.origin[0].x(),
                     static_cast<double>(pos(1, 0)) + batch.origin[0].y());
    if (!std::isfinite(world.x()) || !std::isfinite(world.y()))
      throw NumericalError("generate: non-finite position at step " + std::to_string(step));
    sample.positions.push_back(world);
    sample.velocities.push_back(Vec2(static_cast<double>(disp(0, 0)) / scene.dt,
                                     static_cast<double>(disp(1, 0)) / scene.dt));
  }
  return sample;
}

namespace {

template <class S>
std::vector<MatX<S>> states_to_inputs(const std::vector<AgentState>& states) {
  std::vector<MatX<S>> out;
  for (const AgentState& s : states) {
    MatX<S> x(4, 1);
    x << static_cast<S>(s.position.x()), static_cast<S>(s.position.y()),
        static_cast<S>(s.velocity.x()), static_cast<S>(s.velocity.y());
    out.push_back(x);
  }
  return out;
}

}  // namespace

template <class S>
double Model<S>::discriminate(const std::vector<AgentState>& obs,
                              const std::vector<AgentState>& pred) {
  if (static_cast<int>(obs.size()) != dims.obs_len ||
      static_cast<int>(pred.size()) != dims.pred_len)
    throw ValidationError("discriminate: sequence length mismatch");
  Tape<S> t;
  t.set_grad_enabled(false);
  std::vector<int> obs_nodes, pred_nodes;
  for (const MatX<S>& x : states_to_inputs<S>(obs)) obs_nodes.push_back(t.input(x));
  for (const MatX<S>& x : states_to_inputs<S>(pred)) pred_nodes.push_back(t.input(x));
  const int logit = discriminator.d_logit(t, discriminator.trunk(t, obs_nodes, pred_nodes));
  const double l = static_cast<double>(t.value(logit)(0, 0));
  return 1.0 / (1.0 + std::exp(-l));
}

template <class S>
Eigen::VectorXd Model<S>::reconstruct_code(const std::vector<AgentState>& obs,
                                           const std::vector<AgentState>& pred) {
  if (static_cast<int>(obs.size()) != dims.obs_len ||
      static_cast<int>(pred.size()) != dims.pred_len)
    throw ValidationError("reconstruct_code: sequence length mismatch");
  Tape<S> t;
  t.set_grad_enabled(false);
  std::vector<int> obs_nodes, pred_nodes;
  for (const MatX<S>& x : states_to_inputs<S>(obs)) obs_nodes.push_back(t.input(x));
  for (const MatX<S>& x : states_to_inputs<S>(pred)) pred_nodes.push_back(t.input(x));
  const int codes = discriminator.q_codes(t, discriminator.trunk(t, obs_nodes, pred_nodes));
  return t.value(codes).template cast<double>().col(0);
}

template <class S>
PredictionSample ModelPredictor<S>::sample(const Scene& scene, std::mt19937_64& rng) {
  Eigen::VectorXd z(model_.dims.noise_dim);
  for (int i = 0; i < z.size(); ++i) z[i] = gauss_(rng);
  Eigen::VectorXd c(model_.dims.code_dim);
  for (int i = 0; i < c.size(); ++i) c[i] = uniform_in(rng, -1.0, 1.0);
  return model_.generate(scene, z, c);
}

template struct Generator<float>;
template struct Generator<double>;
template struct Discriminator<float>;
template struct Discriminator<double>;
template struct Model<float>;
template struct Model<double>;
template struct SceneBatch<float>;
template struct SceneBatch<double>;
template class ModelPredictor<float>;
template class ModelPredictor<double>;

}  // namespace trajgan
