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

#include "trajgan/training.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "trajgan/dataset.hpp"
#include "trajgan/errors.hpp"

namespace trajgan {

Regime parse_regime(const std::string& name) {
  if (name == "infogan") return Regime::infogan;
  if (name == "vanilla") return Regime::vanilla;
  if (name == "l2") return Regime::l2;
  if (name == "variety") return Regime::variety;
  if (name == "unrolled") return Regime::unrolled;
  if (name == "info_unrolled") return Regime::info_unrolled;
  throw ValidationError("unknown regime: " + name +
                        " (expected infogan|vanilla|l2|variety|unrolled|info_unrolled)");
}

std::string regime_name(Regime regime) {
  switch (regime) {
    case Regime::infogan: return "infogan";
    case Regime::vanilla: return "vanilla";
    case Regime::l2: return "l2";
    case Regime::variety: return "variety";
    case Regime::unrolled: return "unrolled";
    case Regime::info_unrolled: return "info_unrolled";
  }
  return "?";
}

void TrainConfig::validate() const {
  if (batch_size < 1) throw ValidationError("TrainConfig: batch_size must be >= 1");
  if (lr_generator <= 0.0 || lr_discriminator <= 0.0)
    throw ValidationError("TrainConfig: learning rates must be positive");
  if (iterations < 0) throw ValidationError("TrainConfig: iterations must be >= 0");
  if (info_lambda < 0.0) throw ValidationError("TrainConfig: info_lambda must be >= 0");
  if (variety_v < 1) throw ValidationError("TrainConfig: variety_v must be >= 1");
  if (log_every < 1 || checkpoint_every < 1)
    throw ValidationError("TrainConfig: cadences must be >= 1");
}

double l2_loss(const Trajectory& pred, const Trajectory& gt) {
  if (pred.size() != gt.size())
    throw ValidationError("l2_loss: trajectory lengths differ");
  if (pred.empty()) throw ValidationError("l2_loss: empty trajectories");
  double sum = 0.0;
  for (size_t t = 0; t < pred.size(); ++t) sum += (pred[t] - gt[t]).squaredNorm();
  return sum / static_cast<double>(pred.size());
}

double info_loss(const Eigen::VectorXd& c, const Eigen::VectorXd& c_hat, double lambda) {
  if (c.size() != c_hat.size()) throw ValidationError("info_loss: shape mismatch");
  if (lambda == 0.0) return 0.0;
  return lambda * (c - c_hat).squaredNorm() / static_cast<double>(c.size());
}

double variety_loss(const std::vector<Trajectory>& samples, const Trajectory& gt) {
  if (samples.empty()) throw ValidationError("variety_loss: no samples");
  double best = std::numeric_limits<double>::infinity();
  for (const Trajectory& s : samples) best = std::min(best, l2_loss(s, gt));
  return best;
}

template <class S>
Trainer<S>::Trainer(Model<S>& model, const TrainConfig& config)
    : model_(model), cfg_(config), streams_(config.seed) {
  cfg_.validate();
  const auto kind =
      cfg_.use_sgd_momentum ? Optimizer<S>::Kind::sgd_momentum : Optimizer<S>::Kind::adam;
  opt_g_.kind = kind;
  opt_g_.lr = cfg_.lr_generator;
  opt_g_.beta1 = cfg_.beta1;
  opt_d_.kind = kind;
  opt_d_.lr = cfg_.lr_discriminator;
  opt_d_.beta1 = cfg_.beta1;
  // Q shares the discriminator's optimizer hyperparameters.
  opt_q_.kind = kind;
  opt_q_.lr = cfg_.lr_discriminator;
  opt_q_.beta1 = cfg_.beta1;
}

template <class S>
MatX<S> Trainer<S>::draw_noise(std::mt19937_64& rng, int batch) const {
  GaussianSampler gauss;
  MatX<S> z(model_.dims.noise_dim, batch);
  for (int j = 0; j < batch; ++j)
    for (int i = 0; i < z.rows(); ++i) z(i, j) = static_cast<S>(gauss(rng));
  return z;
}

template <class S>
MatX<S> Trainer<S>::draw_codes(std::mt19937_64& rng, int batch) const {
  MatX<S> c(model_.dims.code_dim, batch);
  for (int j = 0; j < batch; ++j)
    for (int i = 0; i < c.rows(); ++i) c(i, j) = static_cast<S>(uniform_in(rng, -1.0, 1.0));
  return c;
}

template <class S>
typename Trainer<S>::FakeRollout Trainer<S>::rollout_nograd(const SceneBatch<S>& batch,
                                                            const MatX<S>& z, const MatX<S>& c) {
  tape_.reset();
  tape_.set_grad_enabled(false);
  const auto fwd = model_.generator.forward(tape_, batch, z, c);
  FakeRollout out;
  out.states.reserve(fwd.fake_states.size());
  for (int id : fwd.fake_states) out.states.push_back(tape_.value(id));
  tape_.set_grad_enabled(true);
  return out;
}

template <class S>
int Trainer<S>::d_loss_graph(Tape<S>& t, Discriminator<S>& disc, const SceneBatch<S>& batch,
                             const FakeRollout& fake, double* d_real_mean, double* d_fake_mean) {
  std::vector<int> obs_nodes, real_nodes, fake_nodes;
  for (const MatX<S>& x : batch.target_obs) obs_nodes.push_back(t.input(x));
  for (const MatX<S>& x : batch.real_future) real_nodes.push_back(t.input(x));
  for (const MatX<S>& x : fake.states) fake_nodes.push_back(t.input(x));

  const int logit_real = disc.d_logit(t, disc.trunk(t, obs_nodes, real_nodes));
  const int logit_fake = disc.d_logit(t, disc.trunk(t, obs_nodes, fake_nodes));

  if (d_real_mean)
    *d_real_mean = t.value(logit_real)
                       .unaryExpr([](S x) { return S(1) / (S(1) + std::exp(-x)); })
                       .mean();
  if (d_fake_mean)
    *d_fake_mean = t.value(logit_fake)
                       .unaryExpr([](S x) { return S(1) / (S(1) + std::exp(-x)); })
                       .mean();

  // -E[log D(real)] - E[log(1 - D(fake))], on logits for stability.
  const int loss_real = t.scale(t.mean_all(t.logsigmoid(logit_real)), S(-1));
  const int loss_fake = t.scale(t.mean_all(t.logsigmoid(t.scale(logit_fake, S(-1)))), S(-1));
  return t.add(loss_real, loss_fake);
}

template <class S>
void Trainer<S>::discriminator_phase(const std::vector<const Scene*>& batch, uint64_t iteration,
                                     StepStats& stats) {
  const SceneBatch<S> sb = SceneBatch<S>::from_scenes(batch, model_.standardizer);
  if (!sb.has_future) throw ValidationError("training batch needs ground-truth futures");

  std::mt19937_64 rng = streams_.stream("d-phase", iteration);
  const MatX<S> z = draw_noise(rng, sb.batch);
  const MatX<S> c = draw_codes(rng, sb.batch);
  const FakeRollout fake = rollout_nograd(sb, z, c);

  const auto d_params = model_.discriminator.d_parameters();
  zero_grads(d_params);
  set_trainable(d_params, true);

  tape_.reset();
  const int loss =
      d_loss_graph(tape_, model_.discriminator, sb, fake, &stats.d_real_mean, &stats.d_fake_mean);
  stats.d_loss = static_cast<double>(tape_.scalar_value(loss));
  tape_.backward(loss);

  stats.d_grad_norm = opt_d_.step(d_params, cfg_.grad_clip);
  stats.d_clipped = cfg_.grad_clip > 0.0 && stats.d_grad_norm > cfg_.grad_clip;
}

template <class S>
void Trainer<S>::generator_phase(const std::vector<const Scene*>& batch, uint64_t iteration,
                                 StepStats& stats, bool apply_update) {
  const SceneBatch<S> sb = SceneBatch<S>::from_scenes(batch, model_.standardizer);
  if (!sb.has_future && (cfg_.regime == Regime::l2 || cfg_.regime == Regime::variety))
    throw ValidationError("l2/variety regimes need ground-truth futures");

  std::mt19937_64 rng = streams_.stream("g-phase", iteration);
  const MatX<S> z = draw_noise(rng, sb.batch);
  const MatX<S> c = draw_codes(rng, sb.batch);
  const int B = sb.batch;
  const int T = sb.pred_len;

  // Variety pre-pass: pick the closest of V samples per scene (no grad);
  // gradient will flow only through the winners.
  MatX<S> z_best, c_best;
  if (cfg_.regime == Regime::variety) {
    std::vector<double> best(B, std::numeric_limits<double>::infinity());
    z_best.resize(z.rows(), B);
    c_best.resize(c.rows(), B);
    for (int v = 0; v < cfg_.variety_v; ++v) {
      const MatX<S> zv = v == 0 ? z : draw_noise(rng, B);
      const MatX<S> cv = v == 0 ? c : draw_codes(rng, B);
      const FakeRollout roll = rollout_nograd(sb, zv, cv);
      for (int i = 0; i < B; ++i) {
        double loss = 0.0;
        for (int t = 0; t < T; ++t) {
          const double dx = roll.states[t](0, i) - sb.real_future[t](0, i);
          const double dy = roll.states[t](1, i) - sb.real_future[t](1, i);
          loss += dx * dx + dy * dy;
        }
        loss /= T;
        if (loss < best[i]) {
          best[i] = loss;
          z_best.col(i) = zv.col(i);
          c_best.col(i) = cv.col(i);
        }
      }
    }
  }

  // Unrolling: a scratch discriminator takes unroll_steps plain
  // gradient-descent updates on this batch; the live one is never touched.
  Discriminator<S> scratch;
  const bool unroll = cfg_.uses_unrolling();
  if (unroll) {
    scratch = model_.discriminator;
    const int steps = cfg_.resolved_unroll_steps();
    if (steps > 0) {
      const FakeRollout fake = rollout_nograd(sb, z, c);
      std::vector<Parameter<S>*> scratch_params = scratch.d_parameters();
      for (int u = 0; u < steps; ++u) {
        zero_grads(scratch_params);
        set_trainable(scratch_params, true);
        tape_.reset();
        const int loss = d_loss_graph(tape_, scratch, sb, fake, nullptr, nullptr);
        tape_.backward(loss);
        double norm_sq = 0.0;
        for (Parameter<S>* p : scratch_params)
          norm_sq += static_cast<double>(p->grad.squaredNorm());
        const double norm = std::sqrt(norm_sq);
        const double scale =
            (cfg_.grad_clip > 0.0 && norm > cfg_.grad_clip) ? cfg_.grad_clip / norm : 1.0;
        for (Parameter<S>* p : scratch_params)
          p->value -= static_cast<S>(cfg_.lr_discriminator * scale) * p->grad;
      }
    }
  }
  Discriminator<S>& adv_disc = unroll ? scratch : model_.discriminator;

  const auto g_params = model_.generator.parameters();
  const auto q_params = model_.discriminator.q_parameters();
  zero_grads(g_params);
  if (cfg_.uses_info()) zero_grads(q_params);

  // Gradient flows through the discriminator trunk but never into theta_D.
  set_trainable(adv_disc.d_parameters(), false);
  set_trainable(model_.discriminator.d_parameters(), false);
  set_trainable(q_params, cfg_.uses_info());

  tape_.reset();
  const auto fwd = model_.generator.forward(tape_, sb, z, c);
  std::vector<int> obs_nodes;
  for (const MatX<S>& x : sb.target_obs) obs_nodes.push_back(tape_.input(x));

  const int trunk_adv = adv_disc.trunk(tape_, obs_nodes, fwd.fake_states);
  const int logit_fake = adv_disc.d_logit(tape_, trunk_adv);
  int loss = tape_.scale(tape_.mean_all(tape_.logsigmoid(logit_fake)), S(-1));

  if (cfg_.regime == Regime::l2) {
    int sum = -1;
    for (int t = 0; t < T; ++t) {
      const int gt_pos = tape_.input(MatX<S>(sb.real_future[t].topRows(2)));
      const int term = tape_.sum_all(tape_.square(tape_.sub(fwd.positions[t], gt_pos)));
      sum = sum < 0 ? term : tape_.add(sum, term);
    }
    loss = tape_.add(loss, tape_.scale(sum, S(1) / static_cast<S>(B * T)));
  }

  if (cfg_.regime == Regime::variety) {
    const auto fwd_best = model_.generator.forward(tape_, sb, z_best, c_best);
    int sum = -1;
    for (int t = 0; t < T; ++t) {
      const int gt_pos = tape_.input(MatX<S>(sb.real_future[t].topRows(2)));
      const int term = tape_.sum_all(tape_.square(tape_.sub(fwd_best.positions[t], gt_pos)));
      sum = sum < 0 ? term : tape_.add(sum, term);
    }
    loss = tape_.add(loss, tape_.scale(sum, S(1) / static_cast<S>(B * T)));
  }

  stats.info_loss = 0.0;
  if (cfg_.uses_info()) {
    // The reconstruction tracks the live trunk (frozen in this phase), not
    // the unrolled scratch copy.
    const int trunk_live = unroll
                               ? model_.discriminator.trunk(tape_, obs_nodes, fwd.fake_states)
                               : trunk_adv;
    const int c_hat = model_.discriminator.q_codes(tape_, trunk_live);
    const int c_node = tape_.input(c);
    const int info_term =
        tape_.scale(tape_.mean_all(tape_.square(tape_.sub(c_node, c_hat))),
                    static_cast<S>(cfg_.info_lambda));
    stats.info_loss = static_cast<double>(tape_.scalar_value(info_term));
    loss = tape_.add(loss, info_term);
  }

  stats.g_loss = static_cast<double>(tape_.scalar_value(loss));
  tape_.backward(loss);

  // Restore the default trainable flags before any optimizer step.
  set_trainable(model_.discriminator.d_parameters(), true);
  set_trainable(q_params, true);

  if (apply_update) {
    stats.g_grad_norm = opt_g_.step(g_params, cfg_.grad_clip);
    stats.g_clipped = cfg_.grad_clip > 0.0 && stats.g_grad_norm > cfg_.grad_clip;
    if (cfg_.uses_info()) opt_q_.step(q_params, cfg_.grad_clip);
  }
}

template <class S>
StepStats Trainer<S>::adversarial_step(const std::vector<const Scene*>& batch,
                                       uint64_t iteration) {
  StepStats stats;
  discriminator_phase(batch, iteration, stats);
  generator_phase(batch, iteration, stats);
  return stats;
}

template <class S>
void Trainer<S>::export_optimizer_state(CheckpointData& data) {
  auto dump = [&data](const char* prefix, const Optimizer<S>& opt,
                      const std::vector<Parameter<S>*>& params) {
    for (const Parameter<S>* p : params) {
      if (p->opt_m.size() == 0) continue;
      data.optimizer[std::string("m.") + p->name] = p->opt_m.template cast<double>();
      data.optimizer[std::string("v.") + p->name] = p->opt_v.template cast<double>();
    }
    data.meta[std::string("opt.") + prefix + ".t"] = std::to_string(opt.t);
  };
  dump("g", opt_g_, model_.generator.parameters());
  dump("d", opt_d_, model_.discriminator.d_parameters());
  dump("q", opt_q_, model_.discriminator.q_parameters());
}

template <class S>
void Trainer<S>::import_optimizer_state(const CheckpointData& data) {
  auto load = [&data](const char* prefix, Optimizer<S>& opt,
                      const std::vector<Parameter<S>*>& params) {
    for (Parameter<S>* p : params) {
      const auto m = data.optimizer.find("m." + p->name);
      const auto v = data.optimizer.find("v." + p->name);
      if (m != data.optimizer.end()) p->opt_m = m->second.template cast<S>();
      if (v != data.optimizer.end()) p->opt_v = v->second.template cast<S>();
    }
    const auto t = data.meta.find(std::string("opt.") + prefix + ".t");
    if (t != data.meta.end()) opt.t = std::stol(t->second);
  };
  load("g", opt_g_, model_.generator.parameters());
  load("d", opt_d_, model_.discriminator.d_parameters());
  load("q", opt_q_, model_.discriminator.q_parameters());
}

void TrainLog::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write train log: " + path.string());
  out << "# iter d_loss g_loss info_loss d_real d_fake wall_s\n";
  for (const TrainLogRecord& r : records)
    out << "iter=" << r.iteration << " d_loss=" << r.d_loss << " g_loss=" << r.g_loss
        << " info_loss=" << r.info_loss << " d_real=" << r.d_real << " d_fake=" << r.d_fake
        << " wall_s=" << r.wall_s << "\n";
}

TrainLog TrainLog::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read train log: " + path.string());
  TrainLog log;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    TrainLogRecord r;
    std::istringstream ss(line);
    std::string token;
    bool has_iter = false;
    while (ss >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = token.substr(0, eq);
      const double value = std::stod(token.substr(eq + 1));
      if (key == "iter") {
        r.iteration = static_cast<long>(value);
        has_iter = true;
      } else if (key == "d_loss") r.d_loss = value;
      else if (key == "g_loss") r.g_loss = value;
      else if (key == "info_loss") r.info_loss = value;
      else if (key == "d_real") r.d_real = value;
      else if (key == "d_fake") r.d_fake = value;
      else if (key == "wall_s") r.wall_s = value;
    }
    if (has_iter) log.records.push_back(r);
  }
  return log;
}

namespace {

std::vector<size_t> draw_batch_indices(std::mt19937_64& rng, size_t n, size_t batch) {
  std::vector<size_t> out;
  out.reserve(batch);
  if (n >= batch) {
    // Partial Fisher-Yates: batch distinct indices.
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), size_t{0});
    for (size_t i = 0; i < batch; ++i) {
      const size_t j = i + static_cast<size_t>(rng() % (n - i));
      std::swap(idx[i], idx[j]);
      out.push_back(idx[i]);
    }
  } else {
    for (size_t i = 0; i < batch; ++i) out.push_back(static_cast<size_t>(rng() % n));
  }
  return out;
}

}  // namespace

template <class S>
TrainResult train(const std::vector<Scene>& train_scenes, Model<S>& model,
                  const TrainConfig& config, const TrainPaths& paths,
                  const std::string& config_hash, const CheckpointData* resume) {
  config.validate();
  if (train_scenes.empty()) throw ValidationError("train: empty training set");

  if (!resume) {
    model.standardizer = config.standardize_features ? FeatureStandardizer::fit(train_scenes)
                                                     : FeatureStandardizer{};
    model.iteration = 0;
  }

  Trainer<S> trainer(model, config);
  if (resume) trainer.import_optimizer_state(*resume);

  RngStreams streams(config.seed);

  std::ofstream log_stream;
  if (!paths.log_file.empty()) {
    log_stream.open(paths.log_file, resume ? std::ios::app : std::ios::out);
    if (!log_stream) throw DataError("cannot open train log: " + paths.log_file.string());
    if (!resume) log_stream << "# iter d_loss g_loss info_loss d_real d_fake wall_s\n";
  }
  if (!paths.checkpoint_dir.empty())
    std::filesystem::create_directories(paths.checkpoint_dir);

  auto write_checkpoint = [&](const std::string& stem) -> std::filesystem::path {
    if (paths.checkpoint_dir.empty()) return {};
    CheckpointData data = make_checkpoint(model, config_hash);
    data.meta["regime"] = regime_name(config.regime);
    data.meta["seed"] = std::to_string(config.seed);
    trainer.export_optimizer_state(data);
    const std::filesystem::path file = paths.checkpoint_dir / (stem + ".tgc");
    save_checkpoint(file, data);
    return file;
  };

  TrainResult result;
  std::filesystem::path last_good;
  const auto start_time = std::chrono::steady_clock::now();

  for (long iter = model.iteration + 1; iter <= config.iterations; ++iter) {
    std::mt19937_64 batch_rng = streams.stream("batch", static_cast<uint64_t>(iter));
    const std::vector<size_t> indices =
        draw_batch_indices(batch_rng, train_scenes.size(), static_cast<size_t>(config.batch_size));

    std::vector<Scene> augmented;
    std::vector<const Scene*> batch;
    batch.reserve(indices.size());
    if (config.rotation_augment) {
      std::mt19937_64 aug_rng = streams.stream("augment", static_cast<uint64_t>(iter));
      augmented.reserve(indices.size());
      for (size_t i : indices)
        augmented.push_back(rotate_scene(train_scenes[i], uniform_in(aug_rng, 0.0, 2.0 * M_PI)));
      for (const Scene& s : augmented) batch.push_back(&s);
    } else {
      for (size_t i : indices) batch.push_back(&train_scenes[i]);
    }

    const StepStats stats = trainer.adversarial_step(batch, static_cast<uint64_t>(iter));
    if (!std::isfinite(stats.d_loss) || !std::isfinite(stats.g_loss))
      throw NumericalError(
          "non-finite loss at iteration " + std::to_string(iter) + "; last good checkpoint: " +
          (last_good.empty() ? std::string("<none>") : last_good.string()));

    model.iteration = iter;

    if (iter % config.log_every == 0) {
      const double wall =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
      TrainLogRecord r{iter, stats.d_loss, stats.g_loss, stats.info_loss,
                       stats.d_real_mean, stats.d_fake_mean, wall};
      result.log.records.push_back(r);
      if (log_stream)
        log_stream << "iter=" << r.iteration << " d_loss=" << r.d_loss << " g_loss=" << r.g_loss
                   << " info_loss=" << r.info_loss << " d_real=" << r.d_real
                   << " d_fake=" << r.d_fake << " wall_s=" << r.wall_s << "\n"
                   << std::flush;
    }
    if (iter % config.checkpoint_every == 0) {
      const auto file = write_checkpoint("checkpoint_" + std::to_string(iter));
      if (!file.empty()) last_good = file;
    }
  }

  result.final_checkpoint = write_checkpoint("checkpoint_final");
  return result;
}

template class Trainer<float>;
template class Trainer<double>;
template TrainResult train<float>(const std::vector<Scene>&, Model<float>&, const TrainConfig&,
                                  const TrainPaths&, const std::string&, const CheckpointData*);
template TrainResult train<double>(const std::vector<Scene>&, Model<double>&, const TrainConfig&,
                                   const TrainPaths&, const std::string&, const CheckpointData*);

}  // namespace trajgan
