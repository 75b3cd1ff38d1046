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

#include <random>

#include "trajgan/autodiff.hpp"
#include "trajgan/rng.hpp"

namespace trajgan {

// Slope of every internal activation in the generator and discriminator.
inline constexpr double kLeakySlope = 0.1;

// Fan-in scaled uniform init, U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
template <class S>
void init_uniform(Parameter<S>& p, int fan_in, std::mt19937_64& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  for (long i = 0; i < p.value.size(); ++i)
    p.value.data()[i] = static_cast<S>(uniform_in(rng, -bound, bound));
}

template <class S>
struct Linear {
  Parameter<S> W, b;

  void init(const std::string& name, int out, int in, std::mt19937_64& rng) {
    W.name = name + ".W";
    W.value.resize(out, in);
    init_uniform(W, in, rng);
    W.zero_grad();
    b.name = name + ".b";
    b.value = MatX<S>::Zero(out, 1);
    b.zero_grad();
  }

  int forward(Tape<S>& t, int x) {
    return t.add_col_bias(t.matmul(t.param(W), x), t.param(b));
  }

  int forward_leaky(Tape<S>& t, int x) {
    return t.leaky_relu(forward(t, x), static_cast<S>(kLeakySlope));
  }

  int in_dim() const { return static_cast<int>(W.value.cols()); }
  int out_dim() const { return static_cast<int>(W.value.rows()); }
};

// Single recurrent cell, gate order (i, f, g, o). Forget-gate bias starts
// at 1.
template <class S>
struct LstmCell {
  Parameter<S> Wx, Wh, b;
  int hidden = 0;

  void init(const std::string& name, int hidden_dim, int input_dim, std::mt19937_64& rng) {
    hidden = hidden_dim;
    Wx.name = name + ".Wx";
    Wx.value.resize(4 * hidden, input_dim);
    init_uniform(Wx, input_dim, rng);
    Wx.zero_grad();
    Wh.name = name + ".Wh";
    Wh.value.resize(4 * hidden, hidden);
    init_uniform(Wh, hidden, rng);
    Wh.zero_grad();
    b.name = name + ".b";
    b.value = MatX<S>::Zero(4 * hidden, 1);
    b.value.block(hidden, 0, hidden, 1).setOnes();
    b.zero_grad();
  }

  struct State {
    int h = -1;
    int c = -1;
  };

  State initial(Tape<S>& t, int batch) const {
    return {t.zeros(hidden, batch), t.zeros(hidden, batch)};
  }

  State step(Tape<S>& t, int x, const State& prev) {
    const int pre = t.add_col_bias(
        t.add(t.matmul(t.param(Wx), x), t.matmul(t.param(Wh), prev.h)), t.param(b));
    const int i = t.sigmoid(t.slice_rows(pre, 0, hidden));
    const int f = t.sigmoid(t.slice_rows(pre, hidden, hidden));
    const int g = t.tanh(t.slice_rows(pre, 2 * hidden, hidden));
    const int o = t.sigmoid(t.slice_rows(pre, 3 * hidden, hidden));
    const int c = t.add(t.hadamard(f, prev.c), t.hadamard(i, g));
    const int h = t.hadamard(o, t.tanh(c));
    return {h, c};
  }

  int input_dim() const { return static_cast<int>(Wx.value.cols()); }
};

// Adam by default ("momentum 0.9" read as beta1); plain SGD-momentum behind
// the flag.
template <class S>
struct Optimizer {
  enum class Kind { adam, sgd_momentum };

  Kind kind = Kind::adam;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long t = 0;

  // Clips the group's global gradient norm to clip_norm (when > 0), then
  // applies one update. Returns the pre-clip norm.
  double step(const std::vector<Parameter<S>*>& params, double clip_norm) {
    double norm_sq = 0.0;
    for (Parameter<S>* p : params) norm_sq += static_cast<double>(p->grad.squaredNorm());
    const double norm = std::sqrt(norm_sq);
    const double scale = (clip_norm > 0.0 && norm > clip_norm) ? clip_norm / norm : 1.0;

    ++t;
    for (Parameter<S>* p : params) {
      if (p->opt_m.size() != p->value.size()) {
        p->opt_m = MatX<S>::Zero(p->value.rows(), p->value.cols());
        p->opt_v = MatX<S>::Zero(p->value.rows(), p->value.cols());
      }
      if (kind == Kind::adam) {
        const S b1 = static_cast<S>(beta1), b2 = static_cast<S>(beta2);
        p->opt_m = b1 * p->opt_m + (S(1) - b1) * static_cast<S>(scale) * p->grad;
        p->opt_v.array() = b2 * p->opt_v.array() +
                           (S(1) - b2) * (static_cast<S>(scale) * p->grad).array().square();
        const double mhat = 1.0 - std::pow(beta1, static_cast<double>(t));
        const double vhat = 1.0 - std::pow(beta2, static_cast<double>(t));
        const S step_lr = static_cast<S>(lr / mhat);
        const S vscale = static_cast<S>(1.0 / std::sqrt(vhat));
        p->value.array() -=
            step_lr * p->opt_m.array() /
            ((p->opt_v.array().sqrt() * vscale) + static_cast<S>(eps));
      } else {
        p->opt_m = static_cast<S>(beta1) * p->opt_m +
                   static_cast<S>(scale) * p->grad;
        p->value -= static_cast<S>(lr) * p->opt_m;
      }
      p->zero_grad();
    }
    return norm;
  }
};

template <class S>
void zero_grads(const std::vector<Parameter<S>*>& params) {
  for (Parameter<S>* p : params) p->zero_grad();
}

template <class S>
void set_trainable(const std::vector<Parameter<S>*>& params, bool trainable) {
  for (Parameter<S>* p : params) p->trainable = trainable;
}

}  // namespace trajgan
