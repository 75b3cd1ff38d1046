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

#include <Eigen/Core>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace trajgan {

template <class S>
using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

// A learned tensor with its gradient accumulator and optimizer slots.
template <class S>
struct Parameter {
  std::string name;
  MatX<S> value;
  MatX<S> grad;
  MatX<S> opt_m, opt_v;  // first/second moment (or momentum buffer)
  bool trainable = true;

  void zero_grad() { grad = MatX<S>::Zero(value.rows(), value.cols()); }
  long size() const { return value.size(); }
};

// Reverse-mode tape over dense matrices. Columns are batch elements. The
// graph is rebuilt every step; node storage is recycled across reset() so
// steady-state training does not allocate.
template <class S>
class Tape {
 public:
  enum class Op : uint8_t {
    kInput,
    kParam,
    kMatMul,      // a * b
    kAdd,         // a + b, same shape
    kAddColBias,  // a + b, b is a column broadcast over columns of a
    kSub,
    kHadamard,
    kScale,       // scalar * a
    kSigmoid,
    kTanh,
    kLeakyRelu,   // slope in scalar
    kLogSigmoid,
    kSquare,
    kConcatRows,
    kConcatCols,
    kSliceRows,   // rows [r0, r0+rn)
    kGatherCols,  // columns listed in idx (scatter-add backward)
    kSoftmaxCols, // per-column softmax
    kTranspose,
    kColwiseSum,  // R x C -> 1 x C
    kSumAll,      // -> 1 x 1
    kMeanAll,     // -> 1 x 1
  };

  struct Node {
    Op op = Op::kInput;
    int a = -1, b = -1;
    S scalar{};
    int r0 = 0, rn = 0;
    std::vector<int> idx;  // concat parents or gather columns
    Parameter<S>* param = nullptr;
    MatX<S> value;
    MatX<S> grad;
    bool needs_grad = false;
    bool grad_live = false;
  };

  // Recycles node storage; logical length drops to zero.
  void reset() { used_ = 0; }

  // When disabled, parameters enter as plain constants and backward() is
  // not available for the nodes built while disabled.
  void set_grad_enabled(bool enabled) { grad_enabled_ = enabled; }
  bool grad_enabled() const { return grad_enabled_; }

  size_t size() const { return used_; }
  const MatX<S>& value(int id) const { return nodes_[id].value; }
  const MatX<S>& grad(int id) const { return nodes_[id].grad; }
  bool needs_grad(int id) const { return nodes_[id].needs_grad; }

  int input(const MatX<S>& v) {
    Node& n = push(Op::kInput, v.rows(), v.cols());
    n.value = v;
    n.needs_grad = false;
    return last_id();
  }

  int zeros(int rows, int cols) {
    Node& n = push(Op::kInput, rows, cols);
    n.value.setZero();
    n.needs_grad = false;
    return last_id();
  }

  int param(Parameter<S>& p) {
    Node& n = push(Op::kParam, p.value.rows(), p.value.cols());
    n.value = p.value;
    n.param = &p;
    n.needs_grad = grad_enabled_;
    return last_id();
  }

  int matmul(int a, int b) {
    assert(nodes_[a].value.cols() == nodes_[b].value.rows());
    Node& n = push(Op::kMatMul, nodes_[a].value.rows(), nodes_[b].value.cols(), a, b);
    n.value.noalias() = nodes_[a].value * nodes_[b].value;
    return last_id();
  }

  int add(int a, int b) {
    assert(same_shape(a, b));
    Node& n = push(Op::kAdd, rows(a), cols(a), a, b);
    n.value = nodes_[a].value + nodes_[b].value;
    return last_id();
  }

  int add_col_bias(int a, int bias) {
    assert(nodes_[bias].value.cols() == 1 && nodes_[bias].value.rows() == rows(a));
    Node& n = push(Op::kAddColBias, rows(a), cols(a), a, bias);
    n.value = nodes_[a].value.colwise() + nodes_[bias].value.col(0);
    return last_id();
  }

  int sub(int a, int b) {
    assert(same_shape(a, b));
    Node& n = push(Op::kSub, rows(a), cols(a), a, b);
    n.value = nodes_[a].value - nodes_[b].value;
    return last_id();
  }

  int hadamard(int a, int b) {
    assert(same_shape(a, b));
    Node& n = push(Op::kHadamard, rows(a), cols(a), a, b);
    n.value = nodes_[a].value.cwiseProduct(nodes_[b].value);
    return last_id();
  }

  int scale(int a, S s) {
    Node& n = push(Op::kScale, rows(a), cols(a), a);
    n.scalar = s;
    n.value = nodes_[a].value * s;
    return last_id();
  }

  int sigmoid(int a) {
    Node& n = push(Op::kSigmoid, rows(a), cols(a), a);
    n.value = nodes_[a].value.unaryExpr([](S x) { return sigmoid_scalar(x); });
    return last_id();
  }

  int tanh(int a) {
    Node& n = push(Op::kTanh, rows(a), cols(a), a);
    n.value = nodes_[a].value.array().tanh().matrix();
    return last_id();
  }

  int leaky_relu(int a, S slope) {
    Node& n = push(Op::kLeakyRelu, rows(a), cols(a), a);
    n.scalar = slope;
    n.value = nodes_[a].value.unaryExpr([slope](S x) { return x > S(0) ? x : slope * x; });
    return last_id();
  }

  int logsigmoid(int a) {
    Node& n = push(Op::kLogSigmoid, rows(a), cols(a), a);
    n.value = nodes_[a].value.unaryExpr([](S x) { return logsigmoid_scalar(x); });
    return last_id();
  }

  int square(int a) {
    Node& n = push(Op::kSquare, rows(a), cols(a), a);
    n.value = nodes_[a].value.cwiseProduct(nodes_[a].value);
    return last_id();
  }

  int concat_rows(const std::vector<int>& parts) {
    assert(!parts.empty());
    int total = 0;
    for (int p : parts) total += rows(p);
    Node& n = push(Op::kConcatRows, total, cols(parts[0]));
    n.idx = parts;
    int r = 0;
    for (int p : parts) {
      assert(cols(p) == cols(parts[0]));
      n.value.middleRows(r, rows(p)) = nodes_[p].value;
      n.needs_grad = n.needs_grad || nodes_[p].needs_grad;
      r += rows(p);
    }
    return last_id();
  }

  int concat_cols(const std::vector<int>& parts) {
    assert(!parts.empty());
    int total = 0;
    for (int p : parts) total += cols(p);
    Node& n = push(Op::kConcatCols, rows(parts[0]), total);
    n.idx = parts;
    int c = 0;
    for (int p : parts) {
      assert(rows(p) == rows(parts[0]));
      n.value.middleCols(c, cols(p)) = nodes_[p].value;
      n.needs_grad = n.needs_grad || nodes_[p].needs_grad;
      c += cols(p);
    }
    return last_id();
  }

  int slice_rows(int a, int r0, int rn) {
    assert(r0 >= 0 && r0 + rn <= rows(a));
    Node& n = push(Op::kSliceRows, rn, cols(a), a);
    n.r0 = r0;
    n.rn = rn;
    n.value = nodes_[a].value.middleRows(r0, rn);
    return last_id();
  }

  int gather_cols(int a, const std::vector<int>& columns) {
    Node& n = push(Op::kGatherCols, rows(a), static_cast<int>(columns.size()), a);
    n.idx = columns;
    for (size_t j = 0; j < columns.size(); ++j) {
      assert(columns[j] >= 0 && columns[j] < cols(a));
      n.value.col(j) = nodes_[a].value.col(columns[j]);
    }
    return last_id();
  }

  int softmax_cols(int a) {
    Node& n = push(Op::kSoftmaxCols, rows(a), cols(a), a);
    for (int j = 0; j < cols(a); ++j) {
      const auto col = nodes_[a].value.col(j);
      const S max = col.maxCoeff();
      Eigen::Matrix<S, Eigen::Dynamic, 1> e = (col.array() - max).exp();
      n.value.col(j) = e / e.sum();
    }
    return last_id();
  }

  int transpose(int a) {
    Node& n = push(Op::kTranspose, cols(a), rows(a), a);
    n.value = nodes_[a].value.transpose();
    return last_id();
  }

  int colwise_sum(int a) {
    Node& n = push(Op::kColwiseSum, 1, cols(a), a);
    n.value = nodes_[a].value.colwise().sum();
    return last_id();
  }

  int sum_all(int a) {
    Node& n = push(Op::kSumAll, 1, 1, a);
    n.value(0, 0) = nodes_[a].value.sum();
    return last_id();
  }

  int mean_all(int a) {
    Node& n = push(Op::kMeanAll, 1, 1, a);
    n.value(0, 0) = nodes_[a].value.mean();
    return last_id();
  }

  S scalar_value(int id) const {
    assert(rows(id) == 1 && cols(id) == 1);
    return nodes_[id].value(0, 0);
  }

  // Reverse pass from a 1x1 root. Accumulates into Parameter::grad for
  // trainable parameter leaves.
  void backward(int root);

 private:
  static S sigmoid_scalar(S x) {
    if (x >= S(0)) {
      const S e = std::exp(-x);
      return S(1) / (S(1) + e);
    }
    const S e = std::exp(x);
    return e / (S(1) + e);
  }

  static S logsigmoid_scalar(S x) {
    // log(1/(1+e^-x)) computed without overflow on either tail.
    if (x >= S(0)) return -std::log1p(std::exp(-x));
    return x - std::log1p(std::exp(x));
  }

  int rows(int id) const { return static_cast<int>(nodes_[id].value.rows()); }
  int cols(int id) const { return static_cast<int>(nodes_[id].value.cols()); }
  bool same_shape(int a, int b) const {
    return rows(a) == rows(b) && cols(a) == cols(b);
  }
  int last_id() const { return static_cast<int>(used_) - 1; }

  Node& push(Op op, int r, int c, int a = -1, int b = -1) {
    if (used_ == nodes_.size()) nodes_.emplace_back();
    Node& n = nodes_[used_++];
    n.op = op;
    n.a = a;
    n.b = b;
    n.scalar = S(0);
    n.r0 = n.rn = 0;
    n.idx.clear();
    n.param = nullptr;
    if (n.value.rows() != r || n.value.cols() != c) n.value.resize(r, c);
    n.needs_grad = (a >= 0 && nodes_[a].needs_grad) || (b >= 0 && nodes_[b].needs_grad);
    n.grad_live = false;
    return n;
  }

  MatX<S>& live_grad(int id) {
    Node& n = nodes_[id];
    if (!n.grad_live) {
      if (n.grad.rows() != n.value.rows() || n.grad.cols() != n.value.cols())
        n.grad.resize(n.value.rows(), n.value.cols());
      n.grad.setZero();
      n.grad_live = true;
    }
    return n.grad;
  }

  std::vector<Node> nodes_;
  size_t used_ = 0;
  bool grad_enabled_ = true;
};

template <class S>
void Tape<S>::backward(int root) {
  assert(root >= 0 && root < static_cast<int>(used_));
  assert(rows(root) == 1 && cols(root) == 1 && "backward root must be scalar");
  if (!nodes_[root].needs_grad) return;
  live_grad(root)(0, 0) = S(1);

  for (int id = root; id >= 0; --id) {
    Node& n = nodes_[id];
    if (!n.needs_grad || !n.grad_live) continue;
    const MatX<S>& g = n.grad;
    switch (n.op) {
      case Op::kInput:
        break;
      case Op::kParam:
        if (n.param->trainable) n.param->grad += g;
        break;
      case Op::kMatMul:
        if (nodes_[n.a].needs_grad)
          live_grad(n.a).noalias() += g * nodes_[n.b].value.transpose();
        if (nodes_[n.b].needs_grad)
          live_grad(n.b).noalias() += nodes_[n.a].value.transpose() * g;
        break;
      case Op::kAdd:
        if (nodes_[n.a].needs_grad) live_grad(n.a) += g;
        if (nodes_[n.b].needs_grad) live_grad(n.b) += g;
        break;
      case Op::kAddColBias:
        if (nodes_[n.a].needs_grad) live_grad(n.a) += g;
        if (nodes_[n.b].needs_grad) live_grad(n.b) += g.rowwise().sum();
        break;
      case Op::kSub:
        if (nodes_[n.a].needs_grad) live_grad(n.a) += g;
        if (nodes_[n.b].needs_grad) live_grad(n.b) -= g;
        break;
      case Op::kHadamard:
        if (nodes_[n.a].needs_grad) live_grad(n.a) += g.cwiseProduct(nodes_[n.b].value);
        if (nodes_[n.b].needs_grad) live_grad(n.b) += g.cwiseProduct(nodes_[n.a].value);
        break;
      case Op::kScale:
        if (nodes_[n.a].needs_grad) live_grad(n.a) += g * n.scalar;
        break;
      case Op::kSigmoid:
        if (nodes_[n.a].needs_grad)
          live_grad(n.a).array() +=
              g.array() * n.value.array() * (S(1) - n.value.array());
        break;
      case Op::kTanh:
        if (nodes_[n.a].needs_grad)
          live_grad(n.a).array() += g.array() * (S(1) - n.value.array().square());
        break;
      case Op::kLeakyRelu:
        if (nodes_[n.a].needs_grad) {
          const S slope = n.scalar;
          live_grad(n.a).array() +=
              g.array() * nodes_[n.a].value.unaryExpr([slope](S x) {
                return x > S(0) ? S(1) : slope;
              }).array();
        }
        break;
      case Op::kLogSigmoid:
        if (nodes_[n.a].needs_grad)
          live_grad(n.a).array() +=
              g.array() * nodes_[n.a].value.unaryExpr([](S x) {
                return sigmoid_scalar(-x);
              }).array();
        break;
      case Op::kSquare:
        if (nodes_[n.a].needs_grad)
          live_grad(n.a).array() += S(2) * g.array() * nodes_[n.a].value.array();
        break;
      case Op::kConcatRows: {
        int r = 0;
        for (int p : n.idx) {
          if (nodes_[p].needs_grad) live_grad(p) += g.middleRows(r, rows(p));
          r += rows(p);
        }
        break;
      }
      case Op::kConcatCols: {
        int c = 0;
        for (int p : n.idx) {
          if (nodes_[p].needs_grad) live_grad(p) += g.middleCols(c, cols(p));
          c += cols(p);
        }
        break;
      }
      case Op::kSliceRows:
        if (nodes_[n.a].needs_grad) live_grad(n.a).middleRows(n.r0, n.rn) += g;
        break;
      case Op::kGatherCols:
        if (nodes_[n.a].needs_grad) {
          MatX<S>& ga = live_grad(n.a);
          for (size_t j = 0; j < n.idx.size(); ++j) ga.col(n.idx[j]) += g.col(j);
        }
        break;
      case Op::kSoftmaxCols:
        if (nodes_[n.a].needs_grad) {
          MatX<S>& ga = live_grad(n.a);
          for (int j = 0; j < cols(id); ++j) {
            const auto y = n.value.col(j);
            const auto gj = g.col(j);
            const S dot = y.dot(gj);
            ga.col(j).array() += y.array() * (gj.array() - dot);
          }
        }
        break;
      case Op::kTranspose:
        if (nodes_[n.a].needs_grad) live_grad(n.a) += g.transpose();
        break;
      case Op::kColwiseSum:
        if (nodes_[n.a].needs_grad) live_grad(n.a).rowwise() += g.row(0);
        break;
      case Op::kSumAll:
        if (nodes_[n.a].needs_grad) live_grad(n.a).array() += g(0, 0);
        break;
      case Op::kMeanAll:
        if (nodes_[n.a].needs_grad)
          live_grad(n.a).array() += g(0, 0) / static_cast<S>(nodes_[n.a].value.size());
        break;
    }
  }
}

extern template class Tape<float>;
extern template class Tape<double>;

}  // namespace trajgan
