// Copyright 2026 The INCE Authors
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

#include "ince/autodiff.hpp"

#include <algorithm>
#include <cmath>

#include "ince/errors.hpp"

namespace ince
{

const char * op_name(OpKind op)
{
  switch (op) {
    case OpKind::Constant: return "constant";
    case OpKind::Parameter: return "parameter";
    case OpKind::MatMul: return "matmul";
    case OpKind::Add: return "add";
    case OpKind::AddBias: return "add_bias";
    case OpKind::Scale: return "scale";
    case OpKind::Relu: return "relu";
    case OpKind::ConcatCols: return "concat_cols";
    case OpKind::ConcatRows: return "concat_rows";
    case OpKind::GatherRows: return "gather_rows";
    case OpKind::ScatterAddRows: return "scatter_add_rows";
    case OpKind::SliceRows: return "slice_rows";
    case OpKind::InterleaveRows: return "interleave_rows";
    case OpKind::Reshape: return "reshape";
    case OpKind::SoftmaxRows: return "softmax_rows";
    case OpKind::Sum: return "sum";
    case OpKind::Mse: return "mse";
    case OpKind::SoftmaxCrossEntropy: return "softmax_cross_entropy";
    case OpKind::BatchedMatMul: return "batched_matmul";
  }
  return "unknown";
}

void Graph::check_var(Var v) const
{
  if (v.id < 0 || static_cast<std::size_t>(v.id) >= nodes_.size()) {
    throw ContractError("variable does not belong to this graph");
  }
}

Var Graph::push(
  OpKind op, std::vector<int> parents, Tensor value,
  std::function<void(Graph &, const Node &)> backward)
{
  if (check_finite_ && !value.all_finite()) {
    throw NumericError(std::string("non-finite value produced by ") + op_name(op));
  }
  Node n;
  n.op = op;
  n.requires_grad = false;
  for (int p : parents) n.requires_grad = n.requires_grad || nodes_[p].requires_grad;
  n.parents = std::move(parents);
  n.value = std::move(value);
  n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Tensor & Graph::grad_buffer(int id)
{
  Node & n = nodes_[id];
  if (n.grad.size() != n.value.size() || n.grad.shape() != n.value.shape()) {
    n.grad = Tensor(n.value.shape(), 0.0);
  }
  return n.grad;
}

Var Graph::constant(Tensor value)
{
  return push(OpKind::Constant, {}, std::move(value), nullptr);
}

Var Graph::variable(Tensor value)
{
  Var v = push(OpKind::Constant, {}, std::move(value), nullptr);
  nodes_[v.id].requires_grad = true;
  return v;
}

Var Graph::param(Parameter & p)
{
  Var v = push(OpKind::Parameter, {}, p.value, nullptr);
  nodes_[v.id].requires_grad = p.requires_grad;
  nodes_[v.id].param = &p;
  return v;
}

Var Graph::matmul(Var a, Var b)
{
  check_var(a);
  check_var(b);
  const Tensor & va = value(a);
  const Tensor & vb = value(b);
  if (va.cols() != vb.rows() || vb.shape().size() > 2) {
    throw ContractError(
      "matmul shape mismatch: " + shape_string(va.shape()) + " x " + shape_string(vb.shape()));
  }
  Shape out_shape = va.shape();
  if (out_shape.size() < 2) out_shape = {1, va.cols()};
  out_shape.back() = vb.cols();
  Tensor out(out_shape);
  out.matrix().noalias() = va.matrix() * vb.matrix();
  return push(OpKind::MatMul, {a.id, b.id}, std::move(out), [](Graph & g, const Node & self) {
    const int ia = self.parents[0];
    const int ib = self.parents[1];
    if (g.nodes_[ia].requires_grad) {
      g.grad_buffer(ia).matrix().noalias() += self.grad.matrix() * g.nodes_[ib].value.matrix().transpose();
    }
    if (g.nodes_[ib].requires_grad) {
      g.grad_buffer(ib).matrix().noalias() += g.nodes_[ia].value.matrix().transpose() * self.grad.matrix();
    }
  });
}

Var Graph::add(Var a, Var b)
{
  check_var(a);
  check_var(b);
  if (value(a).size() != value(b).size()) {
    throw ContractError(
      "add shape mismatch: " + shape_string(value(a).shape()) + " vs " +
      shape_string(value(b).shape()));
  }
  Tensor out = value(a);
  out.matrix().array() += value(b).reshaped(out.shape()).matrix().array();
  return push(OpKind::Add, {a.id, b.id}, std::move(out), [](Graph & g, const Node & self) {
    for (int p : self.parents) {
      if (!g.nodes_[p].requires_grad) continue;
      Tensor & gp = g.grad_buffer(p);
      for (std::size_t i = 0; i < gp.size(); ++i) gp[i] += self.grad[i];
    }
  });
}

Var Graph::add_bias(Var a, Var bias)
{
  check_var(a);
  check_var(bias);
  const Tensor & va = value(a);
  const Tensor & vb = value(bias);
  if (vb.size() != va.cols()) {
    throw ContractError(
      "add_bias: bias of size " + std::to_string(vb.size()) + " for " +
      std::to_string(va.cols()) + " columns");
  }
  Tensor out = va;
  ConstMatrixMap brow(vb.ptr(), 1, static_cast<Eigen::Index>(vb.size()));
  out.matrix().rowwise() += brow.row(0);
  return push(OpKind::AddBias, {a.id, bias.id}, std::move(out), [](Graph & g, const Node & self) {
    const int ia = self.parents[0];
    const int ib = self.parents[1];
    if (g.nodes_[ia].requires_grad) {
      Tensor & ga = g.grad_buffer(ia);
      ga.matrix() += self.grad.matrix();
    }
    if (g.nodes_[ib].requires_grad) {
      Tensor & gb = g.grad_buffer(ib);
      MatrixMap brow(gb.ptr(), 1, static_cast<Eigen::Index>(gb.size()));
      brow.row(0) += self.grad.matrix().colwise().sum();
    }
  });
}

Var Graph::scale(Var a, double s)
{
  check_var(a);
  Tensor out = value(a);
  out.matrix() *= s;
  return push(OpKind::Scale, {a.id}, std::move(out), [s](Graph & g, const Node & self) {
    const int ia = self.parents[0];
    if (g.nodes_[ia].requires_grad) g.grad_buffer(ia).matrix() += s * self.grad.matrix();
  });
}

Var Graph::relu(Var a)
{
  check_var(a);
  Tensor out = value(a);
  std::uint64_t h = relu_signature_;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const bool on = out[i] > 0.0;
    // NaN passes through so non-finite inputs stay visible downstream.
    if (!on && !std::isnan(out[i])) out[i] = 0.0;
    h = (h ^ static_cast<std::uint64_t>(on)) * 1099511628211ull;
  }
  relu_signature_ = h;
  return push(OpKind::Relu, {a.id}, std::move(out), [](Graph & g, const Node & self) {
    const int ia = self.parents[0];
    if (!g.nodes_[ia].requires_grad) return;
    Tensor & ga = g.grad_buffer(ia);
    const Tensor & x = g.nodes_[ia].value;
    for (std::size_t i = 0; i < ga.size(); ++i) {
      if (x[i] > 0.0) ga[i] += self.grad[i];
    }
  });
}

Var Graph::concat_cols(std::span<const Var> parts)
{
  if (parts.empty()) throw ContractError("concat_cols of nothing");
  std::vector<int> ids;
  std::size_t rows = value(parts[0]).rows();
  std::size_t cols = 0;
  for (Var p : parts) {
    check_var(p);
    if (value(p).rows() != rows) throw ContractError("concat_cols row count mismatch");
    cols += value(p).cols();
    ids.push_back(p.id);
  }
  Tensor out({rows, cols});
  Eigen::Index off = 0;
  for (Var p : parts) {
    const Tensor & vp = value(p);
    out.matrix().middleCols(off, static_cast<Eigen::Index>(vp.cols())) = vp.matrix();
    off += static_cast<Eigen::Index>(vp.cols());
  }
  return push(OpKind::ConcatCols, std::move(ids), std::move(out), [](Graph & g, const Node & self) {
    Eigen::Index off = 0;
    for (int p : self.parents) {
      const auto c = static_cast<Eigen::Index>(g.nodes_[p].value.cols());
      if (g.nodes_[p].requires_grad) {
        g.grad_buffer(p).matrix() += self.grad.matrix().middleCols(off, c);
      }
      off += c;
    }
  });
}

Var Graph::concat_rows(std::span<const Var> parts)
{
  if (parts.empty()) throw ContractError("concat_rows of nothing");
  const std::size_t cols = value(parts[0]).cols();
  std::size_t rows = 0;
  std::vector<int> ids;
  for (Var p : parts) {
    check_var(p);
    if (value(p).cols() != cols) throw ContractError("concat_rows column count mismatch");
    rows += value(p).rows();
    ids.push_back(p.id);
  }
  Tensor out({rows, cols});
  std::size_t off = 0;
  for (Var p : parts) {
    const Tensor & vp = value(p);
    std::copy_n(vp.ptr(), vp.size(), out.ptr() + off);
    off += vp.size();
  }
  return push(OpKind::ConcatRows, std::move(ids), std::move(out), [](Graph & g, const Node & self) {
    std::size_t off = 0;
    for (int p : self.parents) {
      const std::size_t n = g.nodes_[p].value.size();
      if (g.nodes_[p].requires_grad) {
        Tensor & gp = g.grad_buffer(p);
        for (std::size_t i = 0; i < n; ++i) gp[i] += self.grad[off + i];
      }
      off += n;
    }
  });
}

Var Graph::gather_rows(Var a, IndexRef index)
{
  check_var(a);
  const Tensor & va = value(a);
  const std::size_t cols = va.cols();
  const std::size_t rows = va.rows();
  Tensor out({index->size(), cols});
  for (std::size_t i = 0; i < index->size(); ++i) {
    const std::size_t r = (*index)[i];
    if (r >= rows) {
      throw ContractError(
        "gather_rows index " + std::to_string(r) + " out of range " + std::to_string(rows));
    }
    std::copy_n(va.ptr() + r * cols, cols, out.ptr() + i * cols);
  }
  return push(OpKind::GatherRows, {a.id}, std::move(out), [index](Graph & g, const Node & self) {
    const int ia = self.parents[0];
    if (!g.nodes_[ia].requires_grad) return;
    Tensor & ga = g.grad_buffer(ia);
    const std::size_t cols = ga.cols();
    for (std::size_t i = 0; i < index->size(); ++i) {
      double * dst = ga.ptr() + (*index)[i] * cols;
      const double * src = self.grad.ptr() + i * cols;
      for (std::size_t c = 0; c < cols; ++c) dst[c] += src[c];
    }
  });
}

Var Graph::scatter_add_rows(Var a, IndexRef index, std::size_t out_rows)
{
  check_var(a);
  const Tensor & va = value(a);
  if (index->size() != va.rows()) {
    throw ContractError("scatter_add_rows needs one index per input row");
  }
  const std::size_t cols = va.cols();
  Tensor out({out_rows, cols});
  for (std::size_t i = 0; i < index->size(); ++i) {
    const std::size_t r = (*index)[i];
    if (r >= out_rows) throw ContractError("scatter_add_rows index out of range");
    double * dst = out.ptr() + r * cols;
    const double * src = va.ptr() + i * cols;
    for (std::size_t c = 0; c < cols; ++c) dst[c] += src[c];
  }
  return push(OpKind::ScatterAddRows, {a.id}, std::move(out), [index](Graph & g, const Node & self) {
    const int ia = self.parents[0];
    if (!g.nodes_[ia].requires_grad) return;
    Tensor & ga = g.grad_buffer(ia);
    const std::size_t cols = ga.cols();
    for (std::size_t i = 0; i < index->size(); ++i) {
      double * dst = ga.ptr() + i * cols;
      const double * src = self.grad.ptr() + (*index)[i] * cols;
      for (std::size_t c = 0; c < cols; ++c) dst[c] += src[c];
    }
  });
}

Var Graph::slice_rows(Var a, std::size_t begin, std::size_t end)
{
  check_var(a);
  const Tensor & va = value(a);
  if (begin > end || end > va.rows()) throw ContractError("slice_rows out of range");
  const std::size_t cols = va.cols();
  Tensor out({end - begin, cols});
  std::copy_n(va.ptr() + begin * cols, (end - begin) * cols, out.ptr());
  return push(OpKind::SliceRows, {a.id}, std::move(out), [begin](Graph & g, const Node & self) {
    const int ia = self.parents[0];
    if (!g.nodes_[ia].requires_grad) return;
    Tensor & ga = g.grad_buffer(ia);
    double * dst = ga.ptr() + begin * ga.cols();
    for (std::size_t i = 0; i < self.grad.size(); ++i) dst[i] += self.grad[i];
  });
}

Var Graph::interleave_rows(std::span<const Var> parts)
{
  if (parts.empty()) throw ContractError("interleave_rows of nothing");
  const std::size_t rows = value(parts[0]).rows();
  const std::size_t cols = value(parts[0]).cols();
  std::vector<int> ids;
  for (Var p : parts) {
    check_var(p);
    if (value(p).rows() != rows || value(p).cols() != cols) {
      throw ContractError("interleave_rows parts must share a shape");
    }
    ids.push_back(p.id);
  }
  const std::size_t np = parts.size();
  Tensor out({rows * np, cols});
  for (std::size_t p = 0; p < np; ++p) {
    const Tensor & vp = value(parts[p]);
    for (std::size_t r = 0; r < rows; ++r) {
      std::copy_n(vp.ptr() + r * cols, cols, out.ptr() + (r * np + p) * cols);
    }
  }
  return push(OpKind::InterleaveRows, std::move(ids), std::move(out), [](Graph & g, const Node & self) {
    const std::size_t np = self.parents.size();
    const std::size_t cols = self.value.cols();
    const std::size_t rows = self.value.rows() / np;
    for (std::size_t p = 0; p < np; ++p) {
      const int ip = self.parents[p];
      if (!g.nodes_[ip].requires_grad) continue;
      Tensor & gp = g.grad_buffer(ip);
      for (std::size_t r = 0; r < rows; ++r) {
        const double * src = self.grad.ptr() + (r * np + p) * cols;
        double * dst = gp.ptr() + r * cols;
        for (std::size_t c = 0; c < cols; ++c) dst[c] += src[c];
      }
    }
  });
}

Var Graph::reshape(Var a, Shape shape)
{
  check_var(a);
  Tensor out = value(a).reshaped(std::move(shape));
  return push(OpKind::Reshape, {a.id}, std::move(out), [](Graph & g, const Node & self) {
    const int ia = self.parents[0];
    if (!g.nodes_[ia].requires_grad) return;
    Tensor & ga = g.grad_buffer(ia);
    for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += self.grad[i];
  });
}

Var Graph::softmax_rows(Var a)
{
  check_var(a);
  Tensor out = value(a);
  auto m = out.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const double mx = m.row(r).maxCoeff();
    m.row(r) = (m.row(r).array() - mx).exp();
    m.row(r) /= m.row(r).sum();
  }
  return push(OpKind::SoftmaxRows, {a.id}, std::move(out), [](Graph & g, const Node & self) {
    const int ia = self.parents[0];
    if (!g.nodes_[ia].requires_grad) return;
    auto y = self.value.matrix();
    auto dy = self.grad.matrix();
    auto ga = g.grad_buffer(ia).matrix();
    for (Eigen::Index r = 0; r < y.rows(); ++r) {
      const double dot = y.row(r).dot(dy.row(r));
      ga.row(r).array() += y.row(r).array() * (dy.row(r).array() - dot);
    }
  });
}

Var Graph::sum(Var a)
{
  check_var(a);
  double s = 0.0;
  for (double v : value(a).data()) s += v;
  return push(OpKind::Sum, {a.id}, Tensor::scalar(s), [](Graph & g, const Node & self) {
    const int ia = self.parents[0];
    if (!g.nodes_[ia].requires_grad) return;
    Tensor & ga = g.grad_buffer(ia);
    const double d = self.grad[0];
    for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += d;
  });
}

Var Graph::mse(Var pred, const Tensor & target)
{
  check_var(pred);
  const Tensor & p = value(pred);
  if (p.size() != target.size()) {
    throw ContractError(
      "mse: prediction " + shape_string(p.shape()) + " vs target " + shape_string(target.shape()));
  }
  if (p.size() == 0) throw ContractError("mse of empty batch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - target[i];
    s += d * d;
  }
  const double n = static_cast<double>(p.size());
  return push(OpKind::Mse, {pred.id}, Tensor::scalar(s / n), [target, n](Graph & g, const Node & self) {
    const int ip = self.parents[0];
    if (!g.nodes_[ip].requires_grad) return;
    Tensor & gp = g.grad_buffer(ip);
    const Tensor & p = g.nodes_[ip].value;
    const double d = self.grad[0] * 2.0 / n;
    for (std::size_t i = 0; i < gp.size(); ++i) gp[i] += d * (p[i] - target[i]);
  });
}

Var Graph::softmax_cross_entropy(Var logits, std::span<const int> labels)
{
  check_var(logits);
  const Tensor & z = value(logits);
  const std::size_t n = z.rows();
  const std::size_t c = z.cols();
  if (labels.size() != n || n == 0) throw ContractError("cross-entropy needs one label per row");
  Tensor prob({n, c});
  double loss = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    if (labels[r] < 0 || static_cast<std::size_t>(labels[r]) >= c) {
      throw ContractError("cross-entropy label " + std::to_string(labels[r]) + " out of range");
    }
    const double * zr = z.ptr() + r * c;
    const double mx = *std::max_element(zr, zr + c);
    double se = 0.0;
    for (std::size_t k = 0; k < c; ++k) se += std::exp(zr[k] - mx);
    const double lse = mx + std::log(se);
    for (std::size_t k = 0; k < c; ++k) prob.at(r, k) = std::exp(zr[k] - lse);
    loss += lse - zr[labels[r]];
  }
  std::vector<int> lab(labels.begin(), labels.end());
  return push(
    OpKind::SoftmaxCrossEntropy, {logits.id}, Tensor::scalar(loss / static_cast<double>(n)),
    [prob = std::move(prob), lab = std::move(lab)](Graph & g, const Node & self) {
      const int iz = self.parents[0];
      if (!g.nodes_[iz].requires_grad) return;
      Tensor & gz = g.grad_buffer(iz);
      const std::size_t n = prob.rows();
      const std::size_t c = prob.cols();
      const double d = self.grad[0] / static_cast<double>(n);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = 0; k < c; ++k) {
          const double onehot = static_cast<int>(k) == lab[r] ? 1.0 : 0.0;
          gz.at(r, k) += d * (prob.at(r, k) - onehot);
        }
      }
    });
}

Var Graph::batched_matmul(Var a, Var b, std::size_t batches, bool transpose_b)
{
  check_var(a);
  check_var(b);
  const Tensor & va = value(a);
  const Tensor & vb = value(b);
  if (batches == 0 || va.rows() % batches || vb.rows() % batches) {
    throw ContractError("batched_matmul: rows not divisible by batch count");
  }
  const auto ra = static_cast<Eigen::Index>(va.rows() / batches);
  const auto rb = static_cast<Eigen::Index>(vb.rows() / batches);
  const auto ka = static_cast<Eigen::Index>(va.cols());
  const auto cb = static_cast<Eigen::Index>(vb.cols());
  if (transpose_b ? (cb != ka) : (rb != ka)) {
    throw ContractError("batched_matmul inner dimension mismatch");
  }
  const Eigen::Index oc = transpose_b ? rb : cb;
  Tensor out({batches * static_cast<std::size_t>(ra), static_cast<std::size_t>(oc)});
  auto A = va.matrix();
  auto B = vb.matrix();
  auto O = out.matrix();
  for (std::size_t k = 0; k < batches; ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    if (transpose_b) {
      O.middleRows(i * ra, ra).noalias() = A.middleRows(i * ra, ra) * B.middleRows(i * rb, rb).transpose();
    } else {
      O.middleRows(i * ra, ra).noalias() = A.middleRows(i * ra, ra) * B.middleRows(i * rb, rb);
    }
  }
  return push(
    OpKind::BatchedMatMul, {a.id, b.id}, std::move(out),
    [batches, transpose_b, ra, rb](Graph & g, const Node & self) {
      const int ia = self.parents[0];
      const int ib = self.parents[1];
      auto A = g.nodes_[ia].value.matrix();
      auto B = g.nodes_[ib].value.matrix();
      auto dO = self.grad.matrix();
      const bool need_a = g.nodes_[ia].requires_grad;
      const bool need_b = g.nodes_[ib].requires_grad;
      for (std::size_t k = 0; k < batches; ++k) {
        const auto i = static_cast<Eigen::Index>(k);
        auto dOk = dO.middleRows(i * ra, ra);
        if (need_a) {
          auto dA = g.grad_buffer(ia).matrix().middleRows(i * ra, ra);
          if (transpose_b) {
            dA.noalias() += dOk * B.middleRows(i * rb, rb);
          } else {
            dA.noalias() += dOk * B.middleRows(i * rb, rb).transpose();
          }
        }
        if (need_b) {
          auto dB = g.grad_buffer(ib).matrix().middleRows(i * rb, rb);
          if (transpose_b) {
            dB.noalias() += dOk.transpose() * A.middleRows(i * ra, ra);
          } else {
            dB.noalias() += A.middleRows(i * ra, ra).transpose() * dOk;
          }
        }
      }
    });
}

void Graph::backward(Var loss)
{
  check_var(loss);
  if (value(loss).size() != 1) {
    throw ContractError("backward needs a scalar loss, got " + shape_string(value(loss).shape()));
  }
  for (Node & n : nodes_) n.grad = Tensor();
  grad_buffer(loss.id)[0] = 1.0;
  for (int id = loss.id; id >= 0; --id) {
    Node & n = nodes_[id];
    if (!n.requires_grad || n.grad.empty()) continue;
    if (check_finite_ && !n.grad.all_finite()) {
      throw NumericError(std::string("non-finite gradient at ") + op_name(n.op));
    }
    if (n.backward) n.backward(*this, n);
    if (n.param != nullptr) {
      Tensor & pg = n.param->grad;
      if (pg.shape() != n.param->value.shape()) pg = Tensor(n.param->value.shape(), 0.0);
      for (std::size_t i = 0; i < pg.size(); ++i) pg[i] += n.grad[i];
    }
  }
}

}  // namespace ince
