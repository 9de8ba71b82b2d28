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

#ifndef INCE__AUTODIFF_HPP_
#define INCE__AUTODIFF_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ince/tensor.hpp"

namespace ince
{

using Index = std::vector<std::size_t>;
using IndexRef = std::shared_ptr<const Index>;

/// Handle to a node of a Graph.
struct Var
{
  int id = -1;
  bool valid() const { return id >= 0; }
};

enum class OpKind
{
  Constant,
  Parameter,
  MatMul,
  Add,
  AddBias,
  Scale,
  Relu,
  ConcatCols,
  ConcatRows,
  GatherRows,
  ScatterAddRows,
  SliceRows,
  InterleaveRows,
  Reshape,
  SoftmaxRows,
  Sum,
  Mse,
  SoftmaxCrossEntropy,
  BatchedMatMul,
};

const char * op_name(OpKind op);

/// Reverse-mode tape.
///
/// Nodes are appended in evaluation order, so the node list is already a
/// topological order and backward() is a single reverse sweep. A graph is
/// built per forward pass and thrown away afterwards; parameters live outside
/// it and receive their gradients in Parameter::grad.
class Graph
{
public:
  explicit Graph(bool check_finite = true) : check_finite_(check_finite) {}

  Graph(const Graph &) = delete;
  Graph & operator=(const Graph &) = delete;

  Var constant(Tensor value);
  /// Leaf that records a gradient in the graph without being a Parameter.
  Var variable(Tensor value);
  Var param(Parameter & p);

  /// a (R x k) times b (k x n).
  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  /// a (R x n) plus bias (n) broadcast over rows.
  Var add_bias(Var a, Var bias);
  Var scale(Var a, double s);
  /// relu'(0) = 0; NaN inputs propagate.
  Var relu(Var a);
  Var concat_cols(std::span<const Var> parts);
  Var concat_rows(std::span<const Var> parts);
  /// out[i] = a[index[i]].
  Var gather_rows(Var a, IndexRef index);
  /// out[index[i]] += a[i], with out_rows rows.
  Var scatter_add_rows(Var a, IndexRef index, std::size_t out_rows);
  Var slice_rows(Var a, std::size_t begin, std::size_t end);
  /// parts[p] are R x c; out is (R*P) x c with out[r*P + p] = parts[p][r].
  Var interleave_rows(std::span<const Var> parts);
  Var reshape(Var a, Shape shape);
  Var softmax_rows(Var a);
  Var sum(Var a);
  /// Mean squared error over all elements.
  Var mse(Var pred, const Tensor & target);
  /// Mean softmax cross-entropy of logits (N x C) against class labels.
  Var softmax_cross_entropy(Var logits, std::span<const int> labels);
  /// Per-block product of row-blocked matrices: a holds `batches` blocks of
  /// rows, b likewise; out block = A_b * B_b, or A_b * B_b^T when transpose_b.
  Var batched_matmul(Var a, Var b, std::size_t batches, bool transpose_b);

  /// Invalidated when further ops are recorded on this graph.
  const Tensor & value(Var v) const { return nodes_.at(v.id).value; }
  /// Gradient accumulated by backward(); empty tensor if none reached the node.
  const Tensor & grad(Var v) const { return nodes_.at(v.id).grad; }
  OpKind op(Var v) const { return nodes_.at(v.id).op; }
  std::size_t size() const { return nodes_.size(); }

  /// Propagates d(loss)/d(node) to every node and accumulates into the
  /// grad of each Parameter reached. The loss must be a single element.
  void backward(Var loss);

  /// Hash of all relu activation masks evaluated so far.
  std::uint64_t relu_signature() const { return relu_signature_; }

private:
  struct Node
  {
    OpKind op;
    std::vector<int> parents;
    Tensor value;
    Tensor grad;
    bool requires_grad = false;
    Parameter * param = nullptr;
    std::function<void(Graph &, const Node &)> backward;
  };

  Var push(OpKind op, std::vector<int> parents, Tensor value,
    std::function<void(Graph &, const Node &)> backward);
  Tensor & grad_buffer(int id);
  const Node & node(Var v) const { return nodes_.at(v.id); }
  void check_var(Var v) const;

  bool check_finite_;
  std::uint64_t relu_signature_ = 1469598103934665603ull;
  std::vector<Node> nodes_;
};

}  // namespace ince

#endif  // INCE__AUTODIFF_HPP_
