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

#ifndef INCE__INTERACTION_NETWORK_HPP_
#define INCE__INTERACTION_NETWORK_HPP_

#include <utility>
#include <vector>

#include "ince/autodiff.hpp"
#include "ince/layers.hpp"

namespace ince
{

/// Complete directed graph over M feature nodes plus the CLS node (index M).
/// Edges are every ordered pair (src, dst), src != dst, sorted src-major.
struct FeatureGraph
{
  std::size_t num_features = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  std::size_t num_nodes() const { return num_features + 1; }
  std::size_t cls() const { return num_features; }
  std::size_t num_edges() const { return edges.size(); }
  /// Position of edge (src, dst) in `edges`.
  std::size_t edge_index(std::size_t src, std::size_t dst) const;
};

FeatureGraph build_graph(std::size_t num_features);

/// Row indices of a feature graph replicated over a batch: node (b, j) is
/// row b*(M+1)+j, edge (b, e) is row b*E+e.
struct BatchedGraph
{
  FeatureGraph graph;
  std::size_t batch = 0;
  IndexRef src;
  IndexRef dst;
  /// Row of each batch element's CLS node.
  IndexRef cls_rows;
  /// Maps node rows to rows of concat_rows(columnar, cls).
  IndexRef node_source;

  BatchedGraph(const FeatureGraph & g, std::size_t batch);
};

/// One Interaction Network block:
///
///   e'  = MLP_E(n_src, n_dst[, e])
///   a_j = sum of e' over edges entering j
///   n'  = MLP_N(n_j, a_j)
///   n <- n + n',  e <- e + e'   (the first block has no input edges, e <- e')
///
/// Both MLPs have `depth` linear layers of width l with relu in between.
class InteractionLayer
{
public:
  InteractionLayer() = default;
  InteractionLayer(const std::string & name, std::size_t latent, std::size_t depth, bool first);

  struct Output
  {
    Var nodes;
    Var edges;
    /// e' before the residual, i.e. what each edge sends.
    Var messages;
  };

  /// `edges` must be invalid exactly for the first block.
  Output forward(Graph & g, Var nodes, Var edges, const BatchedGraph & bg);

  bool first() const { return first_; }
  Mlp & edge_mlp() { return edge_mlp_; }
  Mlp & node_mlp() { return node_mlp_; }
  const Mlp & edge_mlp() const { return edge_mlp_; }
  const Mlp & node_mlp() const { return node_mlp_; }
  void init(Rng & rng);
  void collect(std::vector<Parameter *> & out);

private:
  std::size_t latent_ = 0;
  bool first_ = true;
  Mlp edge_mlp_;
  Mlp node_mlp_;
};

struct EncoderOutput
{
  /// B x l.
  Var cls;
  /// (B*(M+1)) x l.
  Var nodes;
  /// (B*E) x l, invalid for encoders without edge states.
  Var edges;
  /// Last block's e', (B*E) x l.
  Var messages;
};

/// Stack of n InteractionLayers reading the CLS row as the row embedding.
class InteractionEncoder
{
public:
  InteractionEncoder() = default;
  InteractionEncoder(std::size_t num_features, std::size_t latent, std::size_t depth, std::size_t layers);

  void init(Rng & rng);
  /// columnar: (B*M) x l; cls: 1 x l parameter node.
  EncoderOutput forward(Graph & g, Var columnar, Var cls, std::size_t batch);

  const FeatureGraph & graph() const { return graph_; }
  std::vector<InteractionLayer> & layers() { return layers_; }
  const std::vector<InteractionLayer> & layers() const { return layers_; }
  void collect(std::vector<Parameter *> & out);

private:
  FeatureGraph graph_;
  std::vector<InteractionLayer> layers_;
};

/// Splice the CLS vector into a columnar batch: (B*(M+1)) x l.
Var attach_cls(Graph & g, Var columnar, Var cls, const BatchedGraph & bg);

}  // namespace ince

#endif  // INCE__INTERACTION_NETWORK_HPP_
