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

#include "ince/interaction_network.hpp"

#include <array>
#include <memory>

#include "ince/errors.hpp"

namespace ince
{

std::size_t FeatureGraph::edge_index(std::size_t src, std::size_t dst) const
{
  const std::size_t n = num_nodes();
  if (src >= n || dst >= n || src == dst) throw ContractError("no edge between these nodes");
  return src * (n - 1) + (dst < src ? dst : dst - 1);
}

FeatureGraph build_graph(std::size_t num_features)
{
  if (num_features == 0) throw ContractError("a feature graph needs at least one feature");
  FeatureGraph g;
  g.num_features = num_features;
  const std::size_t n = g.num_nodes();
  g.edges.reserve(n * (n - 1));
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t d = 0; d < n; ++d) {
      if (s != d) g.edges.emplace_back(s, d);
    }
  }
  return g;
}

BatchedGraph::BatchedGraph(const FeatureGraph & g, std::size_t b) : graph(g), batch(b)
{
  const std::size_t nodes = g.num_nodes();
  const std::size_t m = g.num_features;
  auto s = std::make_shared<Index>();
  auto d = std::make_shared<Index>();
  auto c = std::make_shared<Index>();
  auto ns = std::make_shared<Index>();
  s->reserve(b * g.num_edges());
  d->reserve(b * g.num_edges());
  for (std::size_t k = 0; k < b; ++k) {
    for (const auto & [src, dst] : g.edges) {
      s->push_back(k * nodes + src);
      d->push_back(k * nodes + dst);
    }
    c->push_back(k * nodes + m);
    for (std::size_t j = 0; j < m; ++j) ns->push_back(k * m + j);
    ns->push_back(b * m);
  }
  src = s;
  dst = d;
  cls_rows = c;
  node_source = ns;
}

Var attach_cls(Graph & g, Var columnar, Var cls, const BatchedGraph & bg)
{
  if (g.value(columnar).rows() != bg.batch * bg.graph.num_features) {
    throw ContractError("columnar batch does not match the feature graph");
  }
  std::array<Var, 2> parts{g.reshape(columnar, {bg.batch * bg.graph.num_features, g.value(columnar).cols()}),
    g.reshape(cls, {1, g.value(cls).size()})};
  return g.gather_rows(g.concat_rows(parts), bg.node_source);
}

InteractionLayer::InteractionLayer(const std::string & name, std::size_t latent, std::size_t depth, bool first)
: latent_(latent), first_(first)
{
  if (latent == 0 || depth == 0) throw ContractError("interaction layer needs l >= 1 and d >= 1");
  std::vector<std::size_t> ew{(first ? 2 : 3) * latent};
  std::vector<std::size_t> nw{2 * latent};
  for (std::size_t i = 0; i < depth; ++i) {
    ew.push_back(latent);
    nw.push_back(latent);
  }
  edge_mlp_ = Mlp(name + ".edge_mlp", ew);
  node_mlp_ = Mlp(name + ".node_mlp", nw);
}

void InteractionLayer::init(Rng & rng)
{
  edge_mlp_.init_uniform(rng);
  node_mlp_.init_uniform(rng);
}

void InteractionLayer::collect(std::vector<Parameter *> & out)
{
  edge_mlp_.collect(out);
  node_mlp_.collect(out);
}

InteractionLayer::Output InteractionLayer::forward(Graph & g, Var nodes, Var edges, const BatchedGraph & bg)
{
  const std::size_t l = latent_;
  const std::size_t node_rows = bg.batch * bg.graph.num_nodes();
  if (g.value(nodes).rows() != node_rows || g.value(nodes).cols() != l) {
    throw ContractError("interaction layer: node states have the wrong shape");
  }
  if (first_ == edges.valid()) {
    throw ContractError(first_ ? "first interaction layer takes no edge states" : "edge states missing");
  }
  if (edges.valid() && (g.value(edges).rows() != bg.src->size() || g.value(edges).cols() != l)) {
    throw ContractError("interaction layer: edge states have the wrong shape");
  }

  // First edge-MLP layer on concat(n_src, n_dst, e), evaluated blockwise:
  // project every node once, then gather the projections per edge.
  Linear & first = edge_mlp_.layers().front();
  Var w = g.param(first.weight);
  Var from_src = g.matmul(nodes, g.slice_rows(w, 0, l));
  Var from_dst = g.matmul(nodes, g.slice_rows(w, l, 2 * l));
  Var pre = g.add(g.gather_rows(from_src, bg.src), g.gather_rows(from_dst, bg.dst));
  if (edges.valid()) pre = g.add(pre, g.matmul(edges, g.slice_rows(w, 2 * l, 3 * l)));
  pre = g.add_bias(pre, g.param(first.bias));
  Var messages = edge_mlp_.forward_tail(g, pre);

  Var aggregated = g.scatter_add_rows(messages, bg.dst, node_rows);
  std::array<Var, 2> node_in{nodes, aggregated};
  Var node_update = node_mlp_.forward(g, g.concat_cols(node_in));

  Output out;
  out.nodes = g.add(nodes, node_update);
  out.edges = edges.valid() ? g.add(edges, messages) : messages;
  out.messages = messages;
  return out;
}

InteractionEncoder::InteractionEncoder(
  std::size_t num_features, std::size_t latent, std::size_t depth, std::size_t layers)
: graph_(build_graph(num_features))
{
  if (layers == 0) throw ContractError("an interaction encoder needs at least one layer");
  for (std::size_t i = 0; i < layers; ++i) {
    layers_.emplace_back("in" + std::to_string(i), latent, depth, i == 0);
  }
}

void InteractionEncoder::init(Rng & rng)
{
  for (auto & l : layers_) l.init(rng);
}

void InteractionEncoder::collect(std::vector<Parameter *> & out)
{
  for (auto & l : layers_) l.collect(out);
}

EncoderOutput InteractionEncoder::forward(Graph & g, Var columnar, Var cls, std::size_t batch)
{
  BatchedGraph bg(graph_, batch);
  Var nodes = attach_cls(g, columnar, cls, bg);
  Var edges;
  Var messages;
  for (auto & layer : layers_) {
    auto o = layer.forward(g, nodes, edges, bg);
    nodes = o.nodes;
    edges = o.edges;
    messages = o.messages;
  }
  EncoderOutput out;
  out.nodes = nodes;
  out.edges = edges;
  out.messages = messages;
  out.cls = g.gather_rows(nodes, bg.cls_rows);
  return out;
}

}  // namespace ince
