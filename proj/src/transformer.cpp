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

#include "ince/transformer.hpp"

#include <cmath>

#include "ince/errors.hpp"

namespace ince
{

TransformerLayer::TransformerLayer(const std::string & name, std::size_t latent, std::size_t heads, std::size_t ff)
: latent_(latent),
  output_(name + ".out", heads * latent, latent),
  ff_in_(name + ".ff1", latent, ff),
  ff_out_(name + ".ff2", ff, latent)
{
  if (heads == 0) throw ContractError("transformer layer needs at least one head");
  for (std::size_t h = 0; h < heads; ++h) {
    const std::string p = name + ".head" + std::to_string(h);
    query_.emplace_back(p + ".q", latent, latent);
    key_.emplace_back(p + ".k", latent, latent);
    value_.emplace_back(p + ".v", latent, latent);
  }
}

void TransformerLayer::init(Rng & rng)
{
  for (std::size_t h = 0; h < heads(); ++h) {
    query_[h].init_uniform(rng);
    key_[h].init_uniform(rng);
    value_[h].init_uniform(rng);
  }
  output_.init_uniform(rng);
  ff_in_.init_uniform(rng);
  ff_out_.init_uniform(rng);
}

std::size_t TransformerLayer::qkv_parameters() const
{
  std::size_t n = 0;
  for (std::size_t h = 0; h < query_.size(); ++h) {
    n += query_[h].num_parameters() + key_[h].num_parameters() + value_[h].num_parameters();
  }
  return n;
}

void TransformerLayer::collect(std::vector<Parameter *> & out)
{
  for (std::size_t h = 0; h < heads(); ++h) {
    for (Linear * l : {&query_[h], &key_[h], &value_[h]}) {
      out.push_back(&l->weight);
      out.push_back(&l->bias);
    }
  }
  for (Linear * l : {&output_, &ff_in_, &ff_out_}) {
    out.push_back(&l->weight);
    out.push_back(&l->bias);
  }
}

Var TransformerLayer::forward(Graph & g, Var x, std::size_t batch, std::vector<Var> * attention)
{
  if (g.value(x).cols() != latent_ || batch == 0 || g.value(x).rows() % batch) {
    throw ContractError("transformer layer: input has the wrong shape");
  }
  const double inv_sqrt_l = 1.0 / std::sqrt(static_cast<double>(latent_));
  std::vector<Var> heads_out;
  for (std::size_t h = 0; h < heads(); ++h) {
    Var q = query_[h].forward(g, x);
    Var k = key_[h].forward(g, x);
    Var v = value_[h].forward(g, x);
    Var scores = g.scale(g.batched_matmul(q, k, batch, true), inv_sqrt_l);
    Var weights = g.softmax_rows(scores);
    if (attention) attention->push_back(weights);
    heads_out.push_back(g.batched_matmul(weights, v, batch, false));
  }
  Var attended = heads_out.size() == 1 ? heads_out[0] : g.concat_cols(heads_out);
  Var x1 = g.add(x, output_.forward(g, attended));
  Var ff = ff_out_.forward(g, g.relu(ff_in_.forward(g, x1)));
  return g.add(x1, ff);
}

TransformerEncoder::TransformerEncoder(
  std::size_t num_features, std::size_t latent, std::size_t heads, std::size_t ff, std::size_t layers)
: graph_(build_graph(num_features))
{
  if (layers == 0) throw ContractError("a transformer encoder needs at least one layer");
  for (std::size_t i = 0; i < layers; ++i) {
    layers_.emplace_back("transformer" + std::to_string(i), latent, heads, ff);
  }
}

void TransformerEncoder::init(Rng & rng)
{
  for (auto & l : layers_) l.init(rng);
}

void TransformerEncoder::collect(std::vector<Parameter *> & out)
{
  for (auto & l : layers_) l.collect(out);
}

EncoderOutput TransformerEncoder::forward(
  Graph & g, Var columnar, Var cls, std::size_t batch, std::vector<std::vector<Var>> * attention)
{
  BatchedGraph bg(graph_, batch);
  Var x = attach_cls(g, columnar, cls, bg);
  for (auto & layer : layers_) {
    std::vector<Var> weights;
    x = layer.forward(g, x, batch, attention ? &weights : nullptr);
    if (attention) attention->push_back(std::move(weights));
  }
  EncoderOutput out;
  out.nodes = x;
  out.cls = g.gather_rows(x, bg.cls_rows);
  return out;
}

}  // namespace ince
