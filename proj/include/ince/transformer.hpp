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

#ifndef INCE__TRANSFORMER_HPP_
#define INCE__TRANSFORMER_HPP_

#include <vector>

#include "ince/autodiff.hpp"
#include "ince/interaction_network.hpp"
#include "ince/layers.hpp"

namespace ince
{

/// Post-residual Transformer encoder block without normalization layers.
///
///   x <- x + O(concat_h softmax(Q_h K_h^T / sqrt(l)) V_h)
///   x <- x + W2 relu(W1 x + b1) + b2
///
/// Q_h, K_h, V_h are l x l with bias per head; O maps h*l -> l.
class TransformerLayer
{
public:
  TransformerLayer() = default;
  TransformerLayer(const std::string & name, std::size_t latent, std::size_t heads, std::size_t ff);

  void init(Rng & rng);
  /// x: (B*T) x l. When `attention` is given it receives one (B*T) x T
  /// weight matrix per head.
  Var forward(Graph & g, Var x, std::size_t batch, std::vector<Var> * attention = nullptr);

  std::size_t heads() const { return query_.size(); }
  Linear & query(std::size_t h) { return query_.at(h); }
  Linear & key(std::size_t h) { return key_.at(h); }
  Linear & value(std::size_t h) { return value_.at(h); }
  Linear & output() { return output_; }
  Linear & ff_in() { return ff_in_; }
  Linear & ff_out() { return ff_out_; }

  std::size_t qkv_parameters() const;
  std::size_t projection_parameters() const { return output_.num_parameters(); }
  std::size_t feedforward_parameters() const { return ff_in_.num_parameters() + ff_out_.num_parameters(); }
  void collect(std::vector<Parameter *> & out);

private:
  std::size_t latent_ = 0;
  std::vector<Linear> query_;
  std::vector<Linear> key_;
  std::vector<Linear> value_;
  Linear output_;
  Linear ff_in_;
  Linear ff_out_;
};

class TransformerEncoder
{
public:
  TransformerEncoder() = default;
  TransformerEncoder(
    std::size_t num_features, std::size_t latent, std::size_t heads, std::size_t ff, std::size_t layers);

  void init(Rng & rng);
  /// Same contract as InteractionEncoder::forward; `edges`/`messages` stay invalid.
  EncoderOutput forward(Graph & g, Var columnar, Var cls, std::size_t batch,
    std::vector<std::vector<Var>> * attention = nullptr);

  const FeatureGraph & graph() const { return graph_; }
  std::vector<TransformerLayer> & layers() { return layers_; }
  const std::vector<TransformerLayer> & layers() const { return layers_; }
  void collect(std::vector<Parameter *> & out);

private:
  FeatureGraph graph_;
  std::vector<TransformerLayer> layers_;
};

}  // namespace ince

#endif  // INCE__TRANSFORMER_HPP_
