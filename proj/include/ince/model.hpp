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

#ifndef INCE__MODEL_HPP_
#define INCE__MODEL_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "ince/autodiff.hpp"
#include "ince/batch.hpp"
#include "ince/columnar.hpp"
#include "ince/interaction_network.hpp"
#include "ince/layers.hpp"
#include "ince/preprocess.hpp"
#include "ince/transformer.hpp"

namespace ince
{

enum class EncoderKind { Interaction, Transformer };

const char * to_string(EncoderKind kind);
EncoderKind encoder_from_string(const std::string & s);

/// Model and optimization hyperparameters.
struct InceConfig
{
  /// Latent size l.
  std::size_t latent = 32;
  /// Stacked encoder layers n; 0 bypasses the contextual encoder.
  std::size_t layers = 2;
  /// Linear layers per MLP_E / MLP_N (d).
  std::size_t depth = 3;
  EncoderKind encoder = EncoderKind::Interaction;
  std::size_t heads = 1;
  std::size_t feedforward = 512;
  /// Width of both decoder hidden layers; 0 means "same as latent".
  std::size_t decoder_hidden = 0;
  double learning_rate = 1e-3;
  std::size_t batch_size = 256;
  std::size_t epochs = 200;
  std::uint64_t seed = 0;

  std::size_t decoder_width() const { return decoder_hidden ? decoder_hidden : latent; }
  void validate() const;
};

nlohmann::json config_to_json(const InceConfig & c);
InceConfig config_from_json(const nlohmann::json & j);

/// Graph nodes of one forward pass.
struct ModelOutput
{
  /// One B x l node per feature.
  std::vector<Var> columnar;
  EncoderOutput encoder;
  /// B x C logits (classification) or B x 1 prediction (regression).
  Var output;
};

/// Columnar embedder + contextual encoder + MLP decoder.
///
/// With `layers == 0` the decoder reads the concatenated columnar
/// embeddings (M*l wide) instead of a CLS vector: the context-free
/// baseline built from the same embedder and decoder shape.
class InceModel
{
public:
  InceModel() = default;
  InceModel(const InceConfig & config, const FitStatistics & stats);

  /// Deterministic in `seed`.
  void init(std::uint64_t seed);

  ModelOutput forward(Graph & g, const Batch & batch);
  /// Mean cross-entropy or MSE of a batch.
  Var loss(Graph & g, const Batch & batch);
  /// Outputs for every row, evaluated in chunks; N x C or N x 1.
  RowMatrix predict(const PreparedDataset & data, std::size_t chunk = 512);

  const InceConfig & config() const { return config_; }
  const FitStatistics & stats() const { return stats_; }
  std::size_t num_features() const { return embedder_.num_features(); }
  std::size_t output_width() const;
  bool is_classification() const { return stats_.task != TaskKind::Regression; }

  ColumnarEmbedder & embedder() { return embedder_; }
  InteractionEncoder & interaction() { return interaction_; }
  TransformerEncoder & transformer() { return transformer_; }
  Parameter & cls() { return cls_; }
  Mlp & decoder() { return decoder_; }

  std::vector<Parameter *> parameters();
  std::vector<Parameter *> encoder_parameters();
  /// Throws ContractError when a dataset's layout differs from the model's.
  void check_compatible(const PreparedDataset & data) const;

private:
  InceConfig config_;
  FitStatistics stats_;
  ColumnarEmbedder embedder_;
  InteractionEncoder interaction_;
  TransformerEncoder transformer_;
  Parameter cls_;
  Mlp decoder_;
};

}  // namespace ince

#endif  // INCE__MODEL_HPP_
