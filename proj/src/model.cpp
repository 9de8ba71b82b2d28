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

#include "ince/model.hpp"

#include <algorithm>
#include <numeric>

#include "ince/errors.hpp"

namespace ince
{

const char * to_string(EncoderKind kind)
{
  return kind == EncoderKind::Interaction ? "in" : "transformer";
}

EncoderKind encoder_from_string(const std::string & s)
{
  if (s == "in") return EncoderKind::Interaction;
  if (s == "transformer") return EncoderKind::Transformer;
  throw ContractError("unknown encoder '" + s + "' (expected 'in' or 'transformer')");
}

void InceConfig::validate() const
{
  if (latent == 0) throw ContractError("latent size must be positive");
  if (layers > 0 && encoder == EncoderKind::Interaction && depth == 0) {
    throw ContractError("MLP depth must be positive");
  }
  if (encoder == EncoderKind::Transformer && (heads == 0 || feedforward == 0)) {
    throw ContractError("transformer heads and feed-forward size must be positive");
  }
  if (batch_size == 0) throw ContractError("batch size must be positive");
  if (!(learning_rate > 0.0)) throw ContractError("learning rate must be positive");
}

nlohmann::json config_to_json(const InceConfig & c)
{
  return {
    {"latent", c.latent},
    {"layers", c.layers},
    {"depth", c.depth},
    {"encoder", to_string(c.encoder)},
    {"heads", c.heads},
    {"feedforward", c.feedforward},
    {"decoder_hidden", c.decoder_width()},
    {"learning_rate", c.learning_rate},
    {"batch_size", c.batch_size},
    {"epochs", c.epochs},
    {"seed", c.seed},
  };
}

InceConfig config_from_json(const nlohmann::json & j)
{
  InceConfig c;
  try {
    c.latent = j.value("latent", c.latent);
    c.layers = j.value("layers", c.layers);
    c.depth = j.value("depth", c.depth);
    c.encoder = encoder_from_string(j.value("encoder", std::string("in")));
    c.heads = j.value("heads", c.heads);
    c.feedforward = j.value("feedforward", c.feedforward);
    c.decoder_hidden = j.value("decoder_hidden", c.decoder_hidden);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.epochs = j.value("epochs", c.epochs);
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception & e) {
    throw ParseError(std::string("malformed model config: ") + e.what());
  }
  c.validate();
  return c;
}

InceModel::InceModel(const InceConfig & config, const FitStatistics & stats)
: config_(config), stats_(stats)
{
  config_.validate();
  std::vector<std::size_t> cards;
  for (const auto & c : stats.categorical) cards.push_back(c.cardinality());
  embedder_ = ColumnarEmbedder(stats.numerical.size(), cards, config.latent);
  const std::size_t m = embedder_.num_features();
  if (m == 0) throw ContractError("model needs at least one feature");
  if (config.layers > 0) {
    if (config.encoder == EncoderKind::Interaction) {
      interaction_ = InteractionEncoder(m, config.latent, config.depth, config.layers);
    } else {
      transformer_ = TransformerEncoder(m, config.latent, config.heads, config.feedforward, config.layers);
    }
  }
  cls_ = Parameter("cls", Tensor({1, config.latent}));
  const std::size_t in = config.layers > 0 ? config.latent : m * config.latent;
  const std::size_t h = config.decoder_width();
  decoder_ = Mlp("decoder", {in, h, h, output_width()});
}

std::size_t InceModel::output_width() const
{
  return is_classification() ? static_cast<std::size_t>(stats_.num_classes) : 1;
}

void InceModel::init(std::uint64_t seed)
{
  Rng rng(seed);
  embedder_.init(rng);
  if (config_.layers > 0) {
    if (config_.encoder == EncoderKind::Interaction) {
      interaction_.init(rng);
    } else {
      transformer_.init(rng);
    }
  }
  std::normal_distribution<double> normal(0.0, 0.02);
  for (double & v : cls_.value.data()) v = normal(rng);
  decoder_.init_uniform(rng);
}

ModelOutput InceModel::forward(Graph & g, const Batch & batch)
{
  ModelOutput out;
  out.columnar = embedder_.forward_columns(g, batch);
  Var row_embedding;
  if (config_.layers == 0) {
    row_embedding = g.concat_cols(out.columnar);
  } else {
    Var columnar = g.interleave_rows(out.columnar);
    Var cls = g.param(cls_);
    if (config_.encoder == EncoderKind::Interaction) {
      out.encoder = interaction_.forward(g, columnar, cls, batch.size);
    } else {
      out.encoder = transformer_.forward(g, columnar, cls, batch.size);
    }
    row_embedding = out.encoder.cls;
  }
  out.output = decoder_.forward(g, row_embedding);
  return out;
}

Var InceModel::loss(Graph & g, const Batch & batch)
{
  ModelOutput o = forward(g, batch);
  if (is_classification()) return g.softmax_cross_entropy(o.output, batch.labels);
  return g.mse(o.output, Tensor({batch.size, 1}, batch.targets));
}

RowMatrix InceModel::predict(const PreparedDataset & data, std::size_t chunk)
{
  check_compatible(data);
  RowMatrix out(static_cast<Eigen::Index>(data.rows), static_cast<Eigen::Index>(output_width()));
  std::vector<std::size_t> rows;
  for (std::size_t start = 0; start < data.rows; start += chunk) {
    const std::size_t end = std::min(data.rows, start + chunk);
    rows.resize(end - start);
    std::iota(rows.begin(), rows.end(), start);
    Graph g(false);
    ModelOutput o = forward(g, make_batch(data, rows));
    out.middleRows(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(end - start)) =
      g.value(o.output).matrix();
  }
  return out;
}

std::vector<Parameter *> InceModel::parameters()
{
  std::vector<Parameter *> out;
  embedder_.collect(out);
  if (config_.layers > 0) {
    out.push_back(&cls_);
    for (Parameter * p : encoder_parameters()) out.push_back(p);
  }
  decoder_.collect(out);
  return out;
}

std::vector<Parameter *> InceModel::encoder_parameters()
{
  std::vector<Parameter *> out;
  if (config_.layers == 0) return out;
  if (config_.encoder == EncoderKind::Interaction) {
    interaction_.collect(out);
  } else {
    transformer_.collect(out);
  }
  return out;
}

void InceModel::check_compatible(const PreparedDataset & data) const
{
  if (data.num_numerical != embedder_.num_numerical() || data.num_categorical != embedder_.num_categorical()) {
    throw ContractError(
      "dataset has " + std::to_string(data.num_numerical) + " numerical / " +
      std::to_string(data.num_categorical) + " categorical features, model expects " +
      std::to_string(embedder_.num_numerical()) + " / " + std::to_string(embedder_.num_categorical()));
  }
  const auto cards = data.cardinalities();
  if (!cards.empty() && cards != embedder_.cardinalities()) {
    throw ContractError("dataset category cardinalities differ from the model's");
  }
  if (data.stats.task != stats_.task) throw ContractError("dataset task differs from the model's");
}

}  // namespace ince
