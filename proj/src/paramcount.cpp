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

#include "ince/paramcount.hpp"

#include <iomanip>
#include <sstream>

#include "ince/errors.hpp"

namespace ince
{

namespace
{

std::uint64_t positive(std::int64_t v, const char * name)
{
  if (v < 1) throw ContractError(std::string(name) + " must be >= 1, got " + std::to_string(v));
  return static_cast<std::uint64_t>(v);
}

std::uint64_t linear(std::uint64_t in, std::uint64_t out) { return in * out + out; }

std::uint64_t count(const Mlp & mlp) { return mlp.num_parameters(); }

}  // namespace

std::uint64_t tp_edge_mlp(std::int64_t l, std::int64_t d, bool first)
{
  const auto L = positive(l, "l");
  const auto D = positive(d, "d");
  const std::uint64_t k = first ? 2 : 3;
  return linear(k * L, L) + (D - 1) * linear(L, L);
}

std::uint64_t tp_node_mlp(std::int64_t l, std::int64_t d)
{
  const auto L = positive(l, "l");
  const auto D = positive(d, "d");
  return linear(2 * L, L) + (D - 1) * linear(L, L);
}

std::uint64_t tp_in(std::int64_t l, std::int64_t d, std::int64_t n)
{
  const auto N = positive(n, "n");
  std::uint64_t total = 0;
  for (std::uint64_t i = 0; i < N; ++i) total += tp_edge_mlp(l, d, i == 0) + tp_node_mlp(l, d);
  return total;
}

std::uint64_t tp_attention_qkv(std::int64_t l, std::int64_t h)
{
  const auto L = positive(l, "l");
  return 3 * positive(h, "h") * L * (L + 1);
}

std::uint64_t tp_attention_projection(std::int64_t l, std::int64_t h)
{
  const auto L = positive(l, "l");
  return L * (positive(h, "h") * L + 1);
}

std::uint64_t tp_feedforward(std::int64_t l, std::int64_t f)
{
  const auto L = positive(l, "l");
  const auto F = positive(f, "f");
  return 2 * F * L + F + L;
}

std::uint64_t tp_transformer(std::int64_t l, std::int64_t h, std::int64_t f, std::int64_t n)
{
  return positive(n, "n") * (tp_attention_qkv(l, h) + tp_attention_projection(l, h) + tp_feedforward(l, f));
}

bool ParamCountReport::match() const
{
  if (analytic != constructed) return false;
  for (const auto & b : blocks) {
    if (!b.match()) return false;
  }
  return true;
}

std::string ParamCountReport::diff() const
{
  std::ostringstream out;
  for (const auto & b : blocks) {
    if (!b.match()) {
      out << b.name << ": analytic " << b.analytic << " != constructed " << b.constructed << "\n";
    }
  }
  if (analytic != constructed) out << "total: analytic " << analytic << " != constructed " << constructed << "\n";
  return out.str();
}

ParamCountReport verify_model_counts(InceModel & model, std::size_t baseline_latent)
{
  const InceConfig & c = model.config();
  if (c.layers == 0) throw ContractError("the n=0 ablation has no contextual encoder to count");
  const auto l = static_cast<std::int64_t>(c.latent);
  ParamCountReport r;
  r.encoder = to_string(c.encoder);
  if (c.encoder == EncoderKind::Interaction) {
    const auto d = static_cast<std::int64_t>(c.depth);
    auto & layers = model.interaction().layers();
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const std::string tag = "layer" + std::to_string(i + 1);
      r.blocks.push_back({tag + ".mlp_e", tp_edge_mlp(l, d, i == 0), count(layers[i].edge_mlp())});
      r.blocks.push_back({tag + ".mlp_n", tp_node_mlp(l, d), count(layers[i].node_mlp())});
    }
    r.analytic = tp_in(l, d, static_cast<std::int64_t>(c.layers));
  } else {
    const auto h = static_cast<std::int64_t>(c.heads);
    const auto f = static_cast<std::int64_t>(c.feedforward);
    auto & layers = model.transformer().layers();
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const std::string tag = "layer" + std::to_string(i + 1);
      r.blocks.push_back({tag + ".qkv", tp_attention_qkv(l, h), layers[i].qkv_parameters()});
      r.blocks.push_back({tag + ".projection", tp_attention_projection(l, h), layers[i].projection_parameters()});
      r.blocks.push_back({tag + ".feedforward", tp_feedforward(l, f), layers[i].feedforward_parameters()});
    }
    r.analytic = tp_transformer(l, h, f, static_cast<std::int64_t>(c.layers));
  }
  r.constructed = count_parameters(model.encoder_parameters());

  std::vector<Parameter *> emb;
  model.embedder().collect(emb);
  r.embedder = count_parameters(emb);
  r.cls = model.cls().size();
  r.decoder = count(model.decoder());
  r.model_total = count_parameters(model.parameters());

  const auto base_l = static_cast<std::int64_t>(baseline_latent ? baseline_latent : c.latent);
  r.baseline = tp_in(base_l, 1, 1);
  r.normalized = static_cast<double>(r.analytic) / static_cast<double>(r.baseline);
  return r;
}

ParamCountReport verify_encoder_counts(const InceConfig & config, std::size_t num_features, std::size_t baseline_latent)
{
  FitStatistics stats;
  stats.task = TaskKind::Regression;
  for (std::size_t j = 0; j < num_features; ++j) stats.numerical.push_back({"x" + std::to_string(j), 0.0, 1.0, false});
  InceModel model(config, stats);
  return verify_model_counts(model, baseline_latent);
}

nlohmann::json report_to_json(const ParamCountReport & r)
{
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto & b : r.blocks) {
    blocks.push_back({{"block", b.name}, {"analytic", b.analytic}, {"constructed", b.constructed}, {"match", b.match()}});
  }
  return {
    {"encoder", r.encoder},
    {"analytic", r.analytic},
    {"constructed", r.constructed},
    {"match", r.match()},
    {"baseline", r.baseline},
    {"normalized", r.normalized},
    {"blocks", blocks},
    {"model", {{"embedder", r.embedder}, {"cls", r.cls}, {"decoder", r.decoder}, {"total", r.model_total}}},
  };
}

std::string report_to_table(const ParamCountReport & r)
{
  std::ostringstream out;
  auto row = [&out](const std::string & a, const std::string & b, const std::string & c, const std::string & d) {
    out << std::left << std::setw(22) << a << std::right << std::setw(14) << b << std::setw(14) << c
        << std::setw(8) << d << "\n";
  };
  row("block", "analytic", "constructed", "match");
  for (const auto & b : r.blocks) {
    row(b.name, std::to_string(b.analytic), std::to_string(b.constructed), b.match() ? "yes" : "NO");
  }
  row("encoder (" + r.encoder + ")", std::to_string(r.analytic), std::to_string(r.constructed), r.match() ? "yes" : "NO");
  out << "\n";
  row("embedder", "", std::to_string(r.embedder), "");
  row("cls", "", std::to_string(r.cls), "");
  row("decoder", "", std::to_string(r.decoder), "");
  row("model total", "", std::to_string(r.model_total), "");
  std::ostringstream norm;
  norm << std::setprecision(6) << r.normalized;
  row("normalized", norm.str(), "", "");
  return out.str();
}

}  // namespace ince
