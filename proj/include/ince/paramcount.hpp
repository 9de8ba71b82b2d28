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

#ifndef INCE__PARAMCOUNT_HPP_
#define INCE__PARAMCOUNT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "ince/model.hpp"

namespace ince
{

/// Trainable parameters of an interaction-network stack (encoder only).
std::uint64_t tp_in(std::int64_t l, std::int64_t d, std::int64_t n);
/// Trainable parameters of a transformer stack without normalization layers.
std::uint64_t tp_transformer(std::int64_t l, std::int64_t h, std::int64_t f, std::int64_t n);

/// Closed-form parts of one stacked block.
std::uint64_t tp_edge_mlp(std::int64_t l, std::int64_t d, bool first);
std::uint64_t tp_node_mlp(std::int64_t l, std::int64_t d);
std::uint64_t tp_attention_qkv(std::int64_t l, std::int64_t h);
std::uint64_t tp_attention_projection(std::int64_t l, std::int64_t h);
std::uint64_t tp_feedforward(std::int64_t l, std::int64_t f);

struct BlockCount
{
  std::string name;
  std::uint64_t analytic = 0;
  std::uint64_t constructed = 0;
  bool match() const { return analytic == constructed; }
};

struct ParamCountReport
{
  std::string encoder;
  std::uint64_t analytic = 0;
  std::uint64_t constructed = 0;
  std::vector<BlockCount> blocks;
  /// analytic / baseline, baseline = tp_in(l_base, 1, 1).
  std::uint64_t baseline = 0;
  double normalized = 0.0;
  /// Whole-model tensors outside the encoder formulas.
  std::uint64_t embedder = 0;
  std::uint64_t cls = 0;
  std::uint64_t decoder = 0;
  std::uint64_t model_total = 0;

  bool match() const;
  /// Names every mismatching block, empty when all agree.
  std::string diff() const;
};

/// Counts the encoder of `model` tensor by tensor and compares with the formulas.
/// `baseline_latent` picks the normalizing tp_in(l, 1, 1); 0 means the model's own l.
ParamCountReport verify_model_counts(InceModel & model, std::size_t baseline_latent = 0);
/// Same, for a bare encoder configuration (builds a throwaway model).
ParamCountReport verify_encoder_counts(const InceConfig & config, std::size_t num_features = 4,
  std::size_t baseline_latent = 0);

nlohmann::json report_to_json(const ParamCountReport & r);
std::string report_to_table(const ParamCountReport & r);

}  // namespace ince

#endif  // INCE__PARAMCOUNT_HPP_
