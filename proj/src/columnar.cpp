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

#include "ince/columnar.hpp"

#include <cmath>
#include <memory>

#include "ince/errors.hpp"

namespace ince
{

ColumnarEmbedder::ColumnarEmbedder(
  std::size_t num_numerical, std::vector<std::size_t> cardinalities, std::size_t latent)
: latent_(latent), cardinalities_(std::move(cardinalities))
{
  if (latent == 0) throw ContractError("latent size must be positive");
  for (std::size_t j = 0; j < num_numerical; ++j) {
    num_weight_.emplace_back("columnar.num" + std::to_string(j) + ".weight", Tensor({1, latent}));
    num_bias_.emplace_back("columnar.num" + std::to_string(j) + ".bias", Tensor({latent}));
  }
  for (std::size_t j = 0; j < cardinalities_.size(); ++j) {
    if (cardinalities_[j] == 0) throw ContractError("categorical cardinality must be positive");
    cat_table_.emplace_back("columnar.cat" + std::to_string(j) + ".table", Tensor({cardinalities_[j], latent}));
    cat_bias_.emplace_back("columnar.cat" + std::to_string(j) + ".bias", Tensor({latent}));
  }
}

void ColumnarEmbedder::init(Rng & rng)
{
  const double bound = 1.0 / std::sqrt(static_cast<double>(latent_));
  std::uniform_real_distribution<double> u(-bound, bound);
  for (auto & p : num_weight_) for (double & w : p.value.data()) w = u(rng);
  for (auto & p : cat_table_) for (double & w : p.value.data()) w = u(rng);
  for (auto & p : num_bias_) p.value.fill(0.0);
  for (auto & p : cat_bias_) p.value.fill(0.0);
}

std::vector<Var> ColumnarEmbedder::forward_columns(Graph & g, const Batch & batch)
{
  if (batch.num_numerical != num_numerical() || batch.num_categorical != num_categorical()) {
    throw ContractError("batch feature layout does not match the embedder");
  }
  const std::size_t n = batch.size;
  std::vector<Var> out;
  out.reserve(num_features());
  for (std::size_t j = 0; j < num_numerical(); ++j) {
    Tensor x({n, 1});
    for (std::size_t r = 0; r < n; ++r) x[r] = batch.numerical[r * batch.num_numerical + j];
    Var h = g.matmul(g.constant(std::move(x)), g.param(num_weight_[j]));
    out.push_back(g.relu(g.add_bias(h, g.param(num_bias_[j]))));
  }
  for (std::size_t j = 0; j < num_categorical(); ++j) {
    auto codes = std::make_shared<Index>(n);
    for (std::size_t r = 0; r < n; ++r) {
      const int c = batch.categorical[r * batch.num_categorical + j];
      if (c < 0 || static_cast<std::size_t>(c) >= cardinalities_[j]) {
        throw ContractError(
          "categorical code " + std::to_string(c) + " out of range for feature " + std::to_string(j) +
          " with cardinality " + std::to_string(cardinalities_[j]));
      }
      (*codes)[r] = static_cast<std::size_t>(c);
    }
    Var h = g.gather_rows(g.param(cat_table_[j]), codes);
    out.push_back(g.add_bias(h, g.param(cat_bias_[j])));
  }
  return out;
}

Var ColumnarEmbedder::forward(Graph & g, const Batch & batch)
{
  auto cols = forward_columns(g, batch);
  return g.reshape(g.interleave_rows(cols), {batch.size, num_features(), latent_});
}

RowMatrix ColumnarEmbedder::embed_row(std::span<const double> numerical, std::span<const int> codes)
{
  Batch b;
  b.size = 1;
  b.num_numerical = numerical.size();
  b.num_categorical = codes.size();
  b.numerical.assign(numerical.begin(), numerical.end());
  b.categorical.assign(codes.begin(), codes.end());
  Graph g;
  Var v = forward(g, b);
  return g.value(v).matrix();
}

void ColumnarEmbedder::collect(std::vector<Parameter *> & out)
{
  for (std::size_t j = 0; j < num_numerical(); ++j) {
    out.push_back(&num_weight_[j]);
    out.push_back(&num_bias_[j]);
  }
  for (std::size_t j = 0; j < num_categorical(); ++j) {
    out.push_back(&cat_table_[j]);
    out.push_back(&cat_bias_[j]);
  }
}

}  // namespace ince
