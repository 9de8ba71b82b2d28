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

#ifndef INCE__COLUMNAR_HPP_
#define INCE__COLUMNAR_HPP_

#include <span>
#include <vector>

#include "ince/autodiff.hpp"
#include "ince/batch.hpp"
#include "ince/layers.hpp"

namespace ince
{

/// Context-free per-feature projection into the shared latent space.
///
/// Numerical feature j:   c = relu(b_j + x * w_j),   w_j, b_j in R^l
/// Categorical feature j: c = b_j + T_j[code],       T_j in R^{|j| x l}
///
/// Each feature owns its parameters; nothing is shared across columns.
class ColumnarEmbedder
{
public:
  ColumnarEmbedder() = default;
  ColumnarEmbedder(std::size_t num_numerical, std::vector<std::size_t> cardinalities, std::size_t latent);

  /// Weights and tables ~ U(-1/sqrt(l), 1/sqrt(l)), biases zero.
  void init(Rng & rng);

  /// One B x l node per feature, numericals first.
  std::vector<Var> forward_columns(Graph & g, const Batch & batch);
  /// Features interleaved per row: (B*M) x l, shape {B, M, l}.
  Var forward(Graph & g, const Batch & batch);
  /// Single-row evaluation outside of training, M x l.
  RowMatrix embed_row(std::span<const double> numerical, std::span<const int> codes);

  std::size_t num_numerical() const { return num_weight_.size(); }
  std::size_t num_categorical() const { return cat_table_.size(); }
  std::size_t num_features() const { return num_numerical() + num_categorical(); }
  std::size_t latent() const { return latent_; }
  const std::vector<std::size_t> & cardinalities() const { return cardinalities_; }

  Parameter & numerical_weight(std::size_t j) { return num_weight_.at(j); }
  Parameter & numerical_bias(std::size_t j) { return num_bias_.at(j); }
  Parameter & categorical_table(std::size_t j) { return cat_table_.at(j); }
  Parameter & categorical_bias(std::size_t j) { return cat_bias_.at(j); }

  void collect(std::vector<Parameter *> & out);

private:
  std::size_t latent_ = 0;
  std::vector<std::size_t> cardinalities_;
  std::vector<Parameter> num_weight_;
  std::vector<Parameter> num_bias_;
  std::vector<Parameter> cat_table_;
  std::vector<Parameter> cat_bias_;
};

}  // namespace ince

#endif  // INCE__COLUMNAR_HPP_
