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

#include "ince/shapley.hpp"

#include <bit>
#include <cmath>
#include <numeric>

#include "ince/batch.hpp"
#include "ince/errors.hpp"

namespace ince
{

namespace
{

void check_players(std::size_t m)
{
  if (m == 0) throw ContractError("Shapley values need at least one feature");
  if (m > kMaxShapleyFeatures) {
    throw ContractError(
      "exact Shapley enumeration supports at most " + std::to_string(kMaxShapleyFeatures) + " features (got " +
      std::to_string(m) + "); select a feature subset first");
  }
}

// w(s) = s! (m - s - 1)! / m!
std::vector<double> coalition_weights(std::size_t m)
{
  std::vector<double> w(m);
  for (std::size_t s = 0; s < m; ++s) {
    w[s] = std::exp(std::lgamma(static_cast<double>(s) + 1.0) + std::lgamma(static_cast<double>(m - s)) -
      std::lgamma(static_cast<double>(m) + 1.0));
  }
  return w;
}

std::vector<double> shapley_from_table(std::size_t m, const std::vector<double> & v)
{
  const auto w = coalition_weights(m);
  std::vector<double> phi(m, 0.0);
  const std::uint32_t full = (1u << m);
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    for (std::size_t j = 0; j < m; ++j) {
      if (mask & (1u << j)) continue;
      phi[j] += w[size] * (v[mask | (1u << j)] - v[mask]);
    }
  }
  return phi;
}

}  // namespace

std::vector<double> exact_shapley(std::size_t m, const CoalitionValue & value)
{
  check_players(m);
  std::vector<double> v(std::size_t{1} << m);
  for (std::uint32_t mask = 0; mask < v.size(); ++mask) v[mask] = value(mask);
  return shapley_from_table(m, v);
}

std::vector<double> exact_shapley(std::size_t m, const CoalitionBatchValue & value)
{
  check_players(m);
  std::vector<std::uint32_t> masks(std::size_t{1} << m);
  std::iota(masks.begin(), masks.end(), 0u);
  std::vector<double> v = value(masks);
  if (v.size() != masks.size()) throw ContractError("coalition batch returned the wrong number of values");
  return shapley_from_table(m, v);
}

ShapleyResult exact_shapley_importance(InceModel & model, const PreparedDataset & data)
{
  const std::size_t m = data.num_features();
  check_players(m);
  model.check_compatible(data);
  const std::size_t coalitions = std::size_t{1} << m;
  const TaskKind task = model.stats().task;

  ShapleyResult out;
  out.values = RowMatrix::Zero(static_cast<Eigen::Index>(data.rows), static_cast<Eigen::Index>(m));
  if (task == TaskKind::Regression) {
    out.output_name = "prediction";
  } else if (task == TaskKind::Binary) {
    out.output_name = "probability of class " + model.stats().class_labels.at(1);
  } else {
    out.output_name = "probability of the predicted class";
  }

  Batch batch;
  batch.size = coalitions;
  batch.num_numerical = data.num_numerical;
  batch.num_categorical = data.num_categorical;
  batch.numerical.resize(coalitions * data.num_numerical);
  batch.categorical.resize(coalitions * data.num_categorical);
  for (std::size_t r = 0; r < data.rows; ++r) {
    for (std::size_t mask = 0; mask < coalitions; ++mask) {
      for (std::size_t j = 0; j < data.num_numerical; ++j) {
        batch.numerical[mask * data.num_numerical + j] = (mask >> j) & 1u ? data.numerical_at(r, j) : 0.0;
      }
      for (std::size_t c = 0; c < data.num_categorical; ++c) {
        const std::size_t j = data.num_numerical + c;
        batch.categorical[mask * data.num_categorical + c] = (mask >> j) & 1u ? data.categorical_at(r, c) : 0;
      }
    }
    Graph g(false);
    const RowMatrix logits = g.value(model.forward(g, batch).output).matrix();
    std::vector<double> v(coalitions);
    if (task == TaskKind::Regression) {
      for (std::size_t i = 0; i < coalitions; ++i) v[i] = logits(static_cast<Eigen::Index>(i), 0);
    } else {
      Eigen::Index target = 1;
      if (task == TaskKind::Multiclass) logits.row(static_cast<Eigen::Index>(coalitions - 1)).maxCoeff(&target);
      for (std::size_t i = 0; i < coalitions; ++i) {
        const auto row = logits.row(static_cast<Eigen::Index>(i));
        const double mx = row.maxCoeff();
        v[i] = std::exp(row(target) - mx) / (row.array() - mx).exp().sum();
      }
    }
    const auto phi = shapley_from_table(m, v);
    for (std::size_t j = 0; j < m; ++j) out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = phi[j];
    out.base.push_back(v.front());
    out.output.push_back(v.back());
  }
  out.importance.assign(m, 0.0);
  if (data.rows > 0) {
    for (std::size_t j = 0; j < m; ++j) {
      out.importance[j] = out.values.col(static_cast<Eigen::Index>(j)).cwiseAbs().mean();
    }
  }
  return out;
}

}  // namespace ince
