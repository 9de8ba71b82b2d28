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

#ifndef INCE_TESTS__TEST_UTIL_HPP_
#define INCE_TESTS__TEST_UTIL_HPP_

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ince/preprocess.hpp"
#include "ince/tensor.hpp"

namespace ince::testing
{

inline Tensor random_tensor(Shape shape, std::mt19937_64 & rng, double lo = -1.0, double hi = 1.0)
{
  std::uniform_real_distribution<double> u(lo, hi);
  Tensor t(std::move(shape));
  for (double & v : t.data()) v = u(rng);
  return t;
}

/// Random prepared dataset with `num_numerical` N(0,1) columns and one
/// categorical column per entry of `values_per_categorical` (codes 1..K).
/// Labels/targets come from `target(numerical row, codes row)`.
inline PreparedDataset toy_dataset(
  std::size_t rows, std::size_t num_numerical, const std::vector<std::size_t> & values_per_categorical,
  TaskKind task, std::uint64_t seed,
  const std::function<double(const double *, const int *)> & target, int num_classes = 2)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  PreparedDataset d;
  d.rows = rows;
  d.num_numerical = num_numerical;
  d.num_categorical = values_per_categorical.size();
  d.stats.task = task;
  d.stats.num_classes = task == TaskKind::Regression ? 1 : num_classes;
  for (std::size_t j = 0; j < num_numerical; ++j) d.stats.numerical.push_back({"x" + std::to_string(j), 0.0, 1.0, false});
  for (std::size_t c = 0; c < values_per_categorical.size(); ++c) {
    CategoryEncoding e;
    e.name = "c" + std::to_string(c);
    for (std::size_t k = 0; k < values_per_categorical[c]; ++k) e.values.push_back("v" + std::to_string(k));
    d.stats.categorical.push_back(e);
  }
  for (int k = 0; k < d.stats.num_classes && task != TaskKind::Regression; ++k) {
    d.stats.class_labels.push_back(std::to_string(k));
  }
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < num_numerical; ++j) d.numerical.push_back(normal(rng));
    for (std::size_t c = 0; c < values_per_categorical.size(); ++c) {
      std::uniform_int_distribution<int> code(1, static_cast<int>(values_per_categorical[c]));
      d.categorical.push_back(code(rng));
    }
    const double y = target(d.numerical.data() + r * num_numerical, d.categorical.data() + r * d.num_categorical);
    if (task == TaskKind::Regression) {
      d.targets.push_back(y);
    } else {
      d.labels.push_back(static_cast<int>(y));
    }
  }
  return d;
}

}  // namespace ince::testing

#endif  // INCE_TESTS__TEST_UTIL_HPP_
