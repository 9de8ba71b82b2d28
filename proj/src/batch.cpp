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

#include "ince/batch.hpp"

#include <numeric>

#include "ince/errors.hpp"

namespace ince
{

Batch make_batch(const PreparedDataset & data, std::span<const std::size_t> rows)
{
  Batch b;
  b.size = rows.size();
  b.num_numerical = data.num_numerical;
  b.num_categorical = data.num_categorical;
  b.numerical.reserve(rows.size() * data.num_numerical);
  b.categorical.reserve(rows.size() * data.num_categorical);
  for (std::size_t r : rows) {
    if (r >= data.rows) throw ContractError("make_batch: row out of range");
    for (std::size_t j = 0; j < data.num_numerical; ++j) b.numerical.push_back(data.numerical_at(r, j));
    for (std::size_t j = 0; j < data.num_categorical; ++j) b.categorical.push_back(data.categorical_at(r, j));
    if (!data.labels.empty()) b.labels.push_back(data.labels[r]);
    if (!data.targets.empty()) b.targets.push_back(data.targets[r]);
  }
  return b;
}

Batch make_batch(const PreparedDataset & data)
{
  std::vector<std::size_t> rows(data.rows);
  std::iota(rows.begin(), rows.end(), 0);
  return make_batch(data, rows);
}

}  // namespace ince
