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

#ifndef INCE__BATCH_HPP_
#define INCE__BATCH_HPP_

#include <span>
#include <vector>

#include "ince/preprocess.hpp"

namespace ince
{

/// Contiguous copy of a handful of prepared rows.
struct Batch
{
  std::size_t size = 0;
  std::size_t num_numerical = 0;
  std::size_t num_categorical = 0;
  std::vector<double> numerical;
  std::vector<int> categorical;
  std::vector<int> labels;
  std::vector<double> targets;
};

Batch make_batch(const PreparedDataset & data, std::span<const std::size_t> rows);
/// All rows in order.
Batch make_batch(const PreparedDataset & data);

}  // namespace ince

#endif  // INCE__BATCH_HPP_
