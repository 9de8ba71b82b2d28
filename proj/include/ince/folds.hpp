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

#ifndef INCE__FOLDS_HPP_
#define INCE__FOLDS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ince
{

/// Assign each of `n` rows to one of `k` folds.
///
/// With class labels the split is stratified: each class is shuffled and
/// dealt round-robin, continuing the fold counter from class to class, so
/// fold sizes differ by at most one. If any class has fewer than `k`
/// members a warning is appended and the split falls back to a plain
/// shuffle. Pass empty labels for regression.
std::vector<int> split_kfold(
  std::size_t n, std::span<const int> labels, int k, std::uint64_t seed,
  std::vector<std::string> * warnings = nullptr);

struct TrainTestSplit
{
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Row ids of fold `fold` versus the rest.
TrainTestSplit fold_split(std::span<const int> folds, int fold);

/// Stratified (when labels are given) hold-out split.
TrainTestSplit train_test_split(
  std::size_t n, std::span<const int> labels, double test_fraction, std::uint64_t seed);

}  // namespace ince

#endif  // INCE__FOLDS_HPP_
