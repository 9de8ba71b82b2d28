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

#include "ince/folds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "ince/errors.hpp"

namespace ince
{

namespace
{

std::vector<std::vector<std::size_t>> strata(std::size_t n, std::span<const int> labels)
{
  if (labels.empty()) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    return {all};
  }
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < n; ++i) by_class[labels[i]].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (auto & [cls, rows] : by_class) out.push_back(std::move(rows));
  return out;
}

}  // namespace

std::vector<int> split_kfold(
  std::size_t n, std::span<const int> labels, int k, std::uint64_t seed,
  std::vector<std::string> * warnings)
{
  if (k < 2) throw ContractError("split_kfold needs k >= 2");
  if (n < static_cast<std::size_t>(k)) throw ContractError("split_kfold needs at least k rows");
  if (!labels.empty() && labels.size() != n) throw ContractError("split_kfold: one label per row");

  auto groups = strata(n, labels);
  const bool too_small = std::any_of(groups.begin(), groups.end(), [k](const auto & g) {
    return g.size() < static_cast<std::size_t>(k);
  });
  if (too_small && groups.size() > 1) {
    if (warnings) warnings->push_back("a class has fewer members than folds; split is not stratified");
    groups = strata(n, {});
  }

  std::mt19937_64 rng(seed);
  std::vector<int> folds(n, -1);
  std::size_t counter = 0;
  for (auto & g : groups) {
    std::shuffle(g.begin(), g.end(), rng);
    for (std::size_t row : g) folds[row] = static_cast<int>(counter++ % static_cast<std::size_t>(k));
  }
  return folds;
}

TrainTestSplit fold_split(std::span<const int> folds, int fold)
{
  TrainTestSplit s;
  for (std::size_t i = 0; i < folds.size(); ++i) {
    (folds[i] == fold ? s.test : s.train).push_back(i);
  }
  return s;
}

TrainTestSplit train_test_split(
  std::size_t n, std::span<const int> labels, double test_fraction, std::uint64_t seed)
{
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ContractError("test fraction must lie in (0, 1)");
  }
  if (!labels.empty() && labels.size() != n) throw ContractError("train_test_split: one label per row");
  std::mt19937_64 rng(seed);
  TrainTestSplit s;
  for (auto & g : strata(n, labels)) {
    std::shuffle(g.begin(), g.end(), rng);
    const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(g.size())));
    for (std::size_t i = 0; i < g.size(); ++i) (i < n_test ? s.test : s.train).push_back(g[i]);
  }
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

}  // namespace ince
