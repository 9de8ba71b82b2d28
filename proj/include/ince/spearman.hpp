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

#ifndef INCE__SPEARMAN_HPP_
#define INCE__SPEARMAN_HPP_

#include <span>
#include <string>
#include <vector>

namespace ince
{

struct SpearmanResult
{
  double rho = 0.0;
  /// Two-sided.
  double p_value = 1.0;
  /// "permutation" (exact, n <= 10) or "t-approximation".
  std::string method;
};

/// 1-based ranks; ties share their average rank.
std::vector<double> average_ranks(std::span<const double> x);

/// Rank correlation. Throws ContractError for mismatched or short inputs and
/// NumericError when either side is constant.
SpearmanResult spearman_rank(std::span<const double> x, std::span<const double> y);

}  // namespace ince

#endif  // INCE__SPEARMAN_HPP_
