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

#ifndef INCE__SHAPLEY_HPP_
#define INCE__SHAPLEY_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ince/model.hpp"
#include "ince/preprocess.hpp"

namespace ince
{

inline constexpr std::size_t kMaxShapleyFeatures = 10;

/// Bit j of a coalition mask set means feature j is present.
using CoalitionValue = std::function<double(std::uint32_t mask)>;
/// Values of many coalitions at once, in the order given.
using CoalitionBatchValue = std::function<std::vector<double>(std::span<const std::uint32_t> masks)>;

/// Exact Shapley values of a set function over `m` players by full enumeration.
std::vector<double> exact_shapley(std::size_t m, const CoalitionValue & value);
std::vector<double> exact_shapley(std::size_t m, const CoalitionBatchValue & value);

struct ShapleyResult
{
  /// rows x M attributions.
  RowMatrix values;
  /// f(background) per row (constant for a fixed background).
  std::vector<double> base;
  /// f(x) per row.
  std::vector<double> output;
  /// Mean |phi_j| over rows.
  std::vector<double> importance;
  /// What f is: "probability of class <label>" or "prediction".
  std::string output_name;
};

/// Exact attributions of the model output with absent features replaced by the
/// background (z-scored training mean 0.0 for numericals, code 0 for categoricals).
/// f = P(class 1) for binary tasks, P(predicted class of x) for multiclass,
/// the prediction for regression. Refuses more than kMaxShapleyFeatures features.
ShapleyResult exact_shapley_importance(InceModel & model, const PreparedDataset & data);

}  // namespace ince

#endif  // INCE__SHAPLEY_HPP_
