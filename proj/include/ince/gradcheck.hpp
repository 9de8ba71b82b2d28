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

#ifndef INCE__GRADCHECK_HPP_
#define INCE__GRADCHECK_HPP_

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ince/autodiff.hpp"

namespace ince
{

/// Builds a fresh graph and returns its scalar loss node.
using LossBuilder = std::function<Var(Graph &)>;

struct ForwardBackwardResult
{
  double loss = 0.0;
  std::map<std::string, Tensor> gradients;
};

/// Zeroes the parameters' grads, evaluates the loss and back-propagates.
ForwardBackwardResult forward_backward(const LossBuilder & build, std::span<Parameter * const> params);

struct GradCheckEntry
{
  std::string name;
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  /// Coordinates where a +-h perturbation flips a relu mask.
  std::size_t skipped = 0;
  bool pass = true;
};

struct GradCheckReport
{
  std::vector<GradCheckEntry> entries;
  double max_rel_error = 0.0;
  bool pass = true;
};

/// Compares analytic gradients against central differences, coordinate by
/// coordinate. Relative error is |a - n| / max(|a|, |n|, abs_floor).
GradCheckReport finite_diff_check(
  const LossBuilder & build, std::span<Parameter * const> params, double h = 1e-5,
  double tol = 1e-4, double abs_floor = 1e-6);

}  // namespace ince

#endif  // INCE__GRADCHECK_HPP_
