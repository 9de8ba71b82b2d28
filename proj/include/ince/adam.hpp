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

#ifndef INCE__ADAM_HPP_
#define INCE__ADAM_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "ince/tensor.hpp"

namespace ince
{

struct AdamOptions
{
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// First/second moment buffers, one per parameter, plus the step counter.
struct AdamState
{
  AdamOptions options;
  std::vector<Tensor> m;
  std::vector<Tensor> v;
  std::int64_t t = 0;
};

/// Bias-corrected Adam update of every parameter from its grad.
///
/// The state is lazily sized on the first call; afterwards the parameter
/// list must keep the same order and shapes.
void adam_step(std::span<Parameter * const> params, AdamState & state);

}  // namespace ince

#endif  // INCE__ADAM_HPP_
