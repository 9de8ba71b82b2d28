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

#ifndef INCE__LAYERS_HPP_
#define INCE__LAYERS_HPP_

#include <random>
#include <string>
#include <vector>

#include "ince/autodiff.hpp"

namespace ince
{

using Rng = std::mt19937_64;

/// y = x W + b with W stored in x out.
struct Linear
{
  Parameter weight;
  Parameter bias;

  Linear() = default;
  Linear(const std::string & name, std::size_t in, std::size_t out);

  std::size_t in_features() const { return weight.value.shape()[0]; }
  std::size_t out_features() const { return weight.value.shape()[1]; }
  /// W and b ~ U(-1/sqrt(in), 1/sqrt(in)).
  void init_uniform(Rng & rng);
  Var forward(Graph & g, Var x);
  std::size_t num_parameters() const { return weight.size() + bias.size(); }
};

/// Stack of Linear layers with relu between them and a linear output.
class Mlp
{
public:
  Mlp() = default;
  /// widths = {in, hidden..., out}; needs at least two entries.
  Mlp(const std::string & name, const std::vector<std::size_t> & widths);

  void init_uniform(Rng & rng);
  Var forward(Graph & g, Var x);
  /// Continue from the pre-activation of layer 0 (computed by the caller).
  Var forward_tail(Graph & g, Var first_preactivation);

  std::vector<Linear> & layers() { return layers_; }
  const std::vector<Linear> & layers() const { return layers_; }
  void collect(std::vector<Parameter *> & out);
  std::size_t num_parameters() const;

private:
  std::vector<Linear> layers_;
};

/// Fill every value with zero (identity tests, ablations).
void zero_parameters(std::vector<Parameter *> params);
std::size_t count_parameters(const std::vector<Parameter *> & params);

}  // namespace ince

#endif  // INCE__LAYERS_HPP_
