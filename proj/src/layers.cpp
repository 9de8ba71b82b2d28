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

#include "ince/layers.hpp"

#include <cmath>

#include "ince/errors.hpp"

namespace ince
{

Linear::Linear(const std::string & name, std::size_t in, std::size_t out)
: weight(name + ".weight", Tensor({in, out})), bias(name + ".bias", Tensor({out}))
{
  if (in == 0 || out == 0) throw ContractError("linear layer '" + name + "' needs nonzero widths");
}

void Linear::init_uniform(Rng & rng)
{
  const double bound = 1.0 / std::sqrt(static_cast<double>(in_features()));
  std::uniform_real_distribution<double> u(-bound, bound);
  for (double & w : weight.value.data()) w = u(rng);
  for (double & b : bias.value.data()) b = u(rng);
}

Var Linear::forward(Graph & g, Var x)
{
  return g.add_bias(g.matmul(x, g.param(weight)), g.param(bias));
}

Mlp::Mlp(const std::string & name, const std::vector<std::size_t> & widths)
{
  if (widths.size() < 2) throw ContractError("mlp '" + name + "' needs input and output widths");
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    layers_.emplace_back(name + "." + std::to_string(i), widths[i], widths[i + 1]);
  }
}

void Mlp::init_uniform(Rng & rng)
{
  for (auto & l : layers_) l.init_uniform(rng);
}

Var Mlp::forward(Graph & g, Var x)
{
  return forward_tail(g, layers_.front().forward(g, x));
}

Var Mlp::forward_tail(Graph & g, Var h)
{
  for (std::size_t i = 1; i < layers_.size(); ++i) h = layers_[i].forward(g, g.relu(h));
  return h;
}

void Mlp::collect(std::vector<Parameter *> & out)
{
  for (auto & l : layers_) {
    out.push_back(&l.weight);
    out.push_back(&l.bias);
  }
}

std::size_t Mlp::num_parameters() const
{
  std::size_t n = 0;
  for (const auto & l : layers_) n += l.num_parameters();
  return n;
}

void zero_parameters(std::vector<Parameter *> params)
{
  for (Parameter * p : params) p->value.fill(0.0);
}

std::size_t count_parameters(const std::vector<Parameter *> & params)
{
  std::size_t n = 0;
  for (const Parameter * p : params) n += p->size();
  return n;
}

}  // namespace ince
