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

#include "ince/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "ince/errors.hpp"

namespace ince
{

ForwardBackwardResult forward_backward(const LossBuilder & build, std::span<Parameter * const> params)
{
  for (Parameter * p : params) p->zero_grad();
  Graph g;
  const Var loss = build(g);
  g.backward(loss);
  ForwardBackwardResult out;
  out.loss = g.value(loss)[0];
  for (const Parameter * p : params) out.gradients.emplace(p->name, p->grad);
  return out;
}

namespace
{

struct Eval
{
  double loss;
  std::uint64_t signature;
};

Eval evaluate(const LossBuilder & build)
{
  Graph g;
  const Var loss = build(g);
  if (g.value(loss).size() != 1) throw ContractError("finite_diff_check needs a scalar loss");
  return {g.value(loss)[0], g.relu_signature()};
}

}  // namespace

GradCheckReport finite_diff_check(
  const LossBuilder & build, std::span<Parameter * const> params, double h, double tol,
  double abs_floor)
{
  if (!(h > 0.0 && h <= 1e-2)) throw ContractError("finite_diff_check: h must lie in (0, 1e-2]");

  for (Parameter * p : params) p->zero_grad();
  std::uint64_t base_signature = 0;
  {
    Graph g;
    const Var loss = build(g);
    g.backward(loss);
    base_signature = g.relu_signature();
  }

  GradCheckReport report;
  for (Parameter * p : params) {
    const Tensor analytic = p->grad;
    GradCheckEntry entry;
    entry.name = p->name;
    for (std::size_t k = 0; k < p->value.size(); ++k) {
      const double saved = p->value[k];
      p->value[k] = saved + h;
      const Eval plus = evaluate(build);
      p->value[k] = saved - h;
      const Eval minus = evaluate(build);
      p->value[k] = saved;
      if (plus.signature != base_signature || minus.signature != base_signature) {
        ++entry.skipped;
        continue;
      }
      const double numeric = (plus.loss - minus.loss) / (2.0 * h);
      const double a = analytic[k];
      const double denom = std::max({std::abs(a), std::abs(numeric), abs_floor});
      entry.max_rel_error = std::max(entry.max_rel_error, std::abs(a - numeric) / denom);
      ++entry.checked;
    }
    entry.pass = entry.max_rel_error < tol;
    report.max_rel_error = std::max(report.max_rel_error, entry.max_rel_error);
    report.pass = report.pass && entry.pass;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace ince
