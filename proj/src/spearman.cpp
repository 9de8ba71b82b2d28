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

#include "ince/spearman.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "ince/errors.hpp"

namespace ince
{

namespace
{

double pearson(std::span<const double> a, std::span<const double> b)
{
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> x)
{
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&x](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

SpearmanResult spearman_rank(std::span<const double> x, std::span<const double> y)
{
  if (x.size() != y.size()) throw ContractError("spearman inputs differ in length");
  if (x.size() < 3) throw ContractError("spearman needs at least 3 pairs");
  const std::vector<double> rx = average_ranks(x);
  std::vector<double> ry = average_ranks(y);
  auto constant = [](const std::vector<double> & r) {
    return std::all_of(r.begin(), r.end(), [&r](double v) { return v == r[0]; });
  };
  if (constant(rx) || constant(ry)) throw NumericError("spearman correlation is undefined for a constant input");

  SpearmanResult out;
  out.rho = pearson(rx, ry);
  const std::size_t n = x.size();
  if (n <= 10) {
    // Exact null distribution: every relabelling of y's ranks.
    out.method = "permutation";
    std::vector<double> perm = ry;
    std::sort(perm.begin(), perm.end());
    const double observed = std::abs(out.rho) - 1e-12;
    std::size_t extreme = 0;
    std::size_t total = 0;
    do {
      ++total;
      if (std::abs(pearson(rx, perm)) >= observed) ++extreme;
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.p_value = static_cast<double>(extreme) / static_cast<double>(total);
  } else {
    out.method = "t-approximation";
    const double r = std::clamp(out.rho, -1.0, 1.0);
    if (std::abs(r) >= 1.0) {
      out.p_value = 0.0;
    } else {
      const double df = static_cast<double>(n) - 2.0;
      const double t = r * std::sqrt(df / (1.0 - r * r));
      boost::math::students_t dist(df);
      out.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    }
  }
  return out;
}

}  // namespace ince
