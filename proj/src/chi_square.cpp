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

#include "ince/chi_square.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ince/errors.hpp"

namespace ince
{

namespace
{

constexpr int kMaxIterations = 10000;
constexpr double kEps = 1e-16;

// P(a, x) by the power series, valid (and fast) for x < a + 1.
double lower_series(double a, double x)
{
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw NumericError("incomplete gamma series did not converge for a=" + std::to_string(a));
}

// Q(a, x) by modified Lentz evaluation of the continued fraction, x >= a + 1.
double upper_fraction(double a, double x)
{
  const double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
  }
  throw NumericError("incomplete gamma continued fraction did not converge for a=" + std::to_string(a));
}

void check_args(double a, double x)
{
  if (!(a > 0.0) || !std::isfinite(a)) throw ContractError("incomplete gamma needs a > 0");
  if (!(x >= 0.0)) throw ContractError("incomplete gamma needs x >= 0");
}

}  // namespace

double gamma_p(double a, double x)
{
  check_args(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return x < a + 1.0 ? lower_series(a, x) : 1.0 - upper_fraction(a, x);
}

double gamma_q(double a, double x)
{
  check_args(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return x < a + 1.0 ? 1.0 - lower_series(a, x) : upper_fraction(a, x);
}

double chi_square_survival(double x, double dof)
{
  if (!(dof > 0.0)) throw ContractError("chi-square needs positive degrees of freedom");
  if (x <= 0.0) return 1.0;
  return gamma_q(0.5 * dof, 0.5 * x);
}

}  // namespace ince
