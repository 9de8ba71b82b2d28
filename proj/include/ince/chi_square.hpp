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

#ifndef INCE__CHI_SQUARE_HPP_
#define INCE__CHI_SQUARE_HPP_

namespace ince
{

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
/// Series for x < a + 1, Lentz continued fraction otherwise.
double gamma_q(double a, double x);

/// Pr(X >= x) for X ~ chi-square with `dof` degrees of freedom.
double chi_square_survival(double x, double dof);

}  // namespace ince

#endif  // INCE__CHI_SQUARE_HPP_
