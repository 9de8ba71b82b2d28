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

#ifndef INCE__ANALYSIS_HPP_
#define INCE__ANALYSIS_HPP_

#include <optional>
#include <vector>

#include "json.hpp"

#include "ince/interpret.hpp"
#include "ince/shapley.hpp"
#include "ince/spearman.hpp"

namespace ince
{

struct InterpretOptions
{
  /// Pool feature<->CLS edges into the population mean/covariance too.
  bool include_cls = false;
  /// Also compute the exact Shapley importance and its rank correlation.
  bool shapley = true;
};

struct InterpretationReport
{
  EdgeCollection edges;
  PopulationStats population;
  InteractionSummary summary;
  /// 1 - p(j): larger means the feature's messages stand out more.
  std::vector<double> interaction_importance;
  std::optional<ShapleyResult> shapley;
  /// Between interaction_importance and the Shapley importance.
  std::optional<SpearmanResult> spearman;
};

/// Edge collection, population fit, Mahalanobis p-values and aggregation on
/// `test`, optionally compared with exact Shapley importances.
InterpretationReport interpret_model(InceModel & model, const PreparedDataset & test, const InterpretOptions & options = {});

nlohmann::json interpretation_to_json(const InterpretationReport & r);

}  // namespace ince

#endif  // INCE__ANALYSIS_HPP_
