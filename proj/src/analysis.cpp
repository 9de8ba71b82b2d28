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

#include "ince/analysis.hpp"

#include <numeric>

#include "ince/errors.hpp"

namespace ince
{

InterpretationReport interpret_model(InceModel & model, const PreparedDataset & test, const InterpretOptions & options)
{
  InterpretationReport r;
  r.edges = collect_edge_vectors(model, test);
  std::vector<const EdgeSet *> population = {&r.edges.features};
  if (options.include_cls) population.push_back(&r.edges.cls);
  r.population = fit_population_stats(population);
  score_edges(r.edges.features, r.population);
  score_edges(r.edges.cls, r.population);
  r.summary = aggregate_interactions(r.edges.features, test);
  for (double p : r.summary.feature_scores) r.interaction_importance.push_back(1.0 - p);
  if (options.shapley) {
    r.shapley = exact_shapley_importance(model, test);
    try {
      r.spearman = spearman_rank(r.interaction_importance, r.shapley->importance);
    } catch (const NumericError & e) {
      r.summary.warnings.push_back(std::string("rank correlation skipped: ") + e.what());
    }
  }
  return r;
}

nlohmann::json interpretation_to_json(const InterpretationReport & r)
{
  nlohmann::json j = summary_to_json(r.summary);
  j["interaction_importance"] = r.interaction_importance;
  const double mean_d2 =
    r.edges.features.d2.empty() ? 0.0 :
    std::accumulate(r.edges.features.d2.begin(), r.edges.features.d2.end(), 0.0) /
    static_cast<double>(r.edges.features.d2.size());
  j["population"] = {
    {"records", r.population.count},
    {"regularization", r.population.lambda},
    {"mean_d2", mean_d2},
    {"degrees_of_freedom", r.population.mean.size()},
  };
  if (r.shapley) {
    j["shapley"] = {{"output", r.shapley->output_name}, {"importance", r.shapley->importance}};
  }
  if (r.spearman) {
    j["spearman"] = {{"rho", r.spearman->rho}, {"p_value", r.spearman->p_value}, {"method", r.spearman->method}};
  }
  return j;
}

}  // namespace ince
