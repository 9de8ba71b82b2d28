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

#ifndef INCE__INTERPRET_HPP_
#define INCE__INTERPRET_HPP_

#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "ince/model.hpp"
#include "ince/preprocess.hpp"

namespace ince
{

/// Directed edge latent vectors of the last interaction layer, one row per
/// (test row, edge). Node index M denotes the CLS node.
struct EdgeSet
{
  std::size_t latent = 0;
  std::vector<std::size_t> row;
  std::vector<std::size_t> src;
  std::vector<std::size_t> dst;
  RowMatrix vectors;
  /// Filled by score_edges.
  std::vector<double> d2;
  std::vector<double> p;

  std::size_t size() const { return row.size(); }
};

struct EdgeCollection
{
  /// Feature -> feature edges, N * M * (M - 1) records.
  EdgeSet features;
  /// Feature <-> CLS edges, N * 2M records, kept apart from the analysis by default.
  EdgeSet cls;
};

/// Runs the model over `data` and keeps the final edge states.
/// Throws UnsupportedError unless the model has an interaction-network encoder.
EdgeCollection collect_edge_vectors(InceModel & model, const PreparedDataset & data, std::size_t chunk = 256);

struct PopulationStats
{
  Eigen::VectorXd mean;
  /// Sample covariance plus lambda * I.
  Eigen::MatrixXd covariance;
  double lambda = 0.0;
  std::size_t count = 0;
};

/// Pooled mean and sample covariance of the given rows, regularized with
/// lambda = 1e-8 * trace(S) / l (1e-8 when the trace is zero).
PopulationStats fit_population_stats(const RowMatrix & vectors);
PopulationStats fit_population_stats(const std::vector<const EdgeSet *> & sets);

struct MahalanobisResult
{
  double d2 = 0.0;
  double p = 1.0;
};

/// Reusable factorization of S.
class MahalanobisScorer
{
public:
  explicit MahalanobisScorer(const PopulationStats & stats);
  MahalanobisResult operator()(const Eigen::Ref<const Eigen::VectorXd> & e) const;

private:
  Eigen::VectorXd mean_;
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
};

/// D^2 = (e - mu)^T S^-1 (e - mu), p = Pr(chi2_l >= D^2).
MahalanobisResult mahalanobis_pvalue(const Eigen::VectorXd & e, const PopulationStats & stats);
void score_edges(EdgeSet & edges, const PopulationStats & stats);

/// Labelled matrix; NaN marks an empty cell.
struct Heatmap
{
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  RowMatrix values;

  /// Mean of the non-empty cells of each row / column, and of all of them.
  std::vector<double> row_means() const;
  std::vector<double> col_means() const;
  double grand_mean() const;
};

/// CSV with a trailing "Mean" column and "Mean" row; empty cells are left blank.
void write_heatmap_csv(std::ostream & out, const Heatmap & h);

struct InteractionSummary
{
  std::vector<std::string> features;
  /// p(j1 -> j2), rows = source, columns = destination.
  Heatmap directed;
  /// 0.5 * [p(j1 -> j2) + p(j2 -> j1)].
  Heatmap symmetric;
  /// p(j) = mean over the other features of the symmetric score.
  std::vector<double> feature_scores;
  /// Rows/columns keyed by "feature=value" for categoricals, the bare name for numericals.
  Heatmap feature_values;
  std::size_t test_rows = 0;
  std::vector<std::string> warnings;
};

/// Per-edge mean of the record p-values over `test_rows` rows, plus the
/// feature-value breakdown (both endpoints keyed by their value).
InteractionSummary aggregate_interactions(const EdgeSet & scored, const PreparedDataset & data);

nlohmann::json summary_to_json(const InteractionSummary & s);

struct EmbeddingPoint
{
  std::size_t row = 0;
  std::size_t feature = 0;
  std::string name;
  std::string value;
  /// "columnar" or "contextual".
  std::string kind;
  double x = 0.0;
  double y = 0.0;
};

/// Columnar embeddings and the last-layer messages sent from each feature to
/// CLS, as 2-D points. Requires l == 2.
std::vector<EmbeddingPoint> export_embedding_points(InceModel & model, const PreparedDataset & data);
void write_embedding_csv(std::ostream & out, const std::vector<EmbeddingPoint> & points);

/// Display string of feature `j` in row `row` (raw value for numericals).
std::string feature_value_label(const PreparedDataset & data, std::size_t row, std::size_t j);

}  // namespace ince

#endif  // INCE__INTERPRET_HPP_
