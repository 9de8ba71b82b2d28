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

#ifndef INCE__PREPROCESS_HPP_
#define INCE__PREPROCESS_HPP_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "ince/csv.hpp"
#include "ince/schema.hpp"

namespace ince
{

struct NumericStats
{
  std::string name;
  double mean = 0.0;
  double std = 1.0;
  bool zero_variance = false;
};

/// Ordinal encoding of one categorical column. Code 0 is reserved for
/// missing/unknown values; observed values get 1..K in lexicographic order.
struct CategoryEncoding
{
  std::string name;
  std::vector<std::string> values;

  std::size_t cardinality() const { return values.size() + 1; }
  /// 0 when the value was not seen while fitting.
  int code_of(const std::string & value) const;
  const std::string & label_of(int code) const;
};

/// Everything learned from the training split, reused verbatim at inference.
struct FitStatistics
{
  TaskKind task = TaskKind::Regression;
  int num_classes = 1;
  std::vector<NumericStats> numerical;
  std::vector<CategoryEncoding> categorical;
  /// Class index -> original label string (classification only).
  std::vector<std::string> class_labels;
  std::string std_convention = "population";
  std::vector<std::string> warnings;
};

/// Sorted distinct target labels; numeric-looking labels sort by value.
std::vector<std::string> class_labels_of(const RawTable & table);

/// Fit z-score statistics and category maps. Class labels default to those
/// present in the table.
FitStatistics fit_statistics(
  const RawTable & table, std::optional<std::vector<std::string>> class_labels = std::nullopt);

nlohmann::json statistics_to_json(const FitStatistics & stats);
FitStatistics statistics_from_json(const nlohmann::json & j);
void save_statistics(const FitStatistics & stats, const std::filesystem::path & path);
FitStatistics load_statistics(const std::filesystem::path & path);

struct PreprocessOptions
{
  /// Unknown categorical values raise instead of mapping to code 0.
  bool strict_categories = false;
};

/// Model-ready rows.
struct PreparedDataset
{
  std::size_t rows = 0;
  std::size_t num_numerical = 0;
  std::size_t num_categorical = 0;
  /// rows x num_numerical, z-scored, missing -> 0.0.
  std::vector<double> numerical;
  /// rows x num_categorical, ordinal codes, missing/unknown -> 0.
  std::vector<int> categorical;
  /// Class index per row (classification).
  std::vector<int> labels;
  /// Target value per row (regression).
  std::vector<double> targets;
  /// Fold id per row, empty until assigned.
  std::vector<int> folds;
  FitStatistics stats;

  std::size_t num_features() const { return num_numerical + num_categorical; }
  std::vector<std::size_t> cardinalities() const;
  PreparedDataset subset(std::span<const std::size_t> row_ids) const;
  double numerical_at(std::size_t row, std::size_t j) const { return numerical[row * num_numerical + j]; }
  int categorical_at(std::size_t row, std::size_t j) const { return categorical[row * num_categorical + j]; }
};

/// Z-score numericals, ordinal-encode categoricals and impute missing values
/// with zero. Without `fit` the statistics are fitted on `table` itself.
PreparedDataset preprocess(
  const RawTable & table, const FitStatistics * fit = nullptr, PreprocessOptions options = {});

}  // namespace ince

#endif  // INCE__PREPROCESS_HPP_
