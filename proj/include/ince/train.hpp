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

#ifndef INCE__TRAIN_HPP_
#define INCE__TRAIN_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ince/model.hpp"
#include "ince/preprocess.hpp"

namespace ince
{

struct Metrics
{
  TaskKind task = TaskKind::Regression;
  std::size_t rows = 0;
  /// Mean cross-entropy or MSE.
  double loss = 0.0;
  /// Classification only (NaN otherwise).
  double accuracy = 0.0;
  /// Regression only (NaN otherwise).
  double mse = 0.0;
  /// True / predicted rows per class (classification only).
  std::vector<std::size_t> class_counts;
  std::vector<std::size_t> predicted_counts;

  /// Accuracy or MSE depending on the task.
  double primary() const;
};

const char * primary_metric_name(TaskKind task);
bool higher_is_better(TaskKind task);
/// True when `a` is strictly better than `b` for this task.
bool metric_better(TaskKind task, double a, double b);

/// Metrics of raw model outputs; argmax ties resolve to the lowest class.
Metrics metrics_from_outputs(const RowMatrix & outputs, const PreparedDataset & data);
Metrics evaluate(InceModel & model, const PreparedDataset & data);
nlohmann::json metrics_to_json(const Metrics & m);

struct EpochRecord
{
  std::size_t epoch = 0;
  double train_loss = 0.0;
  std::optional<double> val_metric;
  std::optional<double> val_loss;
  double seconds = 0.0;
};

nlohmann::json epoch_to_json(const EpochRecord & r);

using EpochCallback = std::function<void(const EpochRecord &)>;

struct TrainResult
{
  InceModel final_model;
  /// Model of the best validation epoch; equals `final_model` without validation data.
  InceModel best_model;
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;
  std::optional<double> best_metric;
  /// Initializations drawn before one produced row-dependent outputs.
  std::size_t init_attempts = 1;
};

/// True when the model maps every row of `probe` to the same output.
bool output_is_row_constant(InceModel & model, const PreparedDataset & probe);
/// Initializes from `seed`, redrawing (with derived seeds) while the output is
/// row-constant on the first rows of `data`, i.e. some ReLU layer is dead
/// everywhere. Returns the number of draws. Deterministic in `seed`.
std::size_t initialize_alive(InceModel & model, std::uint64_t seed, const PreparedDataset & data);

/// Adam on minibatches reshuffled every epoch. Deterministic in `config.seed`.
/// Throws NumericError naming the epoch and batch when the loss is not finite.
TrainResult train(
  const InceConfig & config, const PreparedDataset & train_data,
  const PreparedDataset * val_data = nullptr, const EpochCallback & on_epoch = {});

struct FoldResult
{
  std::size_t fold = 0;
  /// Test-fold metrics of the last epoch.
  Metrics final_metrics;
  /// Test-fold metrics of the best-monitored epoch.
  Metrics best_metrics;
  std::size_t best_epoch = 0;
  std::vector<EpochRecord> history;
};

struct CvResult
{
  TaskKind task = TaskKind::Regression;
  std::vector<FoldResult> folds;
  /// Over final-epoch fold metrics.
  double mean = 0.0;
  double std = 0.0;
  /// Over best-epoch fold metrics.
  double best_mean = 0.0;
  double best_std = 0.0;
};

struct CvOptions
{
  int folds = 5;
  /// Fold assignment seed; defaults to the model seed.
  std::optional<std::uint64_t> split_seed;
  PreprocessOptions preprocess;
  /// Called after each fold with its final model.
  std::function<void(const FoldResult &, InceModel &)> on_fold;
  std::function<void(std::size_t fold, const EpochRecord &)> on_epoch;
  std::vector<std::string> * warnings = nullptr;
};

/// K-fold CV; each fold refits preprocessing on its training rows only.
CvResult cross_validate(const InceConfig & config, const RawTable & table, const CvOptions & options = {});

/// Arithmetic mean and sample standard deviation (0 for fewer than two values).
std::pair<double, double> mean_and_std(const std::vector<double> & values);

nlohmann::json cv_to_json(const CvResult & r);

}  // namespace ince

#endif  // INCE__TRAIN_HPP_
