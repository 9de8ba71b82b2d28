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

#include "ince/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "ince/adam.hpp"
#include "ince/batch.hpp"
#include "ince/errors.hpp"
#include "ince/folds.hpp"

namespace ince
{

namespace
{

std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

const double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::size_t kMaxInitAttempts = 16;

}  // namespace

bool output_is_row_constant(InceModel & model, const PreparedDataset & probe)
{
  const RowMatrix out = model.predict(probe);
  if (out.rows() < 2) return false;
  const double spread = (out.rowwise() - out.row(0)).cwiseAbs().maxCoeff();
  return spread <= 1e-12 * std::max(1.0, out.cwiseAbs().maxCoeff());
}

std::size_t initialize_alive(InceModel & model, std::uint64_t seed, const PreparedDataset & data)
{
  std::vector<std::size_t> rows(std::min<std::size_t>(data.rows, 256));
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  const PreparedDataset probe = data.subset(rows);
  std::uint64_t s = seed;
  for (std::size_t attempt = 1; attempt <= kMaxInitAttempts; ++attempt) {
    model.init(s);
    if (!output_is_row_constant(model, probe)) return attempt;
    s = splitmix64(s);
  }
  throw NumericError(
    "every initialization tried produced the same output for all rows (dead ReLU layers); "
    "increase the latent size or the decoder width");
}

double Metrics::primary() const
{
  return task == TaskKind::Regression ? mse : accuracy;
}

const char * primary_metric_name(TaskKind task)
{
  return task == TaskKind::Regression ? "mse" : "accuracy";
}

bool higher_is_better(TaskKind task) { return task != TaskKind::Regression; }

bool metric_better(TaskKind task, double a, double b)
{
  return higher_is_better(task) ? a > b : a < b;
}

Metrics metrics_from_outputs(const RowMatrix & outputs, const PreparedDataset & data)
{
  Metrics m;
  m.task = data.stats.task;
  m.rows = data.rows;
  if (static_cast<std::size_t>(outputs.rows()) != data.rows) {
    throw ContractError("output rows differ from dataset rows");
  }
  if (data.rows == 0) throw ContractError("cannot evaluate an empty split");
  if (m.task == TaskKind::Regression) {
    if (outputs.cols() != 1) throw ContractError("regression outputs must have one column");
    double sum = 0.0;
    for (std::size_t i = 0; i < data.rows; ++i) {
      const double d = outputs(static_cast<Eigen::Index>(i), 0) - data.targets[i];
      sum += d * d;
    }
    m.mse = sum / static_cast<double>(data.rows);
    m.loss = m.mse;
    m.accuracy = kNaN;
    return m;
  }
  const auto c = static_cast<std::size_t>(data.stats.num_classes);
  if (static_cast<std::size_t>(outputs.cols()) != c) {
    throw ContractError("classification outputs must have one column per class");
  }
  m.class_counts.assign(c, 0);
  m.predicted_counts.assign(c, 0);
  std::size_t correct = 0;
  double loss = 0.0;
  for (std::size_t i = 0; i < data.rows; ++i) {
    const auto row = outputs.row(static_cast<Eigen::Index>(i));
    Eigen::Index arg = 0;
    for (Eigen::Index k = 1; k < row.size(); ++k) {
      if (row(k) > row(arg)) arg = k;
    }
    const int label = data.labels[i];
    if (label < 0 || static_cast<std::size_t>(label) >= c) throw ContractError("label out of range");
    ++m.class_counts[static_cast<std::size_t>(label)];
    ++m.predicted_counts[static_cast<std::size_t>(arg)];
    if (arg == label) ++correct;
    const double mx = row.maxCoeff();
    const double lse = mx + std::log((row.array() - mx).exp().sum());
    loss += lse - row(label);
  }
  m.accuracy = static_cast<double>(correct) / static_cast<double>(data.rows);
  m.loss = loss / static_cast<double>(data.rows);
  m.mse = kNaN;
  return m;
}

Metrics evaluate(InceModel & model, const PreparedDataset & data)
{
  return metrics_from_outputs(model.predict(data), data);
}

nlohmann::json metrics_to_json(const Metrics & m)
{
  nlohmann::json j = {
    {"task", to_string(m.task)},
    {"rows", m.rows},
    {"loss", m.loss},
    {"metric", primary_metric_name(m.task)},
    {"value", m.primary()},
  };
  if (m.task == TaskKind::Regression) {
    j["mse"] = m.mse;
  } else {
    j["accuracy"] = m.accuracy;
    j["class_counts"] = m.class_counts;
    j["predicted_counts"] = m.predicted_counts;
  }
  return j;
}

nlohmann::json epoch_to_json(const EpochRecord & r)
{
  nlohmann::json j = {{"epoch", r.epoch}, {"train_loss", r.train_loss}, {"seconds", r.seconds}};
  j["val_metric"] = r.val_metric ? nlohmann::json(*r.val_metric) : nlohmann::json(nullptr);
  j["val_loss"] = r.val_loss ? nlohmann::json(*r.val_loss) : nlohmann::json(nullptr);
  return j;
}

TrainResult train(
  const InceConfig & config, const PreparedDataset & train_data, const PreparedDataset * val_data,
  const EpochCallback & on_epoch)
{
  if (train_data.rows == 0) throw ContractError("training split is empty");
  TrainResult result;
  result.final_model = InceModel(config, train_data.stats);
  InceModel & model = result.final_model;
  result.init_attempts = initialize_alive(model, config.seed, train_data);
  if (val_data) model.check_compatible(*val_data);

  std::vector<Parameter *> params = model.parameters();
  AdamState adam;
  adam.options.learning_rate = config.learning_rate;

  std::vector<std::size_t> order(train_data.rows);
  std::vector<std::size_t> rows;
  const TaskKind task = train_data.stats.task;
  bool have_best = false;

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 shuffle_rng(splitmix64(config.seed ^ splitmix64(epoch)));
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    double loss_sum = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t b = 0; b < order.size(); b += config.batch_size, ++batch_index) {
      const std::size_t end = std::min(order.size(), b + config.batch_size);
      rows.assign(order.begin() + static_cast<std::ptrdiff_t>(b), order.begin() + static_cast<std::ptrdiff_t>(end));
      Batch batch = make_batch(train_data, rows);
      for (Parameter * p : params) p->zero_grad();
      Graph g(false);
      Var loss = model.loss(g, batch);
      const double value = g.value(loss)[0];
      if (!std::isfinite(value)) {
        throw NumericError(
          "training loss is not finite at epoch " + std::to_string(epoch) + ", batch " +
          std::to_string(batch_index));
      }
      g.backward(loss);
      adam_step(params, adam);
      loss_sum += value * static_cast<double>(batch.size);
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(train_data.rows);
    if (val_data) {
      const Metrics vm = evaluate(model, *val_data);
      rec.val_metric = vm.primary();
      rec.val_loss = vm.loss;
      if (!have_best || metric_better(task, vm.primary(), *result.best_metric)) {
        have_best = true;
        result.best_metric = vm.primary();
        result.best_epoch = epoch;
        result.best_model = model;
      }
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.history.push_back(rec);
    if (on_epoch) on_epoch(rec);
  }
  if (!have_best) {
    result.best_model = model;
    result.best_epoch = config.epochs;
  }
  return result;
}

std::pair<double, double> mean_and_std(const std::vector<double> & values)
{
  if (values.empty()) return {kNaN, kNaN};
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

CvResult cross_validate(const InceConfig & config, const RawTable & table, const CvOptions & options)
{
  if (options.folds < 2) throw ContractError("cross-validation needs at least 2 folds");
  const bool classification = table.schema.task != TaskKind::Regression;
  std::optional<std::vector<std::string>> class_labels;
  std::vector<int> labels;
  if (classification) {
    class_labels = class_labels_of(table);
    labels = preprocess(table, nullptr, options.preprocess).labels;
  }
  const std::vector<int> folds = split_kfold(
    table.rows, labels, options.folds, options.split_seed.value_or(config.seed), options.warnings);

  CvResult out;
  out.task = table.schema.task;
  std::vector<double> finals;
  std::vector<double> bests;
  for (int f = 0; f < options.folds; ++f) {
    const TrainTestSplit split = fold_split(folds, f);
    const RawTable train_raw = table.subset(split.train);
    const RawTable test_raw = table.subset(split.test);
    const FitStatistics stats = fit_statistics(train_raw, class_labels);
    if (options.warnings) {
      for (const auto & w : stats.warnings) options.warnings->push_back("fold " + std::to_string(f) + ": " + w);
    }
    const PreparedDataset train_data = preprocess(train_raw, &stats, options.preprocess);
    const PreparedDataset test_data = preprocess(test_raw, &stats, options.preprocess);

    EpochCallback cb;
    if (options.on_epoch) {
      cb = [&options, f](const EpochRecord & r) { options.on_epoch(static_cast<std::size_t>(f), r); };
    }
    TrainResult tr = train(config, train_data, &test_data, cb);
    FoldResult fr;
    fr.fold = static_cast<std::size_t>(f);
    fr.final_metrics = evaluate(tr.final_model, test_data);
    fr.best_metrics = evaluate(tr.best_model, test_data);
    fr.best_epoch = tr.best_epoch;
    fr.history = std::move(tr.history);
    finals.push_back(fr.final_metrics.primary());
    bests.push_back(fr.best_metrics.primary());
    if (options.on_fold) options.on_fold(fr, tr.final_model);
    out.folds.push_back(std::move(fr));
  }
  std::tie(out.mean, out.std) = mean_and_std(finals);
  std::tie(out.best_mean, out.best_std) = mean_and_std(bests);
  return out;
}

nlohmann::json cv_to_json(const CvResult & r)
{
  nlohmann::json folds = nlohmann::json::array();
  for (const auto & f : r.folds) {
    folds.push_back({
      {"fold", f.fold},
      {"final", metrics_to_json(f.final_metrics)},
      {"best", metrics_to_json(f.best_metrics)},
      {"best_epoch", f.best_epoch},
    });
  }
  return {
    {"metric", primary_metric_name(r.task)},
    {"mean", r.mean},
    {"std", r.std},
    {"best_epoch_mean", r.best_mean},
    {"best_epoch_std", r.best_std},
    {"folds", folds},
  };
}

}  // namespace ince
