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

#ifndef INCE__EXPERIMENT_HPP_
#define INCE__EXPERIMENT_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ince/csv.hpp"
#include "ince/model.hpp"
#include "ince/train.hpp"

namespace ince
{

struct DatasetRef
{
  std::filesystem::path csv;
  std::filesystem::path schema;
  /// Keep a seeded random subset of this many rows (0 keeps all).
  std::size_t max_rows = 0;
  std::uint64_t subsample_seed = 0;
};

struct LoadedDataset
{
  RawTable table;
  /// Dataset name (CSV stem).
  std::string name;
  /// FNV-1a of CSV bytes, schema text and subsampling.
  std::string fingerprint;
};

LoadedDataset load_dataset(const DatasetRef & ref);

/// Train/test split with preprocessing fitted on the training rows only;
/// stratified for classification.
struct Holdout
{
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
  PreparedDataset train;
  PreparedDataset test;
};

Holdout make_holdout(const RawTable & table, double test_fraction, std::uint64_t seed,
  PreprocessOptions options = {});

struct ExperimentSpec
{
  DatasetRef dataset;
  std::vector<std::size_t> latents = {16, 32, 64, 128};
  std::vector<std::size_t> layers = {2};
  std::vector<std::size_t> depths = {3};
  std::vector<EncoderKind> encoders = {EncoderKind::Interaction};
  std::vector<std::size_t> heads = {1};
  std::vector<std::size_t> feedforward = {512};
  std::size_t decoder_hidden = 0;
  double learning_rate = 1e-3;
  std::size_t batch_size = 256;
  std::size_t epochs = 200;
  int folds = 5;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  std::filesystem::path output;

  /// Throws ContractError for an empty grid or repeated seeds.
  void validate() const;
};

/// One config per grid point and seed. Interaction points span (l, n, d);
/// transformer points span (l, n, h, f).
std::vector<InceConfig> expand_grid(const ExperimentSpec & spec);

/// Content hash of everything that determines a run's result.
std::string run_id(const InceConfig & config, const LoadedDataset & data, int folds);

struct RunRecord
{
  std::string id;
  std::string dataset;
  InceConfig config;
  int folds = 0;
  std::string metric;
  double mean = 0.0;
  double std = 0.0;
  double best_mean = 0.0;
  double best_std = 0.0;
  std::vector<double> fold_values;
  double seconds = 0.0;
};

nlohmann::json record_to_json(const RunRecord & r);
RunRecord record_from_json(const nlohmann::json & j);

struct ExperimentSummary
{
  std::vector<RunRecord> runs;
  std::size_t trained = 0;
  std::size_t skipped = 0;
};

using ProgressCallback = std::function<void(const std::string & message)>;

/// Cross-validates every grid point x seed under <output>/runs/<id>/ and keeps
/// <output>/index.json in sync. Runs with a metrics.json are complete and are
/// skipped on rerun.
ExperimentSummary run_experiment(const ExperimentSpec & spec, const ProgressCallback & progress = {});

/// Every record listed in <dir>/index.json.
std::vector<RunRecord> read_index(const std::filesystem::path & dir);

struct NormalizedCurves
{
  std::string dataset;
  std::size_t latent = 0;
  std::string metric;
  bool higher_is_better = true;
  /// Parameter values of each curve point (d for C_d, n for C_n).
  std::vector<std::size_t> d_values;
  std::vector<std::size_t> n_values;
  /// Seed-averaged raw metrics.
  std::vector<double> raw_d;
  std::vector<double> raw_n;
  std::vector<double> c_d;
  std::vector<double> c_n;
  double base = 0.0;
  double best = 0.0;
  /// best == base: every entry is reported as 0.
  bool degenerate = false;
};

/// Affine rescaling of the two curves so (d=1, n=1) maps to 0 and the best
/// entry of either curve maps to 1. raw_d[0] and raw_n[0] are both the base.
NormalizedCurves normalize_curves(
  const std::vector<double> & raw_d, const std::vector<double> & raw_n, bool higher_is_better);

/// Groups interaction-network runs by (dataset, l), averages seeds, and
/// normalizes C_d (n = 1) and C_n (d = 1). Groups without a (d=1, n=1) run are skipped.
std::vector<NormalizedCurves> normalized_metric_table(const std::vector<RunRecord> & runs);
void write_normalized_csv(std::ostream & out, const std::vector<NormalizedCurves> & table);

/// Mean and standard deviation of C_d and C_n across tables, per curve index.
struct AveragedCurves
{
  std::vector<std::size_t> index;
  std::vector<double> c_d_mean;
  std::vector<double> c_d_std;
  std::vector<double> c_n_mean;
  std::vector<double> c_n_std;
};

/// Only indices shared by every non-degenerate table are averaged.
AveragedCurves average_curves(const std::vector<NormalizedCurves> & table);

}  // namespace ince

#endif  // INCE__EXPERIMENT_HPP_
