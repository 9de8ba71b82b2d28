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

#include "ince/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ince/analysis.hpp"
#include "ince/checkpoint.hpp"
#include "ince/errors.hpp"
#include "ince/experiment.hpp"
#include "ince/paramcount.hpp"
#include "ince/train.hpp"

namespace ince
{

namespace fs = std::filesystem;

namespace
{

struct DataFlags
{
  std::string csv;
  std::string schema;
  std::size_t rows = 0;
  std::uint64_t rows_seed = 0;

  void add(CLI::App * app)
  {
    app->add_option("--data", csv, "CSV file")->required()->check(CLI::ExistingFile);
    app->add_option("--schema", schema, "Schema file")->required()->check(CLI::ExistingFile);
    app->add_option("--rows", rows, "Use a seeded random subset of this many rows (0 = all)");
    app->add_option("--rows-seed", rows_seed, "Seed of the row subset");
  }

  DatasetRef ref() const { return {csv, schema, rows, rows_seed}; }
};

struct ModelFlags
{
  InceConfig config;
  std::string encoder = "in";

  void add(CLI::App * app)
  {
    app->add_option("--encoder", encoder, "Contextual encoder")->check(CLI::IsMember({"in", "transformer"}));
    app->add_option("--l", config.latent, "Latent size");
    app->add_option("--n", config.layers, "Stacked encoder layers (0 = context-free ablation)");
    app->add_option("--d", config.depth, "MLP_E / MLP_N depth");
    app->add_option("--heads", config.heads, "Transformer attention heads");
    app->add_option("--ff", config.feedforward, "Transformer feed-forward size");
    app->add_option("--decoder-hidden", config.decoder_hidden, "Decoder hidden width (0 = l)");
    app->add_option("--lr", config.learning_rate, "Adam learning rate");
    app->add_option("--batch", config.batch_size, "Minibatch size");
    app->add_option("--epochs", config.epochs, "Training epochs");
    app->add_option("--seed", config.seed, "Random seed");
  }

  InceConfig resolve() const
  {
    InceConfig c = config;
    c.encoder = encoder_from_string(encoder);
    c.validate();
    return c;
  }
};

void write_text(const fs::path & path, const std::string & text)
{
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

std::string pretty(const nlohmann::json & j) { return j.dump(2) + "\n"; }

/// Rows a stored model should be judged on: its held-out split when the
/// checkpoint records one and the data matches, else every row.
PreparedDataset select_rows(
  const InceModel & model, const nlohmann::json & extras, const LoadedDataset & data, const std::string & split)
{
  if (split == "test") {
    if (!extras.contains("split")) throw ContractError("checkpoint does not record a train/test split; use --split all");
    const auto & s = extras.at("split");
    if (s.value("fingerprint", std::string()) != data.fingerprint) {
      throw ContractError("data differs from the checkpoint's training data; use --split all");
    }
    const Holdout h = make_holdout(data.table, s.at("test_fraction").get<double>(), s.at("seed").get<std::uint64_t>());
    return preprocess(data.table.subset(h.test_rows), &model.stats());
  }
  return preprocess(data.table, &model.stats());
}

int run_train(const DataFlags & df, const ModelFlags & mf, double test_fraction, const std::string & out_dir,
  bool verbose, std::ostream & out, std::ostream & err)
{
  const InceConfig config = mf.resolve();
  const LoadedDataset data = load_dataset(df.ref());
  const Holdout h = make_holdout(data.table, test_fraction, config.seed);
  std::unique_ptr<std::ofstream> log;
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    log = std::make_unique<std::ofstream>(fs::path(out_dir) / "log.jsonl");
  }
  TrainResult tr = train(config, h.train, &h.test, [&](const EpochRecord & e) {
    if (log) *log << epoch_to_json(e).dump() << "\n";
    if (verbose) err << epoch_to_json(e).dump() << "\n";
  });
  nlohmann::json result = {
    {"config", config_to_json(config)},
    {"dataset", data.name},
    {"train_rows", h.train.rows},
    {"test_rows", h.test.rows},
    {"final", metrics_to_json(evaluate(tr.final_model, h.test))},
    {"best", metrics_to_json(evaluate(tr.best_model, h.test))},
    {"best_epoch", tr.best_epoch},
    {"init_attempts", tr.init_attempts},
    {"seconds", [&] {
      double s = 0.0;
      for (const auto & e : tr.history) s += e.seconds;
      return s;
    }()},
  };
  if (!out_dir.empty()) {
    const nlohmann::json extras = {
      {"split", {{"test_fraction", test_fraction}, {"seed", config.seed}, {"fingerprint", data.fingerprint}}},
    };
    save_checkpoint(tr.final_model, fs::path(out_dir) / "checkpoint.bin", extras);
    save_checkpoint(tr.best_model, fs::path(out_dir) / "best.bin", extras);
    save_statistics(h.train.stats, fs::path(out_dir) / "statistics.json");
    write_text(fs::path(out_dir) / "metrics.json", pretty(result));
  }
  out << pretty(result);
  return kExitOk;
}

int run_cv(const DataFlags & df, const ModelFlags & mf, int folds, const std::string & out_dir, bool verbose,
  std::ostream & out, std::ostream & err)
{
  const InceConfig config = mf.resolve();
  const LoadedDataset data = load_dataset(df.ref());
  CvOptions options;
  options.folds = folds;
  std::vector<std::string> warnings;
  options.warnings = &warnings;
  if (verbose) {
    options.on_epoch = [&err](std::size_t fold, const EpochRecord & e) {
      nlohmann::json j = epoch_to_json(e);
      j["fold"] = fold;
      err << j.dump() << "\n";
    };
  }
  const CvResult cv = cross_validate(config, data.table, options);
  nlohmann::json result = cv_to_json(cv);
  result["config"] = config_to_json(config);
  result["dataset"] = data.name;
  result["warnings"] = warnings;
  if (!out_dir.empty()) write_text(fs::path(out_dir) / "cv.json", pretty(result));
  out << pretty(result);
  return kExitOk;
}

int run_paramcount(const ModelFlags & mf, std::size_t baseline_l, bool json, bool table, std::ostream & out,
  std::ostream & err)
{
  const InceConfig config = mf.resolve();
  const ParamCountReport r = verify_encoder_counts(config, 4, baseline_l);
  if (json) {
    out << pretty(report_to_json(r));
  } else if (table) {
    out << report_to_table(r);
  } else {
    out << r.analytic << "\n";
  }
  if (!r.match()) {
    err << nlohmann::json({{"error", "param-count-mismatch"}, {"message", r.diff()}}).dump() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace

int cli_dispatch(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
  CLI::App app{"INCE: interaction-network contextual embedding for tabular data"};
  app.name(args.empty() ? "ince" : fs::path(args[0]).filename().string());
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Per-epoch progress on stderr");

  DataFlags train_data;
  ModelFlags train_model;
  double test_fraction = 0.2;
  std::string train_out;
  CLI::App * train_cmd = app.add_subcommand("train", "Train on a stratified train/test split");
  train_data.add(train_cmd);
  train_model.add(train_cmd);
  train_cmd->add_option("--test-fraction", test_fraction, "Held-out fraction");
  train_cmd->add_option("--out", train_out, "Directory for checkpoint.bin, best.bin, log.jsonl, metrics.json");

  DataFlags eval_data;
  std::string eval_ckpt;
  std::string eval_split = "test";
  CLI::App * eval_cmd = app.add_subcommand("evaluate", "Evaluate a checkpoint");
  eval_data.add(eval_cmd);
  eval_cmd->add_option("--checkpoint", eval_ckpt, "Checkpoint file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--split", eval_split, "Rows to evaluate")->check(CLI::IsMember({"test", "all"}));

  DataFlags cv_data;
  ModelFlags cv_model;
  int cv_folds = 5;
  std::string cv_out;
  CLI::App * cv_cmd = app.add_subcommand("cv", "K-fold cross-validation");
  cv_data.add(cv_cmd);
  cv_model.add(cv_cmd);
  cv_cmd->add_option("--folds", cv_folds, "Number of folds")->check(CLI::Range(2, 1000));
  cv_cmd->add_option("--out", cv_out, "Directory for cv.json");

  DataFlags grid_data;
  ExperimentSpec grid;
  std::vector<std::string> grid_encoders = {"in"};
  std::string grid_out;
  CLI::App * grid_cmd = app.add_subcommand("grid", "Cross-validated grid search with persisted runs");
  grid_data.add(grid_cmd);
  grid_cmd->add_option("--l", grid.latents, "Latent sizes")->delimiter(',');
  grid_cmd->add_option("--n", grid.layers, "Stacked layer counts")->delimiter(',');
  grid_cmd->add_option("--d", grid.depths, "MLP depths")->delimiter(',');
  grid_cmd->add_option("--encoder", grid_encoders, "Encoders")->delimiter(',')->check(CLI::IsMember({"in", "transformer"}));
  grid_cmd->add_option("--heads", grid.heads, "Transformer heads")->delimiter(',');
  grid_cmd->add_option("--ff", grid.feedforward, "Transformer feed-forward sizes")->delimiter(',');
  grid_cmd->add_option("--seeds", grid.seeds, "Seeds")->delimiter(',');
  grid_cmd->add_option("--folds", grid.folds, "Folds per run")->check(CLI::Range(2, 1000));
  grid_cmd->add_option("--epochs", grid.epochs, "Training epochs");
  grid_cmd->add_option("--batch", grid.batch_size, "Minibatch size");
  grid_cmd->add_option("--lr", grid.learning_rate, "Adam learning rate");
  grid_cmd->add_option("--decoder-hidden", grid.decoder_hidden, "Decoder hidden width (0 = l)");
  grid_cmd->add_option("--out", grid_out, "Results directory")->required();

  ModelFlags pc_model;
  std::size_t pc_baseline = 16;
  bool pc_json = false;
  bool pc_table = false;
  CLI::App * pc_cmd = app.add_subcommand("paramcount", "Encoder trainable parameters: formula vs constructed model");
  pc_model.add(pc_cmd);
  pc_cmd->add_option("--baseline-l", pc_baseline, "Latent size of the normalizing tp_in(l, 1, 1)");
  pc_cmd->add_flag("--json", pc_json, "Full report as JSON");
  pc_cmd->add_flag("--table", pc_table, "Full report as a text table");

  DataFlags it_data;
  std::string it_ckpt;
  std::string it_split = "test";
  std::string it_out;
  bool it_cls = false;
  bool it_no_shapley = false;
  CLI::App * it_cmd = app.add_subcommand("interpret", "Feature-feature interaction p-values and heatmaps");
  it_data.add(it_cmd);
  it_cmd->add_option("--checkpoint", it_ckpt, "Checkpoint file")->required()->check(CLI::ExistingFile);
  it_cmd->add_option("--split", it_split, "Rows to analyse")->check(CLI::IsMember({"test", "all"}));
  it_cmd->add_option("--out", it_out, "Output directory")->required();
  it_cmd->add_flag("--include-cls", it_cls, "Pool CLS edges into the population statistics");
  it_cmd->add_flag("--no-shapley", it_no_shapley, "Skip the exact Shapley comparison");

  std::string nm_runs;
  std::string nm_out;
  CLI::App * nm_cmd = app.add_subcommand("normalized-metric", "Normalized metric curves of a d/n sweep");
  nm_cmd->add_option("--runs", nm_runs, "Results directory of a grid run")->required()->check(CLI::ExistingDirectory);
  nm_cmd->add_option("--out", nm_out, "CSV path (default <runs>/normalized_metric.csv)");

  DataFlags ex_data;
  std::string ex_ckpt;
  std::string ex_split = "test";
  std::string ex_out;
  CLI::App * ex_cmd = app.add_subcommand("export-embeddings", "Columnar and contextual 2-D points of an l=2 model");
  ex_data.add(ex_cmd);
  ex_cmd->add_option("--checkpoint", ex_ckpt, "Checkpoint file")->required()->check(CLI::ExistingFile);
  ex_cmd->add_option("--split", ex_split, "Rows to export")->check(CLI::IsMember({"test", "all"}));
  ex_cmd->add_option("--out", ex_out, "CSV path")->required();

  auto fail = [&err](const char * kind, const std::string & message, int code) {
    err << nlohmann::json({{"error", kind}, {"message", message}}).dump() << "\n";
    return code;
  };

  std::vector<const char *> argv;
  for (const auto & a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError & e) {
    return fail("usage", e.what(), kExitUsage);
  }
  // Subcommand help arrives through the exceptions above; everything below runs a command.
  try {
    if (*train_cmd) return run_train(train_data, train_model, test_fraction, train_out, verbose, out, err);
    if (*cv_cmd) return run_cv(cv_data, cv_model, cv_folds, cv_out, verbose, out, err);
    if (*pc_cmd) return run_paramcount(pc_model, pc_baseline, pc_json, pc_table, out, err);
    if (*eval_cmd) {
      nlohmann::json extras;
      InceModel model = load_checkpoint(eval_ckpt, &extras);
      const LoadedDataset data = load_dataset(eval_data.ref());
      const PreparedDataset rows = select_rows(model, extras, data, eval_split);
      out << pretty(metrics_to_json(evaluate(model, rows)));
      return kExitOk;
    }
    if (*grid_cmd) {
      grid.dataset = grid_data.ref();
      grid.output = grid_out;
      grid.encoders.clear();
      for (const auto & e : grid_encoders) grid.encoders.push_back(encoder_from_string(e));
      const ExperimentSummary s = run_experiment(grid, [&](const std::string & m) {
        if (verbose) err << m << "\n";
      });
      nlohmann::json runs = nlohmann::json::array();
      for (const auto & r : s.runs) runs.push_back(record_to_json(r));
      out << pretty({{"trained", s.trained}, {"skipped", s.skipped}, {"runs", runs}});
      return kExitOk;
    }
    if (*it_cmd) {
      nlohmann::json extras;
      InceModel model = load_checkpoint(it_ckpt, &extras);
      const LoadedDataset data = load_dataset(it_data.ref());
      const PreparedDataset rows = select_rows(model, extras, data, it_split);
      InterpretOptions options;
      options.include_cls = it_cls;
      options.shapley = !it_no_shapley;
      const InterpretationReport r = interpret_model(model, rows, options);
      fs::create_directories(it_out);
      std::ostringstream features;
      write_heatmap_csv(features, r.summary.directed);
      write_text(fs::path(it_out) / "heatmap_features.csv", features.str());
      std::ostringstream values;
      write_heatmap_csv(values, r.summary.feature_values);
      write_text(fs::path(it_out) / "heatmap_values.csv", values.str());
      const nlohmann::json j = interpretation_to_json(r);
      write_text(fs::path(it_out) / "summary.json", pretty(j));
      out << pretty(j);
      return kExitOk;
    }
    if (*nm_cmd) {
      const auto table = normalized_metric_table(read_index(nm_runs));
      if (table.empty()) throw ContractError("no interaction-network (d=1, n=1) base runs under " + nm_runs);
      const fs::path path = nm_out.empty() ? fs::path(nm_runs) / "normalized_metric.csv" : fs::path(nm_out);
      std::ostringstream csv;
      write_normalized_csv(csv, table);
      write_text(path, csv.str());
      nlohmann::json curves = nlohmann::json::array();
      for (const auto & t : table) {
        curves.push_back({{"dataset", t.dataset}, {"l", t.latent}, {"metric", t.metric}, {"base", t.base},
          {"best", t.best}, {"degenerate", t.degenerate}, {"d", t.d_values}, {"C_d", t.c_d}, {"n", t.n_values},
          {"C_n", t.c_n}});
      }
      const AveragedCurves avg = average_curves(table);
      out << pretty({{"csv", path.string()}, {"curves", curves},
        {"average", {{"index", avg.index}, {"C_d", avg.c_d_mean}, {"C_d_std", avg.c_d_std}, {"C_n", avg.c_n_mean},
          {"C_n_std", avg.c_n_std}}}});
      return kExitOk;
    }
    if (*ex_cmd) {
      nlohmann::json extras;
      InceModel model = load_checkpoint(ex_ckpt, &extras);
      const LoadedDataset data = load_dataset(ex_data.ref());
      const PreparedDataset rows = select_rows(model, extras, data, ex_split);
      const auto points = export_embedding_points(model, rows);
      std::ostringstream csv;
      write_embedding_csv(csv, points);
      write_text(ex_out, csv.str());
      out << pretty({{"csv", ex_out}, {"points", points.size()}, {"rows", rows.rows}});
      return kExitOk;
    }
  } catch (const IoError & e) {
    return fail(e.kind(), e.what(), kExitUsage);
  } catch (const Error & e) {
    return fail(e.kind(), e.what(), kExitFailure);
  } catch (const std::exception & e) {
    return fail("internal", e.what(), kExitFailure);
  }
  return fail("usage", "no subcommand given", kExitUsage);
}

}  // namespace ince
