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

#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

#include "ince/cli.hpp"
#include "ince/errors.hpp"
#include "ince/experiment.hpp"

using namespace ince;
namespace fs = std::filesystem;

namespace
{

std::string slurp(const fs::path & p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Workspace : public ::testing::Test
{
protected:
  void SetUp() override
  {
    dir_ = fs::temp_directory_path() /
      ("ince_exp_" + std::to_string(::getpid()) + "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    write_toy(dir_ / "toy.csv", 48);
    std::ofstream(dir_ / "toy.schema") << "task binary\nnumerical a\nnumerical b\ncategorical k\ntarget y\n";
  }
  void TearDown() override { fs::remove_all(dir_); }

  static void write_toy(const fs::path & p, int rows)
  {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> normal;
    std::ofstream out(p);
    out << "a,b,k,y\n";
    for (int r = 0; r < rows; ++r) {
      const double a = normal(rng), b = normal(rng);
      const char k = static_cast<char>('p' + rng() % 3);
      out << a << "," << b << "," << k << "," << (a + (k == 'q' ? 1.0 : 0.0) > 0.3 ? "yes" : "no") << "\n";
    }
  }

  ExperimentSpec small_spec() const
  {
    ExperimentSpec s;
    s.dataset.csv = dir_ / "toy.csv";
    s.dataset.schema = dir_ / "toy.schema";
    s.latents = {4};
    s.layers = {1};
    s.depths = {1};
    s.epochs = 1;
    s.batch_size = 16;
    s.folds = 2;
    s.seeds = {0};
    s.output = dir_ / "runs";
    return s;
  }

  int cli(std::vector<std::string> args, std::string * out_text = nullptr, std::string * err_text = nullptr)
  {
    std::ostringstream out, err;
    args.insert(args.begin(), "ince");
    const int code = cli_dispatch(args, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
  }

  fs::path dir_;
};

// ------------------------------------------------------------------------
// Grid harness

TEST_F(Workspace, SingleRunThenIdempotentRerun)
{
  auto spec = small_spec();
  const auto first = run_experiment(spec);
  ASSERT_EQ(first.runs.size(), 1u);
  EXPECT_EQ(first.trained, 1u);
  EXPECT_EQ(first.skipped, 0u);
  const auto & rec = first.runs[0];
  EXPECT_EQ(rec.fold_values.size(), 2u);
  EXPECT_EQ(rec.metric, "accuracy");
  const fs::path run_dir = spec.output / "runs" / rec.id;
  for (const char * f : {"config.json", "log.jsonl", "checkpoint.bin", "metrics.json"}) {
    EXPECT_TRUE(fs::exists(run_dir / f)) << f;
  }
  const std::string index = slurp(spec.output / "index.json");

  const auto second = run_experiment(spec);
  EXPECT_EQ(second.trained, 0u);
  EXPECT_EQ(second.skipped, 1u);
  EXPECT_EQ(slurp(spec.output / "index.json"), index);
  ASSERT_EQ(second.runs.size(), 1u);
  EXPECT_EQ(second.runs[0].mean, rec.mean);
  EXPECT_EQ(read_index(spec.output).size(), 1u);
}

TEST_F(Workspace, GridExpandsConfigsTimesSeeds)
{
  auto spec = small_spec();
  spec.latents = {4, 6};
  spec.seeds = {0, 1};
  EXPECT_EQ(expand_grid(spec).size(), 4u);
  const auto summary = run_experiment(spec);
  EXPECT_EQ(summary.trained, 4u);
  std::set<std::string> ids;
  for (const auto & r : summary.runs) ids.insert(r.id);
  EXPECT_EQ(ids.size(), 4u);
  EXPECT_EQ(read_index(spec.output).size(), 4u);
}

TEST_F(Workspace, IncompleteRunIsRetrained)
{
  auto spec = small_spec();
  spec.seeds = {0, 1};
  const auto first = run_experiment(spec);
  ASSERT_EQ(first.runs.size(), 2u);
  fs::remove(spec.output / "runs" / first.runs[1].id / "metrics.json");
  const auto second = run_experiment(spec);
  EXPECT_EQ(second.trained, 1u);
  EXPECT_EQ(second.skipped, 1u);
}

TEST_F(Workspace, RunIdsSeparateWhatMatters)
{
  const auto data = load_dataset({dir_ / "toy.csv", dir_ / "toy.schema"});
  InceConfig a;
  InceConfig b = a;
  b.heads = 4;
  // Transformer-only settings do not change an IN run.
  EXPECT_EQ(run_id(a, data, 5), run_id(b, data, 5));
  b = a;
  b.seed = 1;
  EXPECT_NE(run_id(a, data, 5), run_id(b, data, 5));
  EXPECT_NE(run_id(a, data, 5), run_id(a, data, 3));
  const auto sub = load_dataset({dir_ / "toy.csv", dir_ / "toy.schema", 20, 0});
  EXPECT_EQ(sub.table.rows, 20u);
  EXPECT_NE(sub.fingerprint, data.fingerprint);
  EXPECT_NE(run_id(a, data, 5), run_id(a, sub, 5));
}

TEST_F(Workspace, SpecValidation)
{
  auto spec = small_spec();
  spec.seeds = {1, 1};
  EXPECT_THROW(spec.validate(), ContractError);
  spec = small_spec();
  spec.latents.clear();
  EXPECT_THROW(spec.validate(), ContractError);
}

TEST_F(Workspace, HoldoutFitsStatisticsOnTrainingRows)
{
  const auto data = load_dataset({dir_ / "toy.csv", dir_ / "toy.schema"});
  const auto h = make_holdout(data.table, 0.25, 3);
  EXPECT_EQ(h.train_rows.size() + h.test_rows.size(), 48u);
  EXPECT_EQ(h.train.rows, h.train_rows.size());
  double sum = 0.0;
  for (std::size_t r = 0; r < h.train.rows; ++r) sum += h.train.numerical_at(r, 0);
  EXPECT_NEAR(sum / static_cast<double>(h.train.rows), 0.0, 1e-12);
}

// ------------------------------------------------------------------------
// Normalized metric

TEST(NormalizedMetric, BaseIsZeroBestIsOne)
{
  const auto c = normalize_curves({0.80, 0.82, 0.81}, {0.80, 0.85, 0.83}, true);
  EXPECT_DOUBLE_EQ(c.base, 0.80);
  EXPECT_DOUBLE_EQ(c.best, 0.85);
  EXPECT_DOUBLE_EQ(c.c_d[0], 0.0);
  EXPECT_DOUBLE_EQ(c.c_n[0], 0.0);
  EXPECT_NEAR(c.c_n[1], 1.0, 1e-15);
  EXPECT_NEAR(c.c_d[1], 0.4, 1e-12);
  EXPECT_NEAR(c.c_n[2], 0.6, 1e-12);
  EXPECT_FALSE(c.degenerate);
}

TEST(NormalizedMetric, LowerIsBetterForMse)
{
  const auto c = normalize_curves({0.30, 0.25, 0.35}, {0.30, 0.28}, false);
  EXPECT_DOUBLE_EQ(c.best, 0.25);
  EXPECT_NEAR(c.c_d[1], 1.0, 1e-15);
  EXPECT_NEAR(c.c_d[2], -1.0, 1e-12);
  EXPECT_NEAR(c.c_n[1], 0.4, 1e-12);
}

TEST(NormalizedMetric, ArgBestIsInvariantToAffineRescaling)
{
  const std::vector<double> d{0.5, 0.7, 0.6, 0.65};
  const std::vector<double> n{0.5, 0.55, 0.72, 0.4};
  auto scaled = [](std::vector<double> v) {
    for (auto & x : v) x = 3.0 * x + 1.0;
    return v;
  };
  const auto a = normalize_curves(d, n, true);
  const auto b = normalize_curves(scaled(d), scaled(n), true);
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_NEAR(a.c_d[i], b.c_d[i], 1e-12);
    EXPECT_NEAR(a.c_n[i], b.c_n[i], 1e-12);
  }
  EXPECT_NEAR(a.c_n[2], 1.0, 1e-15);
}

TEST(NormalizedMetric, DegenerateWhenNothingBeatsBase)
{
  const auto c = normalize_curves({0.9, 0.8}, {0.9, 0.7}, true);
  EXPECT_TRUE(c.degenerate);
  for (double v : c.c_d) EXPECT_EQ(v, 0.0);
  for (double v : c.c_n) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(normalize_curves({0.9}, {0.8}, true), ContractError);
}

TEST(NormalizedMetric, TableAveragesSeedsPerPoint)
{
  std::vector<RunRecord> runs;
  auto add = [&](std::size_t d, std::size_t n, std::uint64_t seed, double v) {
    RunRecord r;
    r.dataset = "toy";
    r.metric = "accuracy";
    r.config.latent = 16;
    r.config.depth = d;
    r.config.layers = n;
    r.config.seed = seed;
    r.mean = v;
    runs.push_back(r);
  };
  add(1, 1, 0, 0.70);
  add(1, 1, 1, 0.72);
  add(2, 1, 0, 0.74);
  add(2, 1, 1, 0.76);
  add(1, 2, 0, 0.80);
  add(1, 2, 1, 0.82);
  add(1, 0, 0, 0.99);  // context-free ablation is not part of either curve
  const auto table = normalized_metric_table(runs);
  ASSERT_EQ(table.size(), 1u);
  const auto & t = table[0];
  EXPECT_EQ(t.d_values, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(t.n_values, (std::vector<std::size_t>{1, 2}));
  EXPECT_NEAR(t.base, 0.71, 1e-12);
  EXPECT_NEAR(t.best, 0.81, 1e-12);
  EXPECT_NEAR(t.c_d[1], 0.4, 1e-9);
  EXPECT_NEAR(t.c_n[1], 1.0, 1e-12);

  std::ostringstream csv;
  write_normalized_csv(csv, table);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "dataset,l,metric,curve,index,raw,normalized,base,best,degenerate");
  std::size_t lines = 0;
  for (char ch : csv.str()) lines += ch == '\n';
  EXPECT_EQ(lines, 5u);
}

// ------------------------------------------------------------------------
// Command line

TEST_F(Workspace, CliParamcountPrintsCount)
{
  std::string out;
  EXPECT_EQ(cli({"paramcount", "--encoder", "in", "--l", "16", "--d", "1", "--n", "1"}, &out), kExitOk);
  EXPECT_EQ(out, "1056\n");
  EXPECT_EQ(cli({"paramcount", "--encoder", "transformer", "--l", "16", "--heads", "1", "--ff", "512", "--n", "1"}, &out), kExitOk);
  EXPECT_EQ(out, "18000\n");
  EXPECT_EQ(cli({"paramcount", "--encoder", "in", "--l", "32", "--d", "3", "--n", "2", "--json"}, &out), kExitOk);
  const auto j = nlohmann::json::parse(out);
  EXPECT_EQ(j.at("analytic"), j.at("constructed"));
}

TEST_F(Workspace, CliUsageErrors)
{
  std::string err;
  const std::string missing = (dir_ / "nope.schema").string();
  EXPECT_EQ(cli({"cv", "--data", (dir_ / "toy.csv").string(), "--schema", missing}, nullptr, &err), kExitUsage);
  EXPECT_NE(err.find(missing), std::string::npos) << err;
  EXPECT_EQ(cli({"paramcount", "--bogus"}, nullptr, &err), kExitUsage);
  EXPECT_EQ(cli({}, nullptr, &err), kExitUsage);
  EXPECT_EQ(cli({"paramcount", "--encoder", "lstm"}, nullptr, &err), kExitUsage);
}

TEST_F(Workspace, CliErrorsAreJson)
{
  std::string err;
  EXPECT_EQ(cli({"paramcount", "--encoder", "in", "--l", "0"}, nullptr, &err), kExitFailure);
  const auto j = nlohmann::json::parse(err);
  EXPECT_TRUE(j.contains("error"));
  EXPECT_TRUE(j.contains("message"));
}

TEST_F(Workspace, CliTrainEvaluateInterpretRoundTrip)
{
  const std::string data = (dir_ / "toy.csv").string();
  const std::string schema = (dir_ / "toy.schema").string();
  const fs::path out = dir_ / "model";
  ASSERT_EQ(cli({"train", "--data", data, "--schema", schema, "--l", "2", "--n", "1", "--d", "1", "--epochs", "2",
              "--batch", "16", "--decoder-hidden", "8", "--out", out.string()}),
    kExitOk);
  for (const char * f : {"checkpoint.bin", "best.bin", "log.jsonl", "metrics.json", "statistics.json"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  std::string text;
  const std::string ckpt = (out / "checkpoint.bin").string();
  ASSERT_EQ(cli({"evaluate", "--data", data, "--schema", schema, "--checkpoint", ckpt}, &text), kExitOk);
  const auto eval = nlohmann::json::parse(text);
  const auto trained = nlohmann::json::parse(slurp(out / "metrics.json"));
  // The checkpoint carries the split, so evaluate reproduces the held-out metrics.
  EXPECT_EQ(eval.at("accuracy"), trained.at("final").at("accuracy"));
  EXPECT_EQ(eval.at("rows"), trained.at("final").at("rows"));
  ASSERT_EQ(cli({"evaluate", "--data", data, "--schema", schema, "--checkpoint", ckpt, "--split", "all"}, &text), kExitOk);
  EXPECT_EQ(nlohmann::json::parse(text).at("rows"), 48);

  ASSERT_EQ(cli({"interpret", "--data", data, "--schema", schema, "--checkpoint", ckpt, "--out", (dir_ / "interp").string(),
              "--no-shapley"}),
    kExitOk);
  for (const char * f : {"heatmap_features.csv", "heatmap_values.csv", "summary.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / "interp" / f)) << f;
  }
  ASSERT_EQ(cli({"export-embeddings", "--data", data, "--schema", schema, "--checkpoint", ckpt, "--out",
              (dir_ / "points.csv").string()}),
    kExitOk);
  EXPECT_EQ(slurp(dir_ / "points.csv").substr(0, 26), "kind,row,feature,value,x,y");
}

TEST_F(Workspace, CliGridThenNormalizedMetric)
{
  const std::string runs = (dir_ / "grid").string();
  ASSERT_EQ(cli({"grid", "--data", (dir_ / "toy.csv").string(), "--schema", (dir_ / "toy.schema").string(), "--l", "4",
              "--d", "1,2", "--n", "1", "--seeds", "0", "--folds", "2", "--epochs", "1", "--batch", "16", "--out", runs}),
    kExitOk);
  EXPECT_EQ(read_index(runs).size(), 2u);
  ASSERT_EQ(cli({"normalized-metric", "--runs", runs}), kExitOk);
  const std::string csv = slurp(dir_ / "grid" / "normalized_metric.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "dataset,l,metric,curve,index,raw,normalized,base,best,degenerate");
}

TEST(CliBinary, ExitCodesFromTheExecutable)
{
  const std::string bin = INCE_CLI_PATH;
  auto run = [&](const std::string & args) {
    const int status = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  EXPECT_EQ(run("paramcount --encoder in --l 16 --d 1 --n 1"), 0);
  EXPECT_EQ(run("paramcount --no-such-flag"), 2);
  EXPECT_EQ(run("evaluate --data /no/such.csv --schema /no/such.schema --checkpoint /no/such.bin"), 2);
}

}  // namespace
