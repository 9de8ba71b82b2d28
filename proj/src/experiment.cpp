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

#include "ince/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "ince/checkpoint.hpp"
#include "ince/errors.hpp"
#include "ince/folds.hpp"

namespace ince
{

namespace fs = std::filesystem;

namespace
{

std::string read_file(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string hex64(std::uint64_t v)
{
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

void write_atomic(const fs::path & path, const std::string & text)
{
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << text;
    if (!out) throw IoError("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

// Full float64 round-trip on every number nlohmann writes.
std::string dump(const nlohmann::json & j) { return j.dump(2) + "\n"; }

std::mutex index_mutex;

}  // namespace

LoadedDataset load_dataset(const DatasetRef & ref)
{
  LoadedDataset out;
  const std::string schema_text = read_file(ref.schema);
  const TabularSchema schema = parse_schema(schema_text);
  const std::string csv_text = read_file(ref.csv);
  std::istringstream csv(csv_text);
  out.table = read_csv(csv, schema);
  out.name = ref.csv.stem().string();
  std::uint64_t h = fnv1a64(csv_text.data(), csv_text.size());
  h = fnv1a64(schema_text.data(), schema_text.size(), h);
  if (ref.max_rows > 0 && ref.max_rows < out.table.rows) {
    std::vector<std::size_t> rows(out.table.rows);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    std::mt19937_64 rng(ref.subsample_seed);
    std::shuffle(rows.begin(), rows.end(), rng);
    rows.resize(ref.max_rows);
    std::sort(rows.begin(), rows.end());
    out.table = out.table.subset(rows);
    const std::string tag = "subsample:" + std::to_string(ref.max_rows) + ":" + std::to_string(ref.subsample_seed);
    h = fnv1a64(tag.data(), tag.size(), h);
  }
  out.fingerprint = hex64(h);
  return out;
}

Holdout make_holdout(const RawTable & table, double test_fraction, std::uint64_t seed, PreprocessOptions options)
{
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw ContractError("test fraction must lie in (0, 1)");
  std::optional<std::vector<std::string>> labels;
  std::vector<int> y;
  if (table.schema.task != TaskKind::Regression) {
    labels = class_labels_of(table);
    y = preprocess(table, nullptr, options).labels;
  }
  const TrainTestSplit split = train_test_split(table.rows, y, test_fraction, seed);
  Holdout h;
  h.train_rows = split.train;
  h.test_rows = split.test;
  const RawTable train_raw = table.subset(split.train);
  const FitStatistics stats = fit_statistics(train_raw, labels);
  h.train = preprocess(train_raw, &stats, options);
  h.test = preprocess(table.subset(split.test), &stats, options);
  return h;
}

void ExperimentSpec::validate() const
{
  if (latents.empty() || layers.empty() || encoders.empty()) throw ContractError("experiment grid is empty");
  if (std::find(encoders.begin(), encoders.end(), EncoderKind::Interaction) != encoders.end() && depths.empty()) {
    throw ContractError("experiment grid has no MLP depths");
  }
  if (std::find(encoders.begin(), encoders.end(), EncoderKind::Transformer) != encoders.end() &&
    (heads.empty() || feedforward.empty()))
  {
    throw ContractError("experiment grid has no transformer heads / feed-forward sizes");
  }
  if (seeds.empty()) throw ContractError("experiment needs at least one seed");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw ContractError("experiment seeds must be distinct");
  }
  if (folds < 2) throw ContractError("experiment needs at least 2 folds");
  if (output.empty()) throw ContractError("experiment needs an output directory");
}

std::vector<InceConfig> expand_grid(const ExperimentSpec & spec)
{
  spec.validate();
  std::vector<InceConfig> out;
  InceConfig base;
  base.decoder_hidden = spec.decoder_hidden;
  base.learning_rate = spec.learning_rate;
  base.batch_size = spec.batch_size;
  base.epochs = spec.epochs;
  for (EncoderKind enc : spec.encoders) {
    for (std::size_t l : spec.latents) {
      for (std::size_t n : spec.layers) {
        std::vector<InceConfig> points;
        if (enc == EncoderKind::Interaction) {
          for (std::size_t d : spec.depths) {
            InceConfig c = base;
            c.encoder = enc;
            c.latent = l;
            c.layers = n;
            c.depth = d;
            points.push_back(c);
          }
        } else {
          for (std::size_t h : spec.heads) {
            for (std::size_t f : spec.feedforward) {
              InceConfig c = base;
              c.encoder = enc;
              c.latent = l;
              c.layers = n;
              c.heads = h;
              c.feedforward = f;
              points.push_back(c);
            }
          }
        }
        for (const InceConfig & c : points) {
          for (std::uint64_t seed : spec.seeds) {
            InceConfig s = c;
            s.seed = seed;
            s.validate();
            out.push_back(s);
          }
        }
      }
    }
  }
  return out;
}

std::string run_id(const InceConfig & config, const LoadedDataset & data, int folds)
{
  nlohmann::json key = config_to_json(config);
  if (config.encoder == EncoderKind::Interaction) {
    key.erase("heads");
    key.erase("feedforward");
  } else {
    key.erase("depth");
  }
  key["dataset"] = data.fingerprint;
  key["folds"] = folds;
  const std::string text = key.dump();
  return hex64(fnv1a64(text.data(), text.size()));
}

nlohmann::json record_to_json(const RunRecord & r)
{
  return {
    {"id", r.id},
    {"dataset", r.dataset},
    {"config", config_to_json(r.config)},
    {"folds", r.folds},
    {"metric", r.metric},
    {"mean", r.mean},
    {"std", r.std},
    {"best_epoch_mean", r.best_mean},
    {"best_epoch_std", r.best_std},
    {"fold_values", r.fold_values},
    {"seconds", r.seconds},
  };
}

RunRecord record_from_json(const nlohmann::json & j)
{
  try {
    RunRecord r;
    r.id = j.at("id").get<std::string>();
    r.dataset = j.at("dataset").get<std::string>();
    r.config = config_from_json(j.at("config"));
    r.folds = j.at("folds").get<int>();
    r.metric = j.at("metric").get<std::string>();
    r.mean = j.at("mean").get<double>();
    r.std = j.at("std").get<double>();
    r.best_mean = j.at("best_epoch_mean").get<double>();
    r.best_std = j.at("best_epoch_std").get<double>();
    r.fold_values = j.at("fold_values").get<std::vector<double>>();
    r.seconds = j.value("seconds", 0.0);
    return r;
  } catch (const nlohmann::json::exception & e) {
    throw ParseError(std::string("malformed run record: ") + e.what());
  }
}

std::vector<RunRecord> read_index(const fs::path & dir)
{
  const fs::path path = dir / "index.json";
  if (!fs::exists(path)) return {};
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception & e) {
    throw ParseError("malformed " + path.string() + ": " + e.what());
  }
  std::vector<RunRecord> out;
  for (const auto & r : j.at("runs")) out.push_back(record_from_json(r));
  return out;
}

namespace
{

void update_index(const fs::path & dir, const RunRecord & record)
{
  std::lock_guard<std::mutex> lock(index_mutex);
  std::vector<RunRecord> runs = read_index(dir);
  auto it = std::find_if(runs.begin(), runs.end(), [&](const RunRecord & r) { return r.id == record.id; });
  if (it != runs.end()) return;
  runs.push_back(record);
  nlohmann::json j = {{"runs", nlohmann::json::array()}};
  for (const auto & r : runs) j["runs"].push_back(record_to_json(r));
  write_atomic(dir / "index.json", dump(j));
}

RunRecord record_from_metrics(const fs::path & run_dir)
{
  return record_from_json(nlohmann::json::parse(read_file(run_dir / "metrics.json")).at("record"));
}

}  // namespace

ExperimentSummary run_experiment(const ExperimentSpec & spec, const ProgressCallback & progress)
{
  const std::vector<InceConfig> grid = expand_grid(spec);
  const LoadedDataset data = load_dataset(spec.dataset);
  fs::create_directories(spec.output / "runs");
  ExperimentSummary summary;
  for (const InceConfig & config : grid) {
    const std::string id = run_id(config, data, spec.folds);
    const fs::path dir = spec.output / "runs" / id;
    if (fs::exists(dir / "metrics.json")) {
      RunRecord r = record_from_metrics(dir);
      update_index(spec.output, r);
      summary.runs.push_back(r);
      ++summary.skipped;
      if (progress) progress("skip " + id + " (complete)");
      continue;
    }
    fs::create_directories(dir);
    nlohmann::json cfg = {
      {"model", config_to_json(config)},
      {"dataset", {
        {"name", data.name},
        {"csv", spec.dataset.csv.string()},
        {"schema", spec.dataset.schema.string()},
        {"fingerprint", data.fingerprint},
        {"rows", data.table.rows},
        {"max_rows", spec.dataset.max_rows},
        {"subsample_seed", spec.dataset.subsample_seed},
      }},
      {"folds", spec.folds},
    };
    write_atomic(dir / "config.json", dump(cfg));

    std::ofstream log(dir / "log.jsonl", std::ios::trunc);
    const auto start = std::chrono::steady_clock::now();
    CvOptions options;
    options.folds = spec.folds;
    options.on_epoch = [&log](std::size_t fold, const EpochRecord & e) {
      nlohmann::json j = epoch_to_json(e);
      j["fold"] = fold;
      log << j.dump() << "\n";
      log.flush();
    };
    options.on_fold = [&dir](const FoldResult & f, InceModel & model) {
      if (f.fold == 0) save_checkpoint(model, dir / "checkpoint.bin", {{"fold", 0}});
    };
    const CvResult cv = cross_validate(config, data.table, options);

    RunRecord r;
    r.id = id;
    r.dataset = data.name;
    r.config = config;
    r.folds = spec.folds;
    r.metric = primary_metric_name(cv.task);
    r.mean = cv.mean;
    r.std = cv.std;
    r.best_mean = cv.best_mean;
    r.best_std = cv.best_std;
    for (const auto & f : cv.folds) r.fold_values.push_back(f.final_metrics.primary());
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    nlohmann::json metrics = cv_to_json(cv);
    metrics["record"] = record_to_json(r);
    // metrics.json marks the run complete, so it is written last.
    write_atomic(dir / "metrics.json", dump(metrics));
    update_index(spec.output, r);
    summary.runs.push_back(r);
    ++summary.trained;
    if (progress) {
      std::ostringstream msg;
      msg << "run " << id << " " << r.metric << " " << r.mean << " +- " << r.std << " (" << r.seconds << " s)";
      progress(msg.str());
    }
  }
  return summary;
}

NormalizedCurves normalize_curves(
  const std::vector<double> & raw_d, const std::vector<double> & raw_n, bool higher)
{
  if (raw_d.empty() || raw_n.empty()) throw ContractError("normalized metric needs non-empty curves");
  if (raw_d[0] != raw_n[0]) throw ContractError("both curves must start at the (d=1, n=1) base");
  NormalizedCurves out;
  out.higher_is_better = higher;
  out.raw_d = raw_d;
  out.raw_n = raw_n;
  out.base = raw_d[0];
  out.best = out.base;
  for (const auto * curve : {&raw_d, &raw_n}) {
    for (double v : *curve) {
      if (higher ? v > out.best : v < out.best) out.best = v;
    }
  }
  out.degenerate = out.best == out.base;
  auto scale = [&out](const std::vector<double> & raw) {
    std::vector<double> c;
    for (double v : raw) c.push_back(out.degenerate ? 0.0 : (v - out.base) / (out.best - out.base));
    return c;
  };
  out.c_d = scale(raw_d);
  out.c_n = scale(raw_n);
  return out;
}

std::vector<NormalizedCurves> normalized_metric_table(const std::vector<RunRecord> & runs)
{
  // (dataset, l) -> (d, n) -> seed metrics
  std::map<std::pair<std::string, std::size_t>, std::map<std::pair<std::size_t, std::size_t>, std::vector<double>>> groups;
  std::map<std::string, std::string> metric_of;
  for (const auto & r : runs) {
    if (r.config.encoder != EncoderKind::Interaction || r.config.layers == 0) continue;
    groups[{r.dataset, r.config.latent}][{r.config.depth, r.config.layers}].push_back(r.mean);
    metric_of[r.dataset] = r.metric;
  }
  std::vector<NormalizedCurves> out;
  for (const auto & [key, points] : groups) {
    auto avg = [](const std::vector<double> & v) {
      return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    if (!points.count({1, 1})) continue;
    std::vector<std::size_t> ds;
    std::vector<std::size_t> ns;
    std::vector<double> raw_d;
    std::vector<double> raw_n;
    for (const auto & [dn, values] : points) {
      if (dn.second == 1) {
        ds.push_back(dn.first);
        raw_d.push_back(avg(values));
      }
    }
    for (const auto & [dn, values] : points) {
      if (dn.first == 1) {
        ns.push_back(dn.second);
        raw_n.push_back(avg(values));
      }
    }
    const std::string metric = metric_of[key.first];
    NormalizedCurves c = normalize_curves(raw_d, raw_n, metric != "mse");
    c.dataset = key.first;
    c.latent = key.second;
    c.metric = metric;
    c.d_values = ds;
    c.n_values = ns;
    out.push_back(c);
  }
  return out;
}

void write_normalized_csv(std::ostream & out, const std::vector<NormalizedCurves> & table)
{
  out << "dataset,l,metric,curve,index,raw,normalized,base,best,degenerate\n";
  out << std::setprecision(17);
  for (const auto & t : table) {
    auto rows = [&](const char * curve, const std::vector<std::size_t> & idx, const std::vector<double> & raw,
                  const std::vector<double> & c) {
      for (std::size_t i = 0; i < idx.size(); ++i) {
        out << t.dataset << "," << t.latent << "," << t.metric << "," << curve << "," << idx[i] << "," << raw[i]
            << "," << c[i] << "," << t.base << "," << t.best << "," << (t.degenerate ? 1 : 0) << "\n";
      }
    };
    rows("C_d", t.d_values, t.raw_d, t.c_d);
    rows("C_n", t.n_values, t.raw_n, t.c_n);
  }
}

AveragedCurves average_curves(const std::vector<NormalizedCurves> & table)
{
  AveragedCurves out;
  std::vector<const NormalizedCurves *> live;
  for (const auto & t : table) {
    if (!t.degenerate) live.push_back(&t);
  }
  if (live.empty()) return out;
  std::set<std::size_t> shared(live[0]->d_values.begin(), live[0]->d_values.end());
  for (const auto * t : live) {
    std::set<std::size_t> both;
    for (std::size_t d : t->d_values) {
      if (shared.count(d) && std::count(t->n_values.begin(), t->n_values.end(), d)) both.insert(d);
    }
    shared = both;
  }
  for (std::size_t k : shared) {
    std::vector<double> cd;
    std::vector<double> cn;
    for (const auto * t : live) {
      const auto di = std::find(t->d_values.begin(), t->d_values.end(), k) - t->d_values.begin();
      const auto ni = std::find(t->n_values.begin(), t->n_values.end(), k) - t->n_values.begin();
      cd.push_back(t->c_d[static_cast<std::size_t>(di)]);
      cn.push_back(t->c_n[static_cast<std::size_t>(ni)]);
    }
    const auto [md, sd] = mean_and_std(cd);
    const auto [mn, sn] = mean_and_std(cn);
    out.index.push_back(k);
    out.c_d_mean.push_back(md);
    out.c_d_std.push_back(sd);
    out.c_n_mean.push_back(mn);
    out.c_n_std.push_back(sn);
  }
  return out;
}

}  // namespace ince
