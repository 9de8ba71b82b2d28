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

#include "ince/preprocess.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include "ince/errors.hpp"

namespace ince
{

int CategoryEncoding::code_of(const std::string & value) const
{
  auto it = std::lower_bound(values.begin(), values.end(), value);
  if (it == values.end() || *it != value) return 0;
  return static_cast<int>(it - values.begin()) + 1;
}

const std::string & CategoryEncoding::label_of(int code) const
{
  static const std::string missing = "<missing>";
  if (code <= 0 || static_cast<std::size_t>(code) > values.size()) return missing;
  return values[static_cast<std::size_t>(code) - 1];
}

namespace
{

std::optional<double> as_number(const std::string & s)
{
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::vector<std::string> class_labels_of(const RawTable & table)
{
  std::set<std::string> distinct;
  for (const auto & t : table.target) {
    if (t) distinct.insert(*t);
  }
  std::vector<std::string> labels(distinct.begin(), distinct.end());
  const bool numeric = std::all_of(labels.begin(), labels.end(), [](const std::string & s) {
    return as_number(s).has_value();
  });
  if (numeric) {
    std::stable_sort(labels.begin(), labels.end(), [](const std::string & a, const std::string & b) {
      return *as_number(a) < *as_number(b);
    });
  }
  return labels;
}

FitStatistics fit_statistics(const RawTable & table, std::optional<std::vector<std::string>> class_labels)
{
  const TabularSchema & schema = table.schema;
  FitStatistics st;
  st.task = schema.task;
  st.num_classes = schema.num_classes;

  const auto num_names = schema.numerical_names();
  for (std::size_t j = 0; j < table.numerical.size(); ++j) {
    NumericStats ns;
    ns.name = num_names[j];
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto & v : table.numerical[j]) {
      if (v) {
        sum += *v;
        ++count;
      }
    }
    ns.mean = count ? sum / static_cast<double>(count) : 0.0;
    double ss = 0.0;
    for (const auto & v : table.numerical[j]) {
      if (v) ss += (*v - ns.mean) * (*v - ns.mean);
    }
    ns.std = count ? std::sqrt(ss / static_cast<double>(count)) : 0.0;
    if (!(ns.std > 0.0)) {
      ns.std = 1.0;
      ns.zero_variance = true;
      st.warnings.push_back("numerical column '" + ns.name + "' has zero variance; std set to 1");
    }
    st.numerical.push_back(ns);
  }

  const auto cat_names = schema.categorical_names();
  for (std::size_t j = 0; j < table.categorical.size(); ++j) {
    std::set<std::string> distinct;
    for (const auto & v : table.categorical[j]) {
      if (v) distinct.insert(*v);
    }
    st.categorical.push_back({cat_names[j], std::vector<std::string>(distinct.begin(), distinct.end())});
  }

  if (schema.is_classification()) {
    st.class_labels = class_labels ? std::move(*class_labels) : class_labels_of(table);
    if (static_cast<int>(st.class_labels.size()) > schema.num_classes) {
      throw SchemaError(
        "target has " + std::to_string(st.class_labels.size()) + " distinct labels but the schema declares " +
        std::to_string(schema.num_classes) + " classes");
    }
    while (static_cast<int>(st.class_labels.size()) < schema.num_classes) {
      st.warnings.push_back("fewer distinct labels than declared classes");
      st.class_labels.push_back("<unseen " + std::to_string(st.class_labels.size()) + ">");
    }
  }
  return st;
}

nlohmann::json statistics_to_json(const FitStatistics & s)
{
  nlohmann::json j;
  j["task"] = to_string(s.task);
  j["num_classes"] = s.num_classes;
  j["std_convention"] = s.std_convention;
  j["numerical"] = nlohmann::json::array();
  for (const auto & n : s.numerical) {
    j["numerical"].push_back(
      {{"name", n.name}, {"mean", n.mean}, {"std", n.std}, {"zero_variance", n.zero_variance}});
  }
  j["categorical"] = nlohmann::json::array();
  for (const auto & c : s.categorical) {
    j["categorical"].push_back({{"name", c.name}, {"values", c.values}});
  }
  j["class_labels"] = s.class_labels;
  j["warnings"] = s.warnings;
  return j;
}

FitStatistics statistics_from_json(const nlohmann::json & j)
{
  try {
    FitStatistics s;
    s.task = task_from_string(j.at("task").get<std::string>());
    s.num_classes = j.at("num_classes").get<int>();
    s.std_convention = j.value("std_convention", "population");
    for (const auto & n : j.at("numerical")) {
      s.numerical.push_back(
        {n.at("name").get<std::string>(), n.at("mean").get<double>(), n.at("std").get<double>(),
         n.value("zero_variance", false)});
    }
    for (const auto & c : j.at("categorical")) {
      s.categorical.push_back({c.at("name").get<std::string>(), c.at("values").get<std::vector<std::string>>()});
    }
    s.class_labels = j.at("class_labels").get<std::vector<std::string>>();
    s.warnings = j.value("warnings", std::vector<std::string>{});
    return s;
  } catch (const nlohmann::json::exception & e) {
    throw ParseError(std::string("malformed statistics document: ") + e.what());
  }
}

void save_statistics(const FitStatistics & stats, const std::filesystem::path & path)
{
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << statistics_to_json(stats).dump(2) << '\n';
}

FitStatistics load_statistics(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception & e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return statistics_from_json(j);
}

std::vector<std::size_t> PreparedDataset::cardinalities() const
{
  std::vector<std::size_t> out;
  for (const auto & c : stats.categorical) out.push_back(c.cardinality());
  return out;
}

PreparedDataset PreparedDataset::subset(std::span<const std::size_t> row_ids) const
{
  PreparedDataset out;
  out.rows = row_ids.size();
  out.num_numerical = num_numerical;
  out.num_categorical = num_categorical;
  out.stats = stats;
  for (std::size_t r : row_ids) {
    if (r >= rows) throw ContractError("PreparedDataset::subset row out of range");
    for (std::size_t j = 0; j < num_numerical; ++j) out.numerical.push_back(numerical_at(r, j));
    for (std::size_t j = 0; j < num_categorical; ++j) out.categorical.push_back(categorical_at(r, j));
    if (!labels.empty()) out.labels.push_back(labels[r]);
    if (!targets.empty()) out.targets.push_back(targets[r]);
    if (!folds.empty()) out.folds.push_back(folds[r]);
  }
  return out;
}

PreparedDataset preprocess(const RawTable & table, const FitStatistics * fit, PreprocessOptions options)
{
  PreparedDataset d;
  d.stats = fit ? *fit : fit_statistics(table);
  const FitStatistics & st = d.stats;
  if (st.numerical.size() != table.numerical.size() || st.categorical.size() != table.categorical.size()) {
    throw SchemaError("fitted statistics do not match the table's column layout");
  }
  d.rows = table.rows;
  d.num_numerical = table.numerical.size();
  d.num_categorical = table.categorical.size();
  d.numerical.resize(d.rows * d.num_numerical);
  d.categorical.resize(d.rows * d.num_categorical);

  for (std::size_t j = 0; j < d.num_numerical; ++j) {
    const NumericStats & ns = st.numerical[j];
    for (std::size_t r = 0; r < d.rows; ++r) {
      const auto & v = table.numerical[j][r];
      d.numerical[r * d.num_numerical + j] = v ? (*v - ns.mean) / ns.std : 0.0;
    }
  }
  for (std::size_t j = 0; j < d.num_categorical; ++j) {
    const CategoryEncoding & enc = st.categorical[j];
    for (std::size_t r = 0; r < d.rows; ++r) {
      const auto & v = table.categorical[j][r];
      int code = 0;
      if (v) {
        code = enc.code_of(*v);
        if (code == 0 && options.strict_categories) {
          throw SchemaError("unknown value '" + *v + "' in categorical column '" + enc.name + "'");
        }
      }
      d.categorical[r * d.num_categorical + j] = code;
    }
  }

  for (std::size_t r = 0; r < d.rows; ++r) {
    const auto & t = table.target[r];
    if (!t) throw SchemaError("row " + std::to_string(r) + " has no target value");
    if (table.schema.is_classification()) {
      auto it = std::find(st.class_labels.begin(), st.class_labels.end(), *t);
      if (it == st.class_labels.end()) throw SchemaError("unknown class label '" + *t + "'");
      d.labels.push_back(static_cast<int>(it - st.class_labels.begin()));
    } else {
      auto v = as_number(*t);
      if (!v) throw ParseError("row " + std::to_string(r) + ": target '" + *t + "' is not a number");
      d.targets.push_back(*v);
    }
  }
  return d;
}

}  // namespace ince
