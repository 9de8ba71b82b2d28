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

#include "ince/schema.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "ince/errors.hpp"

namespace ince
{

const char * to_string(ColumnKind kind)
{
  switch (kind) {
    case ColumnKind::Numerical: return "numerical";
    case ColumnKind::Categorical: return "categorical";
    case ColumnKind::Target: return "target";
    case ColumnKind::Ignore: return "ignore";
  }
  return "?";
}

const char * to_string(TaskKind kind)
{
  switch (kind) {
    case TaskKind::Binary: return "binary";
    case TaskKind::Multiclass: return "multiclass";
    case TaskKind::Regression: return "regression";
  }
  return "?";
}

TaskKind task_from_string(const std::string & s)
{
  if (s == "binary") return TaskKind::Binary;
  if (s == "multiclass") return TaskKind::Multiclass;
  if (s == "regression") return TaskKind::Regression;
  throw SchemaError("unknown task kind '" + s + "'");
}

namespace
{

std::vector<std::string> names_of(const TabularSchema & s, ColumnKind kind)
{
  std::vector<std::string> out;
  for (const auto & c : s.columns) {
    if (c.kind == kind) out.push_back(c.name);
  }
  return out;
}

}  // namespace

std::vector<std::string> TabularSchema::numerical_names() const
{
  return names_of(*this, ColumnKind::Numerical);
}

std::vector<std::string> TabularSchema::categorical_names() const
{
  return names_of(*this, ColumnKind::Categorical);
}

std::vector<std::string> TabularSchema::feature_names() const
{
  auto out = numerical_names();
  for (auto & n : categorical_names()) out.push_back(std::move(n));
  return out;
}

const std::string & TabularSchema::target_name() const
{
  for (const auto & c : columns) {
    if (c.kind == ColumnKind::Target) return c.name;
  }
  throw SchemaError("schema has no target column");
}

std::size_t TabularSchema::num_features() const
{
  std::size_t m = 0;
  for (const auto & c : columns) {
    m += c.kind == ColumnKind::Numerical || c.kind == ColumnKind::Categorical;
  }
  return m;
}

void TabularSchema::validate() const
{
  int targets = 0;
  std::set<std::string> seen;
  for (const auto & c : columns) {
    if (c.name.empty()) throw SchemaError("empty column name in schema");
    if (!seen.insert(c.name).second) throw SchemaError("duplicate column '" + c.name + "'");
    targets += c.kind == ColumnKind::Target;
  }
  if (targets != 1) {
    throw SchemaError("schema needs exactly one target column, found " + std::to_string(targets));
  }
  if (num_features() == 0) throw SchemaError("schema declares no features");
  if (task == TaskKind::Binary && num_classes != 2) throw SchemaError("binary task needs 2 classes");
  if (task == TaskKind::Multiclass && num_classes < 2) {
    throw SchemaError("multiclass task needs at least 2 classes");
  }
}

TabularSchema parse_schema(const std::string & text)
{
  TabularSchema s;
  bool have_task = false;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    std::string rest;
    std::getline(ls, rest);
    const auto b = rest.find_first_not_of(" \t\r");
    const auto e = rest.find_last_not_of(" \t\r");
    rest = b == std::string::npos ? "" : rest.substr(b, e - b + 1);
    const std::string where = "schema line " + std::to_string(lineno) + ": ";
    if (key == "task") {
      std::istringstream ts(rest);
      std::string kind;
      ts >> kind;
      s.task = task_from_string(kind);
      if (s.task == TaskKind::Binary) s.num_classes = 2;
      if (s.task == TaskKind::Regression) s.num_classes = 1;
      if (s.task == TaskKind::Multiclass && !(ts >> s.num_classes)) {
        throw SchemaError(where + "multiclass needs a class count");
      }
      have_task = true;
    } else if (key == "numerical" || key == "categorical" || key == "target" || key == "ignore") {
      if (rest.empty()) throw SchemaError(where + "missing column name");
      ColumnKind kind = ColumnKind::Numerical;
      if (key == "categorical") kind = ColumnKind::Categorical;
      if (key == "target") kind = ColumnKind::Target;
      if (key == "ignore") kind = ColumnKind::Ignore;
      s.columns.push_back({rest, kind});
    } else {
      throw SchemaError(where + "unknown directive '" + key + "'");
    }
  }
  if (!have_task) throw SchemaError("schema has no task line");
  s.validate();
  return s;
}

TabularSchema load_schema(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) throw IoError("cannot open schema file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_schema(ss.str());
}

std::string format_schema(const TabularSchema & schema)
{
  std::ostringstream out;
  out << "task " << to_string(schema.task);
  if (schema.task == TaskKind::Multiclass) out << ' ' << schema.num_classes;
  out << '\n';
  for (const auto & c : schema.columns) out << to_string(c.kind) << ' ' << c.name << '\n';
  return out.str();
}

}  // namespace ince
