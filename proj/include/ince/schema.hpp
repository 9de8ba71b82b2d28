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

#ifndef INCE__SCHEMA_HPP_
#define INCE__SCHEMA_HPP_

#include <filesystem>
#include <string>
#include <vector>

namespace ince
{

enum class ColumnKind { Numerical, Categorical, Target, Ignore };
enum class TaskKind { Binary, Multiclass, Regression };

const char * to_string(ColumnKind kind);
const char * to_string(TaskKind kind);
TaskKind task_from_string(const std::string & s);

struct ColumnSpec
{
  std::string name;
  ColumnKind kind = ColumnKind::Numerical;
};

/// Declared column typing of a tabular dataset.
///
/// Text form, one directive per line (`#` starts a comment):
///
///     task binary | multiclass <C> | regression
///     numerical <name>
///     categorical <name>
///     target <name>
///     ignore <name>
///
/// Feature order is the order of the numerical/categorical lines; the model
/// places all numericals first, then all categoricals.
struct TabularSchema
{
  std::vector<ColumnSpec> columns;
  TaskKind task = TaskKind::Regression;
  /// Number of classes; 2 for binary, 1 for regression.
  int num_classes = 1;

  std::vector<std::string> numerical_names() const;
  std::vector<std::string> categorical_names() const;
  /// Numericals then categoricals, i.e. graph node order.
  std::vector<std::string> feature_names() const;
  const std::string & target_name() const;
  std::size_t num_features() const;
  bool is_classification() const { return task != TaskKind::Regression; }

  /// Throws SchemaError unless there is exactly one target and M >= 1.
  void validate() const;
};

TabularSchema parse_schema(const std::string & text);
TabularSchema load_schema(const std::filesystem::path & path);
std::string format_schema(const TabularSchema & schema);

}  // namespace ince

#endif  // INCE__SCHEMA_HPP_
