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

#ifndef INCE__CSV_HPP_
#define INCE__CSV_HPP_

#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ince/schema.hpp"

namespace ince
{

/// Split RFC-4180 records. Quoted fields may hold commas, doubled quotes and
/// newlines. `line_numbers`, when given, receives the starting line of each
/// record.
std::vector<std::vector<std::string>> parse_csv_records(
  std::istream & in, std::vector<std::size_t> * line_numbers = nullptr);

/// Typed columns read under a schema; std::nullopt marks a missing cell.
struct RawTable
{
  TabularSchema schema;
  std::size_t rows = 0;
  /// One vector per numerical column, in schema order.
  std::vector<std::vector<std::optional<double>>> numerical;
  /// One vector per categorical column, in schema order.
  std::vector<std::vector<std::optional<std::string>>> categorical;
  std::vector<std::optional<std::string>> target;

  RawTable subset(std::span<const std::size_t> row_ids) const;
};

RawTable read_csv(std::istream & in, const TabularSchema & schema);
RawTable load_csv(const std::filesystem::path & path, const TabularSchema & schema);

}  // namespace ince

#endif  // INCE__CSV_HPP_
