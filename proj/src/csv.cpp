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

#include "ince/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include "ince/errors.hpp"

namespace ince
{

std::vector<std::vector<std::string>> parse_csv_records(
  std::istream & in, std::vector<std::size_t> * line_numbers)
{
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  std::size_t record_line = 1;
  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    const bool blank = record.size() == 1 && record[0].empty();
    if (!blank) {
      records.push_back(std::move(record));
      if (line_numbers) line_numbers->push_back(record_line);
    }
    record.clear();
    field_started = false;
  };

  char c;
  while (in.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field_started && field.empty()) {
          in_quotes = true;
          field_started = true;
        } else {
          field += c;
        }
        break;
      case ',':
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        record_line = line;
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (in_quotes) throw ParseError("unterminated quoted field starting on line " + std::to_string(record_line));
  if (!field.empty() || !record.empty()) end_record();
  return records;
}

namespace
{

std::string trim(const std::string & s)
{
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(const std::string & cell)
{
  const std::string t = trim(cell);
  if (t.empty()) return std::nullopt;
  double v = 0.0;
  const char * first = t.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<std::string> parse_category(const std::string & cell)
{
  std::string t = trim(cell);
  if (t.empty()) return std::nullopt;
  return t;
}

}  // namespace

RawTable read_csv(std::istream & in, const TabularSchema & schema)
{
  schema.validate();
  std::vector<std::size_t> lines;
  auto records = parse_csv_records(in, &lines);
  if (records.empty()) throw ParseError("CSV has no header row");

  std::map<std::string, std::size_t> header;
  for (std::size_t i = 0; i < records[0].size(); ++i) header[trim(records[0][i])] = i;
  auto column_of = [&](const std::string & name) {
    auto it = header.find(name);
    if (it == header.end()) throw SchemaError("column '" + name + "' not found in CSV header");
    return it->second;
  };

  std::vector<std::size_t> num_cols;
  std::vector<std::size_t> cat_cols;
  for (const auto & n : schema.numerical_names()) num_cols.push_back(column_of(n));
  for (const auto & n : schema.categorical_names()) cat_cols.push_back(column_of(n));
  const std::size_t target_col = column_of(schema.target_name());
  const std::size_t width = records[0].size();

  RawTable t;
  t.schema = schema;
  t.rows = records.size() - 1;
  t.numerical.assign(num_cols.size(), {});
  t.categorical.assign(cat_cols.size(), {});
  for (auto & c : t.numerical) c.reserve(t.rows);
  for (auto & c : t.categorical) c.reserve(t.rows);
  t.target.reserve(t.rows);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto & rec = records[r];
    if (rec.size() != width) {
      throw ParseError(
        "line " + std::to_string(lines[r]) + ": expected " + std::to_string(width) +
        " fields, found " + std::to_string(rec.size()));
    }
    for (std::size_t j = 0; j < num_cols.size(); ++j) t.numerical[j].push_back(parse_number(rec[num_cols[j]]));
    for (std::size_t j = 0; j < cat_cols.size(); ++j) t.categorical[j].push_back(parse_category(rec[cat_cols[j]]));
    t.target.push_back(parse_category(rec[target_col]));
  }
  return t;
}

RawTable load_csv(const std::filesystem::path & path, const TabularSchema & schema)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open CSV file " + path.string());
  return read_csv(in, schema);
}

RawTable RawTable::subset(std::span<const std::size_t> row_ids) const
{
  RawTable out;
  out.schema = schema;
  out.rows = row_ids.size();
  out.numerical.assign(numerical.size(), {});
  out.categorical.assign(categorical.size(), {});
  for (std::size_t r : row_ids) {
    if (r >= rows) throw ContractError("RawTable::subset row out of range");
    for (std::size_t j = 0; j < numerical.size(); ++j) out.numerical[j].push_back(numerical[j][r]);
    for (std::size_t j = 0; j < categorical.size(); ++j) out.categorical[j].push_back(categorical[j][r]);
    out.target.push_back(target[r]);
  }
  return out;
}

}  // namespace ince
