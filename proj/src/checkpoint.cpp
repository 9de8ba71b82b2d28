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

#include "ince/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <iterator>

#include "ince/errors.hpp"

namespace ince
{

namespace
{

constexpr char kMagic[8] = {'I', 'N', 'C', 'E', 'C', 'K', 'P', 'T'};

template <typename T>
void put(std::vector<char> & out, T v)
{
  const auto * p = reinterpret_cast<const char *>(&v);
  out.insert(out.end(), p, p + sizeof(T));
}

template <typename T>
T get(const std::vector<char> & in, std::size_t & pos)
{
  if (pos + sizeof(T) > in.size()) throw CheckpointError("checkpoint is truncated");
  T v;
  std::memcpy(&v, in.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

}  // namespace

std::uint64_t fnv1a64(const char * data, std::size_t size, std::uint64_t seed)
{
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<char> serialize_checkpoint(InceModel & model, const nlohmann::json & extras)
{
  nlohmann::json params = nlohmann::json::array();
  std::vector<Parameter *> list = model.parameters();
  for (Parameter * p : list) params.push_back({{"name", p->name}, {"shape", p->value.shape()}});
  const nlohmann::json header = {
    {"format", "ince-checkpoint"},
    {"config", config_to_json(model.config())},
    {"statistics", statistics_to_json(model.stats())},
    {"init", {
      {"mlp", "uniform(-1/sqrt(fan_in), 1/sqrt(fan_in))"},
      {"columnar", "uniform(-1/sqrt(l), 1/sqrt(l)), zero bias"},
      {"cls", "normal(0, 0.02)"},
    }},
    {"parameters", params},
    {"extras", extras},
  };
  const std::string text = header.dump();

  std::vector<char> out(kMagic, kMagic + sizeof(kMagic));
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint64_t>(out, text.size());
  out.insert(out.end(), text.begin(), text.end());
  for (Parameter * p : list) {
    for (double v : p->value.data()) put<double>(out, v);
  }
  put<std::uint64_t>(out, fnv1a64(out.data(), out.size()));
  return out;
}

InceModel deserialize_checkpoint(const std::vector<char> & bytes, nlohmann::json * extras)
{
  if (bytes.size() < sizeof(kMagic) + 4 + 8 + 8 || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw CheckpointError("not an INCE checkpoint (bad magic)");
  }
  std::size_t pos = sizeof(kMagic);
  const auto version = get<std::uint32_t>(bytes, pos);
  if (version != kCheckpointVersion) {
    throw CheckpointError(
      "incompatible checkpoint version " + std::to_string(version) + " (this build reads version " +
      std::to_string(kCheckpointVersion) + ")");
  }
  std::size_t tail = bytes.size() - 8;
  const auto stored = get<std::uint64_t>(bytes, tail);
  if (stored != fnv1a64(bytes.data(), bytes.size() - 8)) throw CheckpointError("checkpoint checksum mismatch");

  const auto header_len = get<std::uint64_t>(bytes, pos);
  if (pos + header_len > bytes.size() - 8) throw CheckpointError("checkpoint header is truncated");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
      bytes.begin() + static_cast<std::ptrdiff_t>(pos + header_len));
  } catch (const nlohmann::json::exception & e) {
    throw CheckpointError(std::string("checkpoint header is not valid JSON: ") + e.what());
  }
  pos += header_len;

  InceModel model(config_from_json(header.at("config")), statistics_from_json(header.at("statistics")));
  std::vector<Parameter *> list = model.parameters();
  const auto & stored_params = header.at("parameters");
  if (stored_params.size() != list.size()) {
    throw CheckpointError(
      "checkpoint has " + std::to_string(stored_params.size()) + " parameter tensors, model expects " +
      std::to_string(list.size()));
  }
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto name = stored_params[i].at("name").get<std::string>();
    const auto shape = stored_params[i].at("shape").get<Shape>();
    if (name != list[i]->name || shape != list[i]->value.shape()) {
      throw CheckpointError(
        "checkpoint tensor " + name + " " + shape_string(shape) + " does not match model tensor " +
        list[i]->name + " " + shape_string(list[i]->value.shape()));
    }
    for (double & v : list[i]->value.data()) v = get<double>(bytes, pos);
  }
  if (pos != bytes.size() - 8) throw CheckpointError("checkpoint has trailing bytes");
  if (extras) *extras = header.value("extras", nlohmann::json::object());
  return model;
}

void save_checkpoint(InceModel & model, const std::filesystem::path & path, const nlohmann::json & extras)
{
  const std::vector<char> bytes = serialize_checkpoint(model, extras);
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write checkpoint " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing checkpoint " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

InceModel load_checkpoint(const std::filesystem::path & path, nlohmann::json * extras)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_checkpoint(bytes, extras);
}

InceModel load_checkpoint_for(
  const std::filesystem::path & path, std::size_t num_numerical, const std::vector<std::size_t> & cardinalities)
{
  InceModel model = load_checkpoint(path);
  const std::size_t m = num_numerical + cardinalities.size();
  if (model.num_features() != m || model.embedder().num_numerical() != num_numerical ||
    model.embedder().cardinalities() != cardinalities)
  {
    throw CheckpointError(
      "checkpoint shape mismatch: model has " + std::to_string(model.num_features()) +
      " features, schema has " + std::to_string(m));
  }
  return model;
}

}  // namespace ince
