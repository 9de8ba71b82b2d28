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

#ifndef INCE__CHECKPOINT_HPP_
#define INCE__CHECKPOINT_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "ince/model.hpp"

namespace ince
{

/// Layout: "INCECKPT", u32 version, u64 header length, JSON header,
/// raw little-endian float64 parameter values, u64 FNV-1a of everything before it.
inline constexpr std::uint32_t kCheckpointVersion = 1;


std::vector<char> serialize_checkpoint(InceModel & model, const nlohmann::json & extras = nlohmann::json::object());
InceModel deserialize_checkpoint(const std::vector<char> & bytes, nlohmann::json * extras = nullptr);

void save_checkpoint(InceModel & model, const std::filesystem::path & path,
  const nlohmann::json & extras = nlohmann::json::object());
InceModel load_checkpoint(const std::filesystem::path & path, nlohmann::json * extras = nullptr);

/// Loads a checkpoint and insists on the given feature layout (shape error otherwise).
InceModel load_checkpoint_for(
  const std::filesystem::path & path, std::size_t num_numerical, const std::vector<std::size_t> & cardinalities);

std::uint64_t fnv1a64(const char * data, std::size_t size, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace ince

#endif  // INCE__CHECKPOINT_HPP_
