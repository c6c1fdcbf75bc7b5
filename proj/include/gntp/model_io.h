// Copyright 2026 The GNTP Authors.
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

#ifndef GNTP_MODEL_IO_H_
#define GNTP_MODEL_IO_H_

#include <cstdint>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gntp/model.h"

namespace gntp {

inline constexpr char kArchiveMagic[4] = {'G', 'N', 'T', 'P'};
inline constexpr uint32_t kArchiveVersion = 1;

// Archive layout, little-endian throughout:
//   "GNTP" | u32 version | payload | u32 CRC-32 of everything before it
// The payload holds the task, metadata, feature template, labels,
// vocabularies, network shape and both parameter sets as IEEE doubles.
std::string SerializeModel(const Model &model);

// Checks magic and version before touching the payload, then the checksum.
absl::StatusOr<Model> DeserializeModel(const std::string &bytes);

absl::Status SaveModel(const Model &model, const std::string &path);
absl::StatusOr<Model> LoadModel(const std::string &path);

}  // namespace gntp

#endif  // GNTP_MODEL_IO_H_
