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

#ifndef GNTP_CORPUS_IO_H_
#define GNTP_CORPUS_IO_H_

#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gntp/input.h"
#include "gntp/task_systems.h"

namespace gntp {

// One sentence per blank-line separated block, one token per line, columns
// separated by single tabs:
//
//   tagging      index  form  tag
//   parsing      index  form  tag  head  label
//   compression  index  form  keep
//
// followed by optional key=value attribute columns. The parsing tag column
// is an input attribute named "tag". Index counts from 1 and head 0 is ROOT.
struct Sentence {
  Input input;
  Annotation gold;
  bool has_gold = true;

  bool operator==(const Sentence &other) const = default;
};

struct Corpus {
  TaskKind task = TaskKind::kTagging;
  std::vector<Sentence> sentences;

  std::vector<Input> Inputs() const;
  std::vector<Annotation> Annotations() const;
  bool operator==(const Corpus &other) const = default;
};

// With `require_gold` false the gold columns may be left out, giving
// sentences with has_gold == false (inputs for decoding).
absl::StatusOr<Corpus> ParseCorpus(absl::string_view text, TaskKind task,
                                   bool require_gold = true,
                                   absl::string_view source = "<string>");

absl::StatusOr<Corpus> ReadCorpus(const std::string &path, TaskKind task,
                                  bool require_gold = true);

// Sentences without gold are written with their input columns only.
std::string FormatCorpus(const Corpus &corpus);

absl::Status WriteCorpus(const Corpus &corpus, const std::string &path);

// Writes `predicted` structures over `inputs` in the task format.
absl::Status WritePredictions(TaskKind task, std::span<const Input> inputs,
                              std::span<const Annotation> predicted,
                              const std::string &path);

// Sorted distinct tags (tagging) or dependency labels (parsing) of the gold
// annotations; empty for compression.
std::vector<std::string> CollectLabels(const Corpus &corpus);

absl::StatusOr<std::string> ReadFile(const std::string &path);
absl::Status WriteFile(const std::string &path, absl::string_view contents);

}  // namespace gntp

#endif  // GNTP_CORPUS_IO_H_
