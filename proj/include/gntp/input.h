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

#ifndef GNTP_INPUT_H_
#define GNTP_INPUT_H_

#include <map>
#include <string>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/status.h"

namespace gntp {

// A single token of a tokenized sentence. Attribute columns carry optional
// per-token annotations used as features (part-of-speech tag, cluster id).
struct Token {
  std::string form;
  std::map<std::string, std::string> attributes;

  bool operator==(const Token &other) const = default;
};

// A tokenized sentence.
struct Input {
  std::vector<Token> tokens;

  int size() const { return static_cast<int>(tokens.size()); }
  bool empty() const { return tokens.empty(); }

  // Returns the value of `column` for token `index`. The column "form" is the
  // surface form; anything else is looked up in the attribute map and yields
  // an empty string when missing.
  const std::string &Column(int index, absl::string_view column) const;

  bool operator==(const Input &other) const = default;
};

// Builds an attribute-free input from surface forms.
Input MakeInput(const std::vector<std::string> &forms);

// Checks that the sentence is non-empty and that every token carries the same
// set of attribute names.
absl::Status ValidateInput(const Input &input);

}  // namespace gntp

#endif  // GNTP_INPUT_H_
