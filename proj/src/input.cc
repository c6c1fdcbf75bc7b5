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

#include "gntp/input.h"

#include "absl/strings/str_cat.h"

namespace gntp {

const std::string &Input::Column(int index, absl::string_view column) const {
  static const std::string *const kEmpty = new std::string();
  const Token &token = tokens[index];
  if (column == "form") return token.form;
  auto it = token.attributes.find(std::string(column));
  return it == token.attributes.end() ? *kEmpty : it->second;
}

Input MakeInput(const std::vector<std::string> &forms) {
  Input input;
  input.tokens.reserve(forms.size());
  for (const std::string &form : forms) input.tokens.push_back({form, {}});
  return input;
}

absl::Status ValidateInput(const Input &input) {
  if (input.empty()) {
    return absl::InvalidArgumentError("input sentence is empty");
  }
  const auto &first = input.tokens.front().attributes;
  for (int i = 1; i < input.size(); ++i) {
    const auto &attrs = input.tokens[i].attributes;
    bool same = attrs.size() == first.size();
    for (auto a = attrs.begin(), b = first.begin(); same && a != attrs.end();
         ++a, ++b) {
      same = a->first == b->first;
    }
    if (!same) {
      return absl::InvalidArgumentError(absl::StrCat(
          "token ", i + 1, " has a different attribute set than token 1"));
    }
  }
  return absl::OkStatus();
}

}  // namespace gntp
