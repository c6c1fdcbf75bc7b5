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

#include "gntp/corpus_io.h"

#include <fstream>
#include <set>
#include <sstream>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"

namespace gntp {

std::vector<Input> Corpus::Inputs() const {
  std::vector<Input> out;
  out.reserve(sentences.size());
  for (const Sentence &s : sentences) out.push_back(s.input);
  return out;
}

std::vector<Annotation> Corpus::Annotations() const {
  std::vector<Annotation> out;
  out.reserve(sentences.size());
  for (const Sentence &s : sentences) out.push_back(s.gold);
  return out;
}

namespace {

int GoldColumns(TaskKind task) {
  switch (task) {
    case TaskKind::kTagging:
      return 1;
    case TaskKind::kParsing:
      return 3;
    case TaskKind::kCompression:
      return 1;
  }
  return 0;
}

// Task columns that are input, not gold: the parser's tag column.
int InputColumns(TaskKind task) { return task == TaskKind::kParsing ? 1 : 0; }

struct Line {
  int number;
  std::vector<absl::string_view> fields;
};

class BlockParser {
 public:
  BlockParser(TaskKind task, bool require_gold, absl::string_view source)
      : task_(task), require_gold_(require_gold), source_(source) {}

  absl::StatusOr<Sentence> Parse(const std::vector<Line> &lines) const {
    Sentence sentence;
    sentence.gold.kind = task_;
    std::vector<int> head_lines;
    bool first = true;
    for (size_t t = 0; t < lines.size(); ++t) {
      const Line &line = lines[t];
      const auto &f = line.fields;
      if (f.size() < 2) return Error(line, "expected index and form columns");
      int index = 0;
      if (!absl::SimpleAtoi(f[0], &index) || index != static_cast<int>(t) + 1) {
        return Error(line, absl::StrCat("token index '", f[0],
                                        "' should be ", t + 1));
      }
      if (f[1].empty()) return Error(line, "empty form");
      Token token;
      token.form = std::string(f[1]);
      size_t positional = 2;
      while (positional < f.size() &&
             f[positional].find('=') == absl::string_view::npos) {
        ++positional;
      }
      const int task_columns = static_cast<int>(positional) - 2;
      const int full = GoldColumns(task_);
      const int input_only = InputColumns(task_);
      bool has_gold;
      if (task_columns == full) {
        has_gold = true;
      } else if (!require_gold_ && task_columns == input_only) {
        has_gold = false;
      } else {
        return Error(line, absl::StrCat(
                               "expected ", full, " ", TaskKindName(task_),
                               " columns after the form, found ",
                               task_columns));
      }
      if (first) {
        sentence.has_gold = has_gold;
        first = false;
      } else if (has_gold != sentence.has_gold) {
        return Error(line, "gold columns present on some tokens only");
      }
      for (size_t c = positional; c < f.size(); ++c) {
        std::pair<std::string, std::string> kv =
            absl::StrSplit(f[c], absl::MaxSplits('=', 1));
        if (kv.first.empty() || kv.first == "form" ||
            (task_ == TaskKind::kParsing && kv.first == "tag")) {
          return Error(line, absl::StrCat("bad attribute column '", f[c], "'"));
        }
        if (!token.attributes.emplace(kv.first, kv.second).second) {
          return Error(line, absl::StrCat("duplicate attribute '", kv.first,
                                          "'"));
        }
      }
      switch (task_) {
        case TaskKind::kTagging:
          if (has_gold) sentence.gold.tags.emplace_back(f[2]);
          break;
        case TaskKind::kParsing: {
          token.attributes["tag"] = std::string(f[2]);
          if (!has_gold) break;
          int head = 0;
          if (!absl::SimpleAtoi(f[3], &head)) {
            return Error(line, absl::StrCat("bad head '", f[3], "'"));
          }
          if (f[4].empty()) return Error(line, "empty dependency label");
          sentence.gold.heads.push_back(head);
          sentence.gold.labels.emplace_back(f[4]);
          head_lines.push_back(line.number);
          break;
        }
        case TaskKind::kCompression:
          if (!has_gold) break;
          if (f[2] != "0" && f[2] != "1") {
            return Error(line, absl::StrCat("keep bit must be 0 or 1, got '",
                                            f[2], "'"));
          }
          sentence.gold.keep.push_back(f[2] == "1" ? 1 : 0);
          break;
      }
      sentence.input.tokens.push_back(std::move(token));
    }
    const int m = static_cast<int>(lines.size());
    for (size_t t = 0; t < head_lines.size(); ++t) {
      const int head = sentence.gold.heads[t];
      if (head < 0 || head > m) {
        return absl::InvalidArgumentError(absl::StrCat(
            source_, ":", head_lines[t], ": head ", head,
            " out of range [0, ", m, "]"));
      }
    }
    if (absl::Status s = ValidateInput(sentence.input); !s.ok()) {
      return Error(lines.front(), s.message());
    }
    if (sentence.has_gold) {
      if (absl::Status s = ValidateAnnotation(sentence.input, sentence.gold);
          !s.ok()) {
        return Error(lines.front(), s.message());
      }
    } else {
      sentence.gold = Annotation{};
      sentence.gold.kind = task_;
    }
    return sentence;
  }

 private:
  absl::Status Error(const Line &line, absl::string_view message) const {
    return absl::InvalidArgumentError(
        absl::StrCat(source_, ":", line.number, ": ", message));
  }

  TaskKind task_;
  bool require_gold_;
  std::string source_;
};

}  // namespace

absl::StatusOr<Corpus> ParseCorpus(absl::string_view text, TaskKind task,
                                   bool require_gold,
                                   absl::string_view source) {
  Corpus corpus;
  corpus.task = task;
  BlockParser parser(task, require_gold, source);
  std::vector<Line> block;
  auto flush = [&]() -> absl::Status {
    if (block.empty()) return absl::OkStatus();
    absl::StatusOr<Sentence> s = parser.Parse(block);
    block.clear();
    if (!s.ok()) return s.status();
    corpus.sentences.push_back(std::move(*s));
    return absl::OkStatus();
  };
  int number = 0;
  for (absl::string_view raw : absl::StrSplit(text, '\n')) {
    ++number;
    absl::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      if (absl::Status s = flush(); !s.ok()) return s;
      continue;
    }
    block.push_back({number, absl::StrSplit(line, '\t')});
  }
  if (absl::Status s = flush(); !s.ok()) return s;
  return corpus;
}

absl::StatusOr<std::string> ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) return absl::DataLossError(absl::StrCat("error reading ", path));
  return buffer.str();
}

absl::Status WriteFile(const std::string &path, absl::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("error writing ", path));
  return absl::OkStatus();
}

absl::StatusOr<Corpus> ReadCorpus(const std::string &path, TaskKind task,
                                  bool require_gold) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  return ParseCorpus(*text, task, require_gold, path);
}

std::string FormatCorpus(const Corpus &corpus) {
  std::string out;
  for (size_t s = 0; s < corpus.sentences.size(); ++s) {
    const Sentence &sentence = corpus.sentences[s];
    if (s > 0) out += '\n';
    for (int i = 0; i < sentence.input.size(); ++i) {
      const Token &token = sentence.input.tokens[i];
      std::vector<std::string> fields = {absl::StrCat(i + 1), token.form};
      const Annotation &g = sentence.gold;
      switch (corpus.task) {
        case TaskKind::kTagging:
          if (sentence.has_gold) fields.push_back(g.tags[i]);
          break;
        case TaskKind::kParsing:
          fields.push_back(sentence.input.Column(i, "tag"));
          if (sentence.has_gold) {
            fields.push_back(absl::StrCat(g.heads[i]));
            fields.push_back(g.labels[i]);
          }
          break;
        case TaskKind::kCompression:
          if (sentence.has_gold) fields.push_back(g.keep[i] ? "1" : "0");
          break;
      }
      for (const auto &[key, value] : token.attributes) {
        if (corpus.task == TaskKind::kParsing && key == "tag") continue;
        fields.push_back(absl::StrCat(key, "=", value));
      }
      absl::StrAppend(&out, absl::StrJoin(fields, "\t"), "\n");
    }
  }
  return out;
}

absl::Status WriteCorpus(const Corpus &corpus, const std::string &path) {
  return WriteFile(path, FormatCorpus(corpus));
}

absl::Status WritePredictions(TaskKind task, std::span<const Input> inputs,
                              std::span<const Annotation> predicted,
                              const std::string &path) {
  if (inputs.size() != predicted.size()) {
    return absl::InvalidArgumentError("inputs and predictions differ in size");
  }
  Corpus corpus;
  corpus.task = task;
  for (size_t i = 0; i < inputs.size(); ++i) {
    corpus.sentences.push_back({inputs[i], predicted[i], true});
  }
  return WriteCorpus(corpus, path);
}

std::vector<std::string> CollectLabels(const Corpus &corpus) {
  std::set<std::string> labels;
  for (const Sentence &s : corpus.sentences) {
    if (!s.has_gold) continue;
    if (corpus.task == TaskKind::kTagging) {
      labels.insert(s.gold.tags.begin(), s.gold.tags.end());
    } else if (corpus.task == TaskKind::kParsing) {
      labels.insert(s.gold.labels.begin(), s.gold.labels.end());
    }
  }
  return {labels.begin(), labels.end()};
}

}  // namespace gntp
