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

#include "gntp/features.h"

#include <algorithm>
#include <fstream>
#include <set>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"

namespace gntp {

namespace {

absl::string_view SourceName(FeatureSource source) {
  switch (source) {
    case FeatureSource::kToken:
      return "token";
    case FeatureSource::kChars:
      return "chars";
    case FeatureSource::kHistory:
      return "history";
    case FeatureSource::kParser:
      return "parser";
  }
  return "unknown";
}

absl::StatusOr<FeatureSource> ParseSource(absl::string_view name) {
  if (name == "token") return FeatureSource::kToken;
  if (name == "chars") return FeatureSource::kChars;
  if (name == "history") return FeatureSource::kHistory;
  if (name == "parser") return FeatureSource::kParser;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown feature source '", name, "'"));
}

absl::StatusOr<int> ParseInt(absl::string_view key, absl::string_view value) {
  int out = 0;
  if (!absl::SimpleAtoi(value, &out)) {
    return absl::InvalidArgumentError(
        absl::StrCat("bad integer for ", key, ": '", value, "'"));
  }
  return out;
}

// Splits UTF-8 text into code points.
std::vector<absl::string_view> CodePoints(absl::string_view text) {
  std::vector<absl::string_view> out;
  size_t i = 0;
  while (i < text.size()) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    size_t len = 1;
    if (c >= 0xF0) {
      len = 4;
    } else if (c >= 0xE0) {
      len = 3;
    } else if (c >= 0xC0) {
      len = 2;
    }
    len = std::min(len, text.size() - i);
    out.push_back(text.substr(i, len));
    i += len;
  }
  return out;
}

}  // namespace

absl::StatusOr<Locator> Locator::Parse(absl::string_view text) {
  std::vector<absl::string_view> parts = absl::StrSplit(text, '.');
  Locator loc;
  auto parse_step = [&](absl::string_view part, char *kind,
                        int *n) -> absl::Status {
    if (part.size() < 2 || !absl::SimpleAtoi(part.substr(1), n) || *n < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad locator '", text, "'"));
    }
    *kind = part[0];
    return absl::OkStatus();
  };
  char kind = 0;
  int n = 0;
  if (absl::Status s = parse_step(parts[0], &kind, &n); !s.ok()) return s;
  if (kind == 's') {
    loc.base = kStack;
  } else if (kind == 'b') {
    loc.base = kBuffer;
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("locator must start with s<k> or b<k>: '", text, "'"));
  }
  loc.index = n;
  for (size_t i = 1; i < parts.size(); ++i) {
    if (absl::Status s = parse_step(parts[i], &kind, &n); !s.ok()) return s;
    if ((kind != 'l' && kind != 'r') || n == 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad child step in locator '", text, "'"));
    }
    loc.path.push_back(kind == 'l' ? -n : n);
  }
  return loc;
}

std::string Locator::ToString() const {
  std::string out = absl::StrCat(base == kStack ? "s" : "b", index);
  for (int step : path) {
    absl::StrAppend(&out, step < 0 ? ".l" : ".r", step < 0 ? -step : step);
  }
  return out;
}

absl::StatusOr<FeatureGroup> FeatureTemplate::ParseGroupLine(
    absl::string_view line) {
  std::vector<absl::string_view> fields =
      absl::StrSplit(line, absl::ByAnyChar(" \t"), absl::SkipEmpty());
  if (fields.empty() || fields[0] != "group") {
    return absl::InvalidArgumentError(
        absl::StrCat("feature line must start with 'group': '", line, "'"));
  }
  FeatureGroup group;
  std::string at;
  bool has_source = false, has_at = false, has_dim = false;
  for (size_t i = 1; i < fields.size(); ++i) {
    std::pair<absl::string_view, absl::string_view> kv =
        absl::StrSplit(fields[i], absl::MaxSplits('=', 1));
    const auto [key, value] = kv;
    if (key == "name") {
      group.name = std::string(value);
    } else if (key == "source") {
      absl::StatusOr<FeatureSource> s = ParseSource(value);
      if (!s.ok()) return s.status();
      group.source = *s;
      has_source = true;
    } else if (key == "column") {
      group.column = std::string(value);
    } else if (key == "at") {
      at = std::string(value);
      has_at = true;
    } else if (key == "dim") {
      absl::StatusOr<int> d = ParseInt(key, value);
      if (!d.ok()) return d.status();
      group.dim = *d;
      has_dim = true;
    } else if (key == "vocab") {
      group.vocab = std::string(value);
    } else if (key == "lookahead") {
      if (value == "all") {
        group.lookahead = kUnlimitedLookahead;
      } else {
        absl::StatusOr<int> k = ParseInt(key, value);
        if (!k.ok()) return k.status();
        if (*k < 0) return absl::InvalidArgumentError("lookahead must be >= 0");
        group.lookahead = *k;
      }
    } else if (key == "max_ngram") {
      absl::StatusOr<int> n = ParseInt(key, value);
      if (!n.ok()) return n.status();
      group.max_ngram = *n;
    } else if (key == "boundary") {
      if (value != "true" && value != "false") {
        return absl::InvalidArgumentError("boundary must be true or false");
      }
      group.boundary = value == "true";
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown feature key '", key, "'"));
    }
  }
  if (group.name.empty() || !has_source || !has_at || !has_dim) {
    return absl::InvalidArgumentError(absl::StrCat(
        "feature group needs name, source, at and dim: '", line, "'"));
  }
  if (group.dim <= 0 || group.max_ngram <= 0) {
    return absl::InvalidArgumentError("dim and max_ngram must be positive");
  }
  for (absl::string_view item : absl::StrSplit(at, ',', absl::SkipEmpty())) {
    if (group.source == FeatureSource::kParser) {
      absl::StatusOr<Locator> loc = Locator::Parse(item);
      if (!loc.ok()) return loc.status();
      group.locators.push_back(*loc);
    } else {
      absl::StatusOr<int> off = ParseInt("at", item);
      if (!off.ok()) return off.status();
      group.offsets.push_back(*off);
    }
  }
  if (group.arity() == 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("feature group '", group.name, "' has no slots"));
  }
  if (group.source == FeatureSource::kHistory) {
    for (int k : group.offsets) {
      if (k <= 0) {
        return absl::InvalidArgumentError("history offsets start at 1");
      }
    }
  }
  if (group.column == "label" && group.source != FeatureSource::kParser) {
    return absl::InvalidArgumentError(
        "column=label is only available to parser groups");
  }
  return group;
}

absl::StatusOr<FeatureTemplate> FeatureTemplate::Parse(absl::string_view text) {
  FeatureTemplate out;
  std::set<std::string> names;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line[0] == '#') continue;
    absl::StatusOr<FeatureGroup> group = ParseGroupLine(line);
    if (!group.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "feature template line ", line_no, ": ", group.status().message()));
    }
    if (!names.insert(group->name).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate feature group '", group->name, "'"));
    }
    out.groups.push_back(std::move(*group));
  }
  return out;
}

std::string FeatureTemplate::ToString() const {
  std::string out;
  for (const FeatureGroup &g : groups) {
    absl::StrAppend(&out, "group name=", g.name, " source=",
                    SourceName(g.source));
    if (g.source != FeatureSource::kHistory) {
      absl::StrAppend(&out, " column=", g.column);
    }
    if (g.source == FeatureSource::kParser) {
      absl::StrAppend(&out, " at=",
                      absl::StrJoin(g.locators, ",",
                                    [](std::string *o, const Locator &l) {
                                      o->append(l.ToString());
                                    }));
    } else {
      absl::StrAppend(&out, " at=", absl::StrJoin(g.offsets, ","));
    }
    if (g.source == FeatureSource::kChars) {
      absl::StrAppend(&out, " max_ngram=", g.max_ngram,
                      " boundary=", g.boundary ? "true" : "false");
    }
    absl::StrAppend(&out, " dim=", g.dim, " vocab=", g.vocab, " lookahead=",
                    g.lookahead < 0 ? std::string("all")
                                    : absl::StrCat(g.lookahead),
                    "\n");
  }
  return out;
}

void FeatureTemplate::SetLookahead(int lookahead) {
  for (FeatureGroup &g : groups) g.lookahead = lookahead;
}

Vocabulary::Vocabulary() {
  Add(kPaddingValue);
  Add(kUnknownValue);
}

absl::StatusOr<Vocabulary> Vocabulary::FromValues(
    std::vector<std::string> values) {
  if (values.size() < 2 || values[0] != kPaddingValue ||
      values[1] != kUnknownValue) {
    return absl::InvalidArgumentError(
        "vocabulary must begin with the padding and unknown entries");
  }
  Vocabulary vocab;
  for (size_t i = 2; i < values.size(); ++i) {
    if (vocab.Lookup(values[i]) != kUnknown) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate vocabulary entry '", values[i], "'"));
    }
    vocab.Add(values[i]);
  }
  return vocab;
}

int Vocabulary::Add(absl::string_view value) {
  auto [it, inserted] =
      index_.emplace(std::string(value), static_cast<int>(values_.size()));
  if (inserted) values_.emplace_back(value);
  return it->second;
}

int Vocabulary::Lookup(absl::string_view value) const {
  auto it = index_.find(std::string(value));
  return it == index_.end() ? kUnknown : it->second;
}

std::vector<std::string> CharacterNgrams(absl::string_view word, int max_n,
                                         bool boundary) {
  std::vector<absl::string_view> chars = CodePoints(word);
  const int len = static_cast<int>(chars.size());
  std::vector<std::string> out;
  const int first = boundary ? -1 : 0;
  const int last = boundary ? len : len - 1;
  for (int n = 1; n <= max_n; ++n) {
    for (int start = first; start + n - 1 <= last; ++start) {
      const int end = start + n - 1;
      // Skip n-grams made only of markers.
      if (n == 1 && (start < 0 || start >= len)) continue;
      if (start < 0 && end >= len && len == 0) continue;
      std::string gram;
      for (int i = start; i <= end; ++i) {
        if (i < 0) {
          gram += '^';
        } else if (i >= len) {
          gram += '$';
        } else {
          gram.append(chars[i].data(), chars[i].size());
        }
      }
      out.push_back(std::move(gram));
    }
  }
  return out;
}

namespace {

absl::StatusOr<std::vector<std::string>> ReadVocabFile(
    const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open vocabulary ", path));
  }
  std::vector<std::string> values;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) values.push_back(line);
  }
  return values;
}

bool ReadsTokenColumn(const FeatureGroup &g) {
  return g.source == FeatureSource::kToken ||
         g.source == FeatureSource::kChars ||
         (g.source == FeatureSource::kParser && g.column != "label");
}

}  // namespace

absl::StatusOr<FeatureExtractor> FeatureExtractor::Build(
    FeatureTemplate feature_template, const TransitionSystem &system,
    std::span<const Input> corpus) {
  std::vector<Vocabulary> vocabs;
  for (const FeatureGroup &g : feature_template.groups) {
    Vocabulary vocab;
    if (g.source == FeatureSource::kHistory) {
      for (const std::string &name : system.decisions().names()) {
        vocab.Add(name);
      }
    } else if (g.source == FeatureSource::kParser && g.column == "label") {
      for (const std::string &l : system.labels()) vocab.Add(l);
    } else {
      if (g.source == FeatureSource::kParser) vocab.Add(Vocabulary::kRootValue);
      std::set<std::string> values;
      if (g.vocab == "auto") {
        for (const Input &input : corpus) {
          for (int i = 0; i < input.size(); ++i) {
            const std::string &v = input.Column(i, g.column);
            if (g.source == FeatureSource::kChars) {
              for (std::string &gram :
                   CharacterNgrams(v, g.max_ngram, g.boundary)) {
                values.insert(std::move(gram));
              }
            } else {
              values.insert(v);
            }
          }
        }
        for (const std::string &v : values) vocab.Add(v);
      } else {
        absl::StatusOr<std::vector<std::string>> file = ReadVocabFile(g.vocab);
        if (!file.ok()) return file.status();
        for (const std::string &v : *file) vocab.Add(v);
      }
    }
    vocabs.push_back(std::move(vocab));
  }
  return FromVocabularies(std::move(feature_template), system,
                          std::move(vocabs));
}

absl::StatusOr<FeatureExtractor> FeatureExtractor::FromVocabularies(
    FeatureTemplate feature_template, const TransitionSystem &system,
    std::vector<Vocabulary> vocabularies) {
  FeatureExtractor fx;
  fx.template_ = std::move(feature_template);
  fx.vocabs_ = std::move(vocabularies);
  if (absl::Status s = fx.Validate(system); !s.ok()) return s;
  const int groups = fx.num_groups();
  fx.decision_ids_.resize(groups);
  fx.label_ids_.resize(groups);
  for (int g = 0; g < groups; ++g) {
    const FeatureGroup &group = fx.template_.groups[g];
    if (group.source == FeatureSource::kHistory) {
      for (const std::string &name : system.decisions().names()) {
        fx.decision_ids_[g].push_back(fx.vocabs_[g].Lookup(name));
      }
    } else if (group.source == FeatureSource::kParser &&
               group.column == "label") {
      for (const std::string &l : system.labels()) {
        fx.label_ids_[g].push_back(fx.vocabs_[g].Lookup(l));
      }
    }
  }
  return fx;
}

absl::Status FeatureExtractor::Validate(const TransitionSystem &system) const {
  if (vocabs_.size() != template_.groups.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "template has ", template_.groups.size(), " groups but ",
        vocabs_.size(), " vocabularies were supplied"));
  }
  for (size_t g = 0; g < vocabs_.size(); ++g) {
    const FeatureGroup &group = template_.groups[g];
    if (group.source == FeatureSource::kParser &&
        system.kind() != TaskKind::kParsing) {
      return absl::InvalidArgumentError(absl::StrCat(
          "parser feature group '", group.name, "' needs a parsing task"));
    }
    if (group.source == FeatureSource::kHistory) {
      for (const std::string &name : system.decisions().names()) {
        if (vocabs_[g].Lookup(name) == Vocabulary::kUnknown) {
          return absl::InvalidArgumentError(
              absl::StrCat("history vocabulary of '", group.name,
                           "' lacks decision ", name));
        }
      }
    }
  }
  return absl::OkStatus();
}

EncodedInput FeatureExtractor::Encode(const Input &input) const {
  EncodedInput enc;
  enc.num_tokens = input.size();
  const int groups = num_groups();
  enc.ids.resize(groups);
  enc.begin.resize(groups);
  for (int g = 0; g < groups; ++g) {
    const FeatureGroup &group = template_.groups[g];
    if (!ReadsTokenColumn(group)) continue;
    std::vector<int> &ids = enc.ids[g];
    std::vector<int> &begin = enc.begin[g];
    begin.push_back(0);
    if (group.source == FeatureSource::kParser) {
      ids.push_back(vocabs_[g].Lookup(Vocabulary::kRootValue));
      begin.push_back(static_cast<int>(ids.size()));
    }
    for (int i = 0; i < input.size(); ++i) {
      const std::string &value = input.Column(i, group.column);
      if (group.source == FeatureSource::kChars) {
        const size_t before = ids.size();
        for (const std::string &gram :
             CharacterNgrams(value, group.max_ngram, group.boundary)) {
          ids.push_back(vocabs_[g].Lookup(gram));
        }
        if (ids.size() == before) ids.push_back(Vocabulary::kPadding);
      } else {
        ids.push_back(vocabs_[g].Lookup(value));
      }
      begin.push_back(static_cast<int>(ids.size()));
    }
  }
  return enc;
}

int FeatureExtractor::Locate(const Locator &locator, const State &state,
                             int num_tokens, int lookahead) const {
  int node = -1;
  if (locator.base == Locator::kStack) {
    const int n = static_cast<int>(state.stack.size());
    if (locator.index < n) node = state.stack[n - 1 - locator.index];
  } else {
    const int token = state.next + locator.index;
    if (token < num_tokens &&
        (lookahead < 0 || locator.index <= lookahead)) {
      node = token + 1;
    }
  }
  for (int step : locator.path) {
    if (node < 0) break;
    int found = -1;
    int remaining = step < 0 ? -step : step;
    if (step < 0) {
      for (int c = 1; c < node && remaining > 0; ++c) {
        if (state.heads[c - 1] == node && --remaining == 0) found = c;
      }
    } else {
      for (int c = num_tokens; c > node && remaining > 0; --c) {
        if (state.heads[c - 1] == node && --remaining == 0) found = c;
      }
    }
    node = found;
  }
  return node;
}

FeatureVector FeatureExtractor::Extract(const State &state,
                                        const EncodedInput &input) const {
  FeatureVector fv;
  fv.slot_begin.push_back(0);
  const int m = input.num_tokens;
  const int focus = state.next;
  const int history = state.num_decisions();
  for (int g = 0; g < num_groups(); ++g) {
    const FeatureGroup &group = template_.groups[g];
    auto close_slot = [&fv] {
      fv.slot_begin.push_back(static_cast<int>(fv.ids.size()));
    };
    switch (group.source) {
      case FeatureSource::kToken:
      case FeatureSource::kChars:
        for (int off : group.offsets) {
          const int p = focus + off;
          const bool visible =
              p >= 0 && p < m &&
              (group.lookahead < 0 || p <= focus + group.lookahead);
          if (visible) {
            for (int id : input.At(g, p)) fv.ids.push_back(id);
          } else {
            fv.ids.push_back(Vocabulary::kPadding);
          }
          close_slot();
        }
        break;
      case FeatureSource::kHistory:
        for (int k : group.offsets) {
          fv.ids.push_back(k <= history
                               ? decision_ids_[g][state.history[history - k]]
                               : Vocabulary::kPadding);
          close_slot();
        }
        break;
      case FeatureSource::kParser:
        for (const Locator &loc : group.locators) {
          const int node = Locate(loc, state, m, group.lookahead);
          int id = Vocabulary::kPadding;
          if (node >= 0) {
            if (group.column == "label") {
              if (node > 0 && state.labels[node - 1] >= 0) {
                id = label_ids_[g][state.labels[node - 1]];
              }
            } else {
              id = input.At(g, node)[0];
            }
          }
          fv.ids.push_back(id);
          close_slot();
        }
        break;
    }
  }
  return fv;
}

}  // namespace gntp
