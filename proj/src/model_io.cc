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

#include "gntp/model_io.h"

#include <bit>
#include <cstring>

#include <zlib.h>

#include "absl/strings/str_cat.h"
#include "gntp/corpus_io.h"

namespace gntp {

namespace {

class Writer {
 public:
  void U32(uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>(v >> (8 * i)));
  }
  void U64(uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>(v >> (8 * i)));
  }
  void F64(double v) { U64(std::bit_cast<uint64_t>(v)); }
  void Str(absl::string_view s) {
    U32(static_cast<uint32_t>(s.size()));
    out_.append(s.data(), s.size());
  }
  void Raw(const char *data, size_t n) { out_.append(data, n); }
  std::string &bytes() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  Reader(absl::string_view data) : data_(data) {}

  bool U32(uint32_t *v) {
    if (!Need(4)) return false;
    *v = 0;
    for (int i = 0; i < 4; ++i) {
      *v |= static_cast<uint32_t>(static_cast<unsigned char>(data_[pos_ + i]))
            << (8 * i);
    }
    pos_ += 4;
    return true;
  }
  bool U64(uint64_t *v) {
    if (!Need(8)) return false;
    *v = 0;
    for (int i = 0; i < 8; ++i) {
      *v |= static_cast<uint64_t>(static_cast<unsigned char>(data_[pos_ + i]))
            << (8 * i);
    }
    pos_ += 8;
    return true;
  }
  bool F64(double *v) {
    uint64_t bits;
    if (!U64(&bits)) return false;
    *v = std::bit_cast<double>(bits);
    return true;
  }
  bool Str(std::string *s) {
    uint32_t n;
    if (!U32(&n) || !Need(n)) return false;
    s->assign(data_.data() + pos_, n);
    pos_ += n;
    return true;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  bool Need(size_t n) const { return data_.size() - pos_ >= n; }

  absl::string_view data_;
  size_t pos_ = 0;
};

uint32_t Checksum(absl::string_view data) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef *>(data.data()),
              static_cast<uInt>(data.size()));
  return static_cast<uint32_t>(crc);
}

void WriteParams(Writer &w, const Parameters &params) {
  w.U64(params.size());
  for (std::span<const double> t : params.Tensors()) {
    for (double v : t) w.F64(v);
  }
}

bool ReadParams(Reader &r, Parameters *params) {
  uint64_t n;
  if (!r.U64(&n) || n != params->size()) return false;
  for (std::span<double> t : params->Tensors()) {
    for (double &v : t) {
      if (!r.F64(&v)) return false;
    }
  }
  return true;
}

absl::Status Corrupt(absl::string_view what) {
  return absl::DataLossError(absl::StrCat("corrupt model archive: ", what));
}

}  // namespace

std::string SerializeModel(const Model &model) {
  Writer w;
  w.Raw(kArchiveMagic, 4);
  w.U32(kArchiveVersion);
  w.U32(static_cast<uint32_t>(model.system().kind()));
  w.Str(model.metadata().config_text);
  w.U64(model.metadata().seed);
  w.U32(static_cast<uint32_t>(model.metadata().epochs));
  w.Str(model.extractor().feature_template().ToString());
  const std::vector<std::string> &labels = model.system().labels();
  w.U32(static_cast<uint32_t>(labels.size()));
  for (const std::string &l : labels) w.Str(l);
  const std::vector<Vocabulary> &vocabs = model.extractor().vocabularies();
  w.U32(static_cast<uint32_t>(vocabs.size()));
  for (const Vocabulary &v : vocabs) {
    w.U32(static_cast<uint32_t>(v.size()));
    for (const std::string &s : v.values()) w.Str(s);
  }
  const std::vector<int> &hidden = model.network().shape().hidden;
  w.U32(static_cast<uint32_t>(hidden.size()));
  for (int h : hidden) w.U32(static_cast<uint32_t>(h));
  w.U32(static_cast<uint32_t>(model.network().activation()));
  WriteParams(w, model.params());
  WriteParams(w, model.averaged());
  const uint32_t crc = Checksum(w.bytes());
  w.U32(crc);
  return std::move(w.bytes());
}

absl::StatusOr<Model> DeserializeModel(const std::string &bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kArchiveMagic, 4) != 0) {
    return absl::InvalidArgumentError("not a GNTP model archive (bad magic)");
  }
  Reader header(absl::string_view(bytes).substr(4));
  uint32_t version;
  if (!header.U32(&version)) return Corrupt("truncated header");
  if (version != kArchiveVersion) {
    return absl::UnimplementedError(absl::StrCat(
        "unsupported model archive version ", version, " (expected ",
        kArchiveVersion, ")"));
  }
  if (bytes.size() < 12) return Corrupt("truncated");
  const absl::string_view body(bytes.data(), bytes.size() - 4);
  Reader tail(absl::string_view(bytes).substr(bytes.size() - 4));
  uint32_t stored;
  tail.U32(&stored);
  if (Checksum(body) != stored) {
    return Corrupt("checksum mismatch (truncated or modified file)");
  }

  Reader r(body.substr(8));
  uint32_t task, epochs, count;
  ModelMetadata meta;
  std::string template_text;
  if (!r.U32(&task) || task > 2) return Corrupt("task kind");
  if (!r.Str(&meta.config_text) || !r.U64(&meta.seed) || !r.U32(&epochs)) {
    return Corrupt("metadata");
  }
  meta.epochs = static_cast<int>(epochs);
  if (!r.Str(&template_text)) return Corrupt("feature template");
  absl::StatusOr<FeatureTemplate> features =
      FeatureTemplate::Parse(template_text);
  if (!features.ok()) return features.status();
  std::vector<std::string> labels;
  if (!r.U32(&count)) return Corrupt("labels");
  labels.resize(count);
  for (std::string &l : labels) {
    if (!r.Str(&l)) return Corrupt("labels");
  }
  std::vector<Vocabulary> vocabs;
  if (!r.U32(&count)) return Corrupt("vocabularies");
  for (uint32_t g = 0; g < count; ++g) {
    uint32_t n;
    if (!r.U32(&n)) return Corrupt("vocabularies");
    std::vector<std::string> values(n);
    for (std::string &v : values) {
      if (!r.Str(&v)) return Corrupt("vocabularies");
    }
    absl::StatusOr<Vocabulary> vocab = Vocabulary::FromValues(values);
    if (!vocab.ok()) return vocab.status();
    vocabs.push_back(std::move(*vocab));
  }
  std::vector<int> hidden;
  if (!r.U32(&count) || count > 2) return Corrupt("hidden layers");
  for (uint32_t l = 0; l < count; ++l) {
    uint32_t h;
    if (!r.U32(&h)) return Corrupt("hidden layers");
    hidden.push_back(static_cast<int>(h));
  }
  uint32_t activation;
  if (!r.U32(&activation) || activation > 1) return Corrupt("activation");

  // Size the parameter blocks from the stored parts.
  NetworkShape shape;
  {
    std::shared_ptr<const TransitionSystem> system =
        MakeTransitionSystem(static_cast<TaskKind>(task), labels);
    absl::StatusOr<FeatureExtractor> fx =
        FeatureExtractor::FromVocabularies(*features, *system, vocabs);
    if (!fx.ok()) return fx.status();
    shape = NetworkShape::For(*fx, hidden, system->num_decisions());
    if (absl::Status s = shape.Validate(); !s.ok()) return s;
  }
  Parameters params = Parameters::Zeros(shape);
  Parameters averaged = Parameters::Zeros(shape);
  if (!ReadParams(r, &params) || !ReadParams(r, &averaged)) {
    return Corrupt("parameters");
  }
  if (!r.done()) return Corrupt("trailing bytes");
  absl::StatusOr<Model> model = Model::Assemble(
      static_cast<TaskKind>(task), std::move(labels), std::move(*features),
      std::move(vocabs), std::move(hidden),
      static_cast<Activation>(activation), std::move(params),
      std::move(averaged));
  if (!model.ok()) return model.status();
  model->metadata() = std::move(meta);
  return model;
}

absl::Status SaveModel(const Model &model, const std::string &path) {
  return WriteFile(path, SerializeModel(model));
}

absl::StatusOr<Model> LoadModel(const std::string &path) {
  absl::StatusOr<std::string> bytes = ReadFile(path);
  if (!bytes.ok()) return bytes.status();
  return DeserializeModel(*bytes);
}

}  // namespace gntp
