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

// Serial reference kernels versus the OpenMP kernels, and serial versus
// parallel corpus decoding.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "benchmark/benchmark.h"
#include "gntp/config.h"
#include "gntp/corpus_io.h"
#include "gntp/decoder.h"
#include "gntp/kernels.h"
#include "gntp/model.h"
#include "gntp/synthetic.h"

namespace {

std::vector<double> RandomVector(size_t n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (double &x : v) x = dist(rng);
  return v;
}

template <bool kParallel>
void BM_Affine(benchmark::State &state) {
  const int rows = static_cast<int>(state.range(0));
  const int cols = static_cast<int>(state.range(1));
  const std::vector<double> w = RandomVector(size_t(rows) * cols, 1);
  const std::vector<double> x = RandomVector(cols, 2);
  const std::vector<double> b = RandomVector(rows, 3);
  std::vector<double> y(rows);
  for (auto _ : state) {
    if constexpr (kParallel) {
      gntp::kernels::Affine(w, rows, cols, x, b, y);
    } else {
      gntp::kernels::reference::Affine(w, rows, cols, x, b, y);
    }
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * int64_t(rows) * cols);
}

template <bool kParallel>
void BM_AccumulateTransposed(benchmark::State &state) {
  const int rows = static_cast<int>(state.range(0));
  const int cols = static_cast<int>(state.range(1));
  const std::vector<double> w = RandomVector(size_t(rows) * cols, 1);
  const std::vector<double> dy = RandomVector(rows, 2);
  std::vector<double> dx(cols);
  for (auto _ : state) {
    if constexpr (kParallel) {
      gntp::kernels::AccumulateTransposed(w, rows, cols, dy, dx);
    } else {
      gntp::kernels::reference::AccumulateTransposed(w, rows, cols, dy, dx);
    }
    benchmark::DoNotOptimize(dx.data());
  }
  state.SetItemsProcessed(state.iterations() * int64_t(rows) * cols);
}

template <bool kParallel>
void BM_AccumulateOuter(benchmark::State &state) {
  const int rows = static_cast<int>(state.range(0));
  const int cols = static_cast<int>(state.range(1));
  const std::vector<double> dy = RandomVector(rows, 2);
  const std::vector<double> x = RandomVector(cols, 3);
  std::vector<double> dw(size_t(rows) * cols);
  for (auto _ : state) {
    if constexpr (kParallel) {
      gntp::kernels::AccumulateOuter(dy, x, dw);
    } else {
      gntp::kernels::reference::AccumulateOuter(dy, x, dw);
    }
    benchmark::DoNotOptimize(dw.data());
  }
  state.SetItemsProcessed(state.iterations() * int64_t(rows) * cols);
}

void KernelShapes(benchmark::internal::Benchmark *b) {
  b->Args({256, 512})->Args({1024, 1024})->Args({1024, 4096});
}

BENCHMARK(BM_Affine<false>)->Apply(KernelShapes);
BENCHMARK(BM_Affine<true>)->Apply(KernelShapes)->UseRealTime();
BENCHMARK(BM_AccumulateTransposed<false>)->Apply(KernelShapes);
BENCHMARK(BM_AccumulateTransposed<true>)->Apply(KernelShapes)->UseRealTime();
BENCHMARK(BM_AccumulateOuter<false>)->Apply(KernelShapes);
BENCHMARK(BM_AccumulateOuter<true>)->Apply(KernelShapes)->UseRealTime();

struct DecodeFixture {
  DecodeFixture() {
    gntp::SynthSpec spec;
    spec.generator = "separable-tagging";
    spec.size = 200;
    corpus = *gntp::GenerateSynthetic(spec);
    inputs = corpus.Inputs();
    model = *gntp::Model::Create(
        gntp::TaskKind::kTagging, gntp::CollectLabels(corpus),
        gntp::DefaultFeatureTemplate(gntp::TaskKind::kTagging), {64},
        gntp::Activation::kRelu, inputs, 1);
  }
  gntp::Corpus corpus;
  std::vector<gntp::Input> inputs;
  std::optional<gntp::Model> model;
};

const DecodeFixture &Fixture() {
  static const DecodeFixture *fixture = new DecodeFixture();
  return *fixture;
}

void BM_DecodeSerial(benchmark::State &state) {
  const DecodeFixture &f = Fixture();
  gntp::DecodeOptions options;
  options.beam_size = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        gntp::DecodeCorpusSerial(*f.model, f.inputs, options));
  }
  state.SetItemsProcessed(state.iterations() * f.inputs.size());
}

void BM_DecodeParallel(benchmark::State &state) {
  const DecodeFixture &f = Fixture();
  gntp::DecodeOptions options;
  options.beam_size = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        gntp::DecodeCorpus(*f.model, f.inputs, options, 0));
  }
  state.SetItemsProcessed(state.iterations() * f.inputs.size());
}

BENCHMARK(BM_DecodeSerial)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DecodeParallel)
    ->Arg(1)
    ->Arg(8)
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
