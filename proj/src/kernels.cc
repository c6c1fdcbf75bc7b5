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

#include "gntp/kernels.h"

#include <algorithm>

namespace gntp {
namespace kernels {

void Affine(std::span<const double> w, int rows, int cols,
            std::span<const double> x, std::span<const double> b,
            std::span<double> y) {
  const double *wp = w.data();
  const double *xp = x.data();
  const bool parallel = static_cast<long>(rows) * cols >= kParallelThreshold;
#pragma omp parallel for schedule(static) if (parallel)
  for (int i = 0; i < rows; ++i) {
    const double *row = wp + static_cast<long>(i) * cols;
    double acc = b[i];
    for (int j = 0; j < cols; ++j) acc += row[j] * xp[j];
    y[i] = acc;
  }
}

void AccumulateTransposed(std::span<const double> w, int rows, int cols,
                          std::span<const double> dy, std::span<double> dx) {
  constexpr int kBlock = 64;
  const int blocks = (cols + kBlock - 1) / kBlock;
  const double *wp = w.data();
  const bool parallel = static_cast<long>(rows) * cols >= kParallelThreshold;
#pragma omp parallel for schedule(static) if (parallel)
  for (int blk = 0; blk < blocks; ++blk) {
    const int lo = blk * kBlock;
    const int hi = std::min(cols, lo + kBlock);
    double acc[kBlock];
    for (int j = lo; j < hi; ++j) acc[j - lo] = dx[j];
    for (int i = 0; i < rows; ++i) {
      const double g = dy[i];
      const double *row = wp + static_cast<long>(i) * cols;
      for (int j = lo; j < hi; ++j) acc[j - lo] += row[j] * g;
    }
    for (int j = lo; j < hi; ++j) dx[j] = acc[j - lo];
  }
}

void AccumulateOuter(std::span<const double> dy, std::span<const double> x,
                     std::span<double> dw) {
  const int rows = static_cast<int>(dy.size());
  const int cols = static_cast<int>(x.size());
  double *dwp = dw.data();
  const bool parallel = static_cast<long>(rows) * cols >= kParallelThreshold;
#pragma omp parallel for schedule(static) if (parallel)
  for (int i = 0; i < rows; ++i) {
    const double g = dy[i];
    if (g == 0.0) continue;
    double *row = dwp + static_cast<long>(i) * cols;
    for (int j = 0; j < cols; ++j) row[j] += g * x[j];
  }
}

}  // namespace kernels
}  // namespace gntp
