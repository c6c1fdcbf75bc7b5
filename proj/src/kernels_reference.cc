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

namespace gntp {
namespace kernels {
namespace reference {

void Affine(std::span<const double> w, int rows, int cols,
            std::span<const double> x, std::span<const double> b,
            std::span<double> y) {
  for (int i = 0; i < rows; ++i) {
    double acc = b[i];
    for (int j = 0; j < cols; ++j) acc += w[i * cols + j] * x[j];
    y[i] = acc;
  }
}

void AccumulateTransposed(std::span<const double> w, int rows, int cols,
                          std::span<const double> dy, std::span<double> dx) {
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) dx[j] += w[i * cols + j] * dy[i];
  }
}

void AccumulateOuter(std::span<const double> dy, std::span<const double> x,
                     std::span<double> dw) {
  const int cols = static_cast<int>(x.size());
  for (size_t i = 0; i < dy.size(); ++i) {
    if (dy[i] == 0.0) continue;
    for (int j = 0; j < cols; ++j) dw[i * cols + j] += dy[i] * x[j];
  }
}

}  // namespace reference
}  // namespace kernels
}  // namespace gntp
