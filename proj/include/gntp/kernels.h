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

#ifndef GNTP_KERNELS_H_
#define GNTP_KERNELS_H_

#include <span>

namespace gntp {
namespace kernels {

// Dense row-major kernels used by the network. The OpenMP versions split work
// so that every output element is reduced by one thread in a fixed order;
// results are bit-identical to the serial reference for any thread count.

// y = W x + b, with W of shape rows x cols.
void Affine(std::span<const double> w, int rows, int cols,
            std::span<const double> x, std::span<const double> b,
            std::span<double> y);

// dx += W^T dy.
void AccumulateTransposed(std::span<const double> w, int rows, int cols,
                          std::span<const double> dy, std::span<double> dx);

// dW += dy x^T.
void AccumulateOuter(std::span<const double> dy, std::span<const double> x,
                     std::span<double> dw);

// Work below this many multiply-adds stays on the calling thread.
inline constexpr long kParallelThreshold = 1L << 15;

namespace reference {

void Affine(std::span<const double> w, int rows, int cols,
            std::span<const double> x, std::span<const double> b,
            std::span<double> y);
void AccumulateTransposed(std::span<const double> w, int rows, int cols,
                          std::span<const double> dy, std::span<double> dx);
void AccumulateOuter(std::span<const double> dy, std::span<const double> x,
                     std::span<double> dw);

}  // namespace reference
}  // namespace kernels
}  // namespace gntp

#endif  // GNTP_KERNELS_H_
