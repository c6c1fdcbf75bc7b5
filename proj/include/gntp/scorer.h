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

#ifndef GNTP_SCORER_H_
#define GNTP_SCORER_H_

#include <span>

#include "gntp/transition_system.h"

namespace gntp {

// Raw decision scores rho(s, d) for one fixed input. Implementations must
// fill every entry of `scores` (one per decision in the vocabulary); entries
// of disallowed decisions are ignored by callers.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual void Score(const State &state, std::span<double> scores) const = 0;
};

}  // namespace gntp

#endif  // GNTP_SCORER_H_
