// verdict.hpp
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <string>

#include "adsa/error.hpp"

namespace adsa {

/// Outcome of a bounded search. Unknown means a bound was hit before the
/// search could either accept or exhaust the reachable configurations.
enum class Verdict { Accept, Reject, Unknown };

inline std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Accept:
      return "accept";
    case Verdict::Reject:
      return "reject";
    case Verdict::Unknown:
      return "unknown";
  }
  return "unknown";
}

/// Yes/no spelling used for decision problems.
inline std::string answer_name(Verdict v) {
  switch (v) {
    case Verdict::Accept:
      return "yes";
    case Verdict::Reject:
      return "no";
    case Verdict::Unknown:
      return "unknown";
  }
  return "unknown";
}

/// Process exit code for a verdict: 0 accept, 1 reject, 2 unknown.
inline int exit_code(Verdict v) { return v == Verdict::Accept ? 0 : v == Verdict::Reject ? 1 : 2; }

struct SearchBounds {
  std::size_t max_configs = 200'000;
  std::size_t max_blocks = 64;
  std::size_t max_tape = 16;

  void validate() const {
    if (max_configs == 0) throw InvalidArgument("max-configs must be positive");
  }
};

}  // namespace adsa
