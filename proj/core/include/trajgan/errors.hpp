// Copyright 2026 The trajgan Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace trajgan {

// Bad file contents: unparseable lines, violated table invariants.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, long line_number = -1)
      : std::runtime_error(line_number >= 0
                               ? what + " (line " + std::to_string(line_number) + ")"
                               : what),
        line(line_number) {}
  long line;
};

// Structurally valid input that violates a domain contract.
class ValidationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Missing files, missing datasets, unusable checkpoints.
class DataError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite values mid-computation (training instability and the like).
class NumericalError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace trajgan
