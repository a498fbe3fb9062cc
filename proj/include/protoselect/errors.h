// Copyright 2026 The Protoselect Authors.
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

#ifndef PROTOSELECT_ERRORS_H_
#define PROTOSELECT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace protoselect {

enum class ErrorKind {
  kInput,       // malformed or inconsistent caller input
  kNumeric,     // non-finite intermediate values
  kDegenerate,  // data admits no meaningful answer (e.g. all rows equal)
  kSolver,      // NNQP did not converge
  kGuard,       // instance too large for an exhaustive routine
};

const char* ErrorKindName(ErrorKind kind);

// Base for every exception the library throws. The C API maps `kind()` onto
// its status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void ThrowInput(const std::string& message) {
  throw Error(ErrorKind::kInput, message);
}

[[noreturn]] inline void ThrowGuard(const std::string& message) {
  throw Error(ErrorKind::kGuard, message);
}

}  // namespace protoselect

#endif  // PROTOSELECT_ERRORS_H_
