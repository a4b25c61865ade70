// Copyright 2026 The coevo Authors
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

#ifndef COEVO_ERROR_HPP_
#define COEVO_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace coevo {

enum class ErrorKind {
  kInvalidArgument,
  kDimensionMismatch,
  kBoundary,
  kInvalidGame,
  kNotRescaledZeroSum,
  kInfeasible,
  kUnbounded,
  kSolverFailure,
  kNonFinite,
  kParse,
  kIo,
};

// All library failures are reported through this exception; the C API
// translates the kind into a status code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace coevo

#endif  // COEVO_ERROR_HPP_
