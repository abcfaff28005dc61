// Copyright 2026 The recipebo Authors. All Rights Reserved.
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
// =============================================================================

#ifndef RECIPEBO_ERROR_HPP
#define RECIPEBO_ERROR_HPP

#include <stdexcept>
#include <string>

namespace recipebo {

enum class ErrorKind {
  kValidation,  // malformed input, violated precondition
  kNumerical,   // factorization failure, non-finite objective
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error ValidationError(const std::string& what) { return Error(ErrorKind::kValidation, what); }
inline Error NumericalError(const std::string& what) { return Error(ErrorKind::kNumerical, what); }
inline Error IoError(const std::string& what) { return Error(ErrorKind::kIo, what); }

}  // namespace recipebo

#endif  // RECIPEBO_ERROR_HPP
