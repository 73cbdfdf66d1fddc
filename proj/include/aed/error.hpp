// Copyright 2026 The aedpipe Authors
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

namespace aed {

/// Base error for all contract violations (bad inputs, broken files, ...).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when an input carries no usable signal (e.g. all-constant maps
/// whose patch covariance is identically zero).
class DegenerateInputError : public Error {
 public:
  explicit DegenerateInputError(const std::string& msg) : Error(msg) {}
};

}  // namespace aed
