// Copyright 2026 the opinion-game authors
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

#include <stdexcept>
#include <string>

namespace opiniongame {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad command line or scenario field. CLI maps this to exit code 2.
class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(what) {}
};

// Malformed input file, unreadable path, or a dataset that fails
// validation. CLI maps this to exit code 3.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(what) {}
};

// Numerical failure (singular system, non-convergent iteration) or an
// instance outside the assumptions a solver needs. CLI maps this to exit
// code 4.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(what) {}
};

}  // namespace opiniongame
