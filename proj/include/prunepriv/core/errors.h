//
// Copyright 2026 The prunepriv Authors
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
//

#ifndef PRUNEPRIV_CORE_ERRORS_H_
#define PRUNEPRIV_CORE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace prunepriv {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument is outside its documented domain (negative scale, NaN, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Operand dimensions do not compose.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// An index (iteration, schedule step) is outside the valid range.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Two inputs that must agree with each other do not.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// Malformed file contents. The message names the byte offset when known.
class FormatError : public Error {
 public:
  using Error::Error;
};

// The density-ratio certificate degenerates (some (removed * x)_i == 0).
class CertificateUndefinedError : public Error {
 public:
  using Error::Error;
};

// Bad command line or configuration; maps to exit status 2 in the CLI.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace prunepriv

#endif  // PRUNEPRIV_CORE_ERRORS_H_
