// base/error.h

// Copyright 2026  ctclab authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef CTCLAB_BASE_ERROR_H_
#define CTCLAB_BASE_ERROR_H_

#include <stdexcept>
#include <string>

namespace ctclab {

// Error categories surfaced by the CLI as distinct exit messages.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or incompatible shapes/objects.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Caller passed a value outside an operation's input domain.
class InputDomainError : public Error {
 public:
  using Error::Error;
};

// File and serialization problems (missing inputs, bad magic, ...).
class IoError : public Error {
 public:
  using Error::Error;
};

// Broken internal invariant; indicates a bug, not a usage error.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace ctclab

#define CTCLAB_CHECK(cond, msg)                                      \
  do {                                                               \
    if (!(cond)) {                                                   \
      throw ::ctclab::InternalError(std::string("check failed: ") + \
                                    (msg));                          \
    }                                                                \
  } while (0)

#endif  // CTCLAB_BASE_ERROR_H_
