// Copyright 2026 The pointershift Authors
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

namespace pointershift {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Operand dimensions are invalid or do not match.
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// A state does not fit in the requested Fock truncation.
class TruncationError : public Error {
  public:
    using Error::Error;
};

/// Pre/post-selection is (near) orthogonal, so the requested value diverges.
class SelectionError : public Error {
  public:
    using Error::Error;
};

/// Input violates a documented precondition (normalization, range, finiteness).
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// Scenario or command-line configuration could not be parsed or validated.
class ConfigError : public Error {
  public:
    using Error::Error;
};

}  // namespace pointershift
