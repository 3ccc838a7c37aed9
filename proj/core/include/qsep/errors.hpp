// Copyright 2026 The qsep Authors
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

#ifndef QSEP_ERRORS_HPP
#define QSEP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qsep {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition (norms, positivity, shapes).
class ValidationError : public Error {
   public:
    using Error::Error;
};

/// Index outside the admissible range (block index, rank, ...).
class RangeError : public ValidationError {
   public:
    using ValidationError::ValidationError;
};

/// Construction not defined for the requested parity of the local dimension.
class UnsupportedParityError : public ValidationError {
   public:
    using ValidationError::ValidationError;
};

/// A computation would exceed the configured Hilbert-space dimension cap.
class ResourceError : public Error {
   public:
    using Error::Error;
};

}  // namespace qsep

#endif
