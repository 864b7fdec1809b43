// Copyright 2026 The rbmscope Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RBMSCOPE_ERRORS_HPP
#define RBMSCOPE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rbmscope {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Configuration / argument errors.
struct InvalidArgument : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };

// Data errors.
struct BadMagic : Error { using Error::Error; };
struct Truncated : Error { using Error::Error; };
struct EmptyDataset : Error { using Error::Error; };
struct EmptyBatch : Error { using Error::Error; };
struct NoChains : Error { using Error::Error; };
struct MissingPersistentStore : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct BinMismatch : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };

// Numerical errors.
struct NumericalFailure : Error { using Error::Error; };
struct DegenerateMode : Error { using Error::Error; };
struct DegenerateWeights : Error { using Error::Error; };
struct NotOrthonormal : Error { using Error::Error; };

}  // namespace rbmscope

#endif  // RBMSCOPE_ERRORS_HPP
