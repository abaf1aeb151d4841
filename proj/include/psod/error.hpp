/*
 * Copyright 2026 The psod-eval Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PSOD_ERROR_HPP
#define PSOD_ERROR_HPP

#include <stdexcept>
#include <string>

namespace psod {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented invariant (bad manifest, bad config, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Two masks that must share a shape do not.
class DimensionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// The ground truth has no foreground, so precision/recall are undefined.
class DegenerateGroundTruth : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// File system or codec failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace psod

#endif  // PSOD_ERROR_HPP
