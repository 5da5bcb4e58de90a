// Copyright 2026 The odo25d Authors
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

namespace odo {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based line number when known.
struct ParseError : Error {
  ParseError(const std::string& what, int line_number)
      : Error("line " + std::to_string(line_number) + ": " + what), line(line_number) {}
  int line;
};

/// Two samples on the same channel and timestamp disagree on the value.
struct ConflictingSamples : Error {
  using Error::Error;
};

/// Fewer samples than an operation needs (quadratic fit needs at least 3).
struct InsufficientSamples : Error {
  using Error::Error;
};

/// No standstill interval long enough for yaw-rate offset calibration.
struct NoStandstill : Error {
  using Error::Error;
};

/// Normal matrix of the quadratic fit is singular.
struct DegenerateFit : Error {
  using Error::Error;
};

/// Time interval with t2 <= t1.
struct InvalidInterval : Error {
  using Error::Error;
};

/// Rear-steer circle-centre system has no unique solution.
struct NoUniqueCenter : Error {
  using Error::Error;
};

/// Wheel ticks changed but no direction signal is available.
struct DirectionUnknown : Error {
  using Error::Error;
};

/// Trajectory timestamps are not strictly increasing.
struct InvalidTimestamps : Error {
  using Error::Error;
};

/// Reference trajectory has zero arc length.
struct DegenerateReference : Error {
  using Error::Error;
};

/// A channel required by the selected model is missing from the log.
struct MissingChannel : Error {
  using Error::Error;
};

}  // namespace odo
