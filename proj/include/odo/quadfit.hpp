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

#include <cstdint>

#include "odo/signal_log.hpp"

namespace odo {

/// s(t) = c3 tau^2 + c2 tau + c1 with tau = (t - t_ref) in seconds.
/// Coefficients are in signal units, units/s and units/s^2.
struct QuadraticModel {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  std::int64_t t_ref_us = 0;
  std::int64_t t_frame_us = 0;  // end of the fitted window
};

/// Ordinary least-squares fit of a quadratic to the window samples. Builds the
/// 3x3 normal matrix from sums of powers of (t - t_ref) and solves it in
/// closed form. Throws InsufficientSamples (n < 3) and DegenerateFit when the
/// determinant of the seconds-scaled normal matrix falls below 1e-12.
QuadraticModel fit(const SignalWindow& window);

double evaluate(const QuadraticModel& model, std::int64_t t_us);

/// Evaluation at a seconds offset from t_ref; used by the fine integrator.
double evaluate_at_offset(const QuadraticModel& model, double tau_s);

/// Extrapolation is permitted but flagged once t leaves the window end by
/// more than 100 ms.
bool extrapolation_flagged(const QuadraticModel& model, std::int64_t t_us);

}  // namespace odo
