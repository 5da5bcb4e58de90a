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

#include <array>
#include <cstdint>
#include <vector>

#include "odo/planar.hpp"
#include "odo/signal_log.hpp"
#include "odo/vehicle.hpp"

namespace odo {

/// Tick-counter change of one wheel over an interval.
struct TickDelta {
  double ticks = 0.0;  // non-negative count change
  int direction = 0;   // {-1, 0, +1}
  std::int64_t t1_us = 0;
  std::int64_t t2_us = 0;

  /// Signed distance. Throws DirectionUnknown when ticks changed but the
  /// direction signal is absent (0).
  double distance(const VehicleGeometry& geom) const;
};

/// Two-track odometry: heading from the rear left/right distance difference,
/// translation by the same chord geometry as the proposed model.
MotionDelta two_track_step(const TickDelta& rear_left, const TickDelta& rear_right,
                           const VehicleGeometry& geom);

/// One-track (bicycle) odometry about the rear axle: r = l / tan(phi), with
/// the mean of the two rear wheel speeds over the interval.
MotionDelta one_track_step(double front_wheel_angle, const std::array<double, 2>& rear_speeds,
                           std::int64_t t1_us, std::int64_t t2_us, const VehicleGeometry& geom);

/// Plain yaw-rate odometry: trapezoid over the raw yaw samples, rear-pair
/// mean speed times the interval, no quadratic fit and no fine slicing.
MotionDelta yaw_rate_step(const std::vector<TimedValue>& yaw_samples,
                          const std::vector<TimedValue>& rear_left_speeds,
                          const std::vector<TimedValue>& rear_right_speeds,
                          std::int64_t t1_us, std::int64_t t2_us);

/// Integral over [t1, t2] of the piecewise-linear interpolant through the
/// samples, held constant beyond the first and last sample.
double trapezoid_integral(const std::vector<TimedValue>& samples, std::int64_t t1_us,
                          std::int64_t t2_us);

}  // namespace odo
