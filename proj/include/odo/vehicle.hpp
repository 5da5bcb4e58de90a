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
#include <string>

#include <Eigen/Core>

#include "odo/channels.hpp"

namespace odo {

/// Static vehicle geometry. The vehicle frame has its origin at the rear-axle
/// midpoint (the datum), X forward, Y toward left-hand turning, Z up.
struct VehicleGeometry {
  double wheelbase = 2.7;            // l, metres
  double track_width = 1.54;         // w, metres
  double wheel_circumference = 1.9;  // metres per revolution
  int ticks_per_rev = 96;
  bool rear_steering = false;

  /// Wheel ground-contact position in the vehicle frame.
  Eigen::Vector2d wheel_position(Wheel w) const {
    const double half = track_width / 2.0;
    switch (w) {
      case kRearLeft:
        return {0.0, half};
      case kRearRight:
        return {0.0, -half};
      case kFrontLeft:
        return {wheelbase, half};
      default:
        return {wheelbase, -half};
    }
  }

  double tick_distance(double ticks) const {
    return ticks * wheel_circumference / ticks_per_rev;
  }

  void validate() const;
};

VehicleGeometry load_geometry(const std::string& path);
void save_geometry(const std::string& path, const VehicleGeometry& geom);

}  // namespace odo
