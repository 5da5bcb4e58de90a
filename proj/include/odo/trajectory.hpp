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
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

namespace odo {

/// World-frame planar pose at a timestamp. Heading is about Z, normalized to
/// (-pi, pi].
struct PlanarPose {
  Eigen::Vector2d position{0.0, 0.0};  // metres
  double heading = 0.0;                // rad
  std::int64_t t_us = 0;
};

/// Wraps an angle into (-pi, pi].
double normalize_angle(double rad);

using Trajectory = std::vector<PlanarPose>;

/// Sum of segment lengths.
double arc_length(const Trajectory& traj);

/// CSV format `timestamp_us,x_m,y_m,heading_rad`, one pose per line.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
Trajectory read_trajectory_csv(std::istream& in);

/// GeoJSON LineString of the XY path, for plotting.
void write_trajectory_geojson(std::ostream& out, const Trajectory& traj);

}  // namespace odo
