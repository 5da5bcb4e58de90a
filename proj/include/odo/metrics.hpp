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

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "odo/trajectory.hpp"

namespace odo {

/// Trajectory error summary. Angles are kept in radians internally and
/// reported in degrees.
struct MetricsReport {
  std::string model;
  std::string trajectory;
  double length_m = 0.0;     // reference arc length
  double e_pos_x = 0.0;      // m, unsigned
  double e_pos_y = 0.0;      // m, unsigned
  double e_alig = 0.0;       // rad, in [0, pi]
  double e_loc = 0.0;
  double e_loc_prime = 0.0;  // e_loc / n
  int n = 0;                 // estimated samples
  int m = 0;                 // reference samples
};

/// Final-position error rotated into the reference heading frame,
/// component-wise absolute value.
Eigen::Vector2d e_pos(const Trajectory& estimated, const Trajectory& reference);

/// Absolute final-heading difference wrapped to [0, pi].
double e_alig(const Trajectory& estimated, const Trajectory& reference);

/// Shortest distance from the point to the polyline (segment interiors and
/// endpoints), requiring at least 2 polyline points.
double point_to_polyline(const Eigen::Vector2d& point, const Trajectory& polyline);

/// Cumulative spread: sum over estimated poses of the distance to the
/// reference polyline, divided by the reference arc length. Throws
/// DegenerateReference when the reference has no length.
double e_loc(const Trajectory& estimated, const Trajectory& reference);

/// The per-sample-pair denominator sum ||p_R_j - p_j|| as printed in some
/// formulations; defined only when both trajectories have the same size.
double e_loc_paired_denominator(const Trajectory& estimated, const Trajectory& reference);

/// Finite-difference world velocities between consecutive poses. Throws
/// InvalidTimestamps on non-increasing timestamps.
std::vector<Eigen::Vector2d> velocity_series(const Trajectory& traj);

struct EvaluateOptions {
  bool paired_denominator = false;  // use e_loc_paired_denominator for e_loc
};

/// Runs the full metric suite on a trajectory pair.
MetricsReport evaluate(const Trajectory& estimated, const Trajectory& reference,
                       const std::string& model, const std::string& trajectory_name,
                       const EvaluateOptions& options = {});

/// Report CSV: `model,trajectory,length_m,e_pos_x,e_pos_y,e_alig_deg,e_loc,e_loc_prime`.
void write_report_header(std::ostream& out);
void write_report_row(std::ostream& out, const MetricsReport& report);

}  // namespace odo
