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
#include <limits>
#include <optional>

#include <Eigen/Core>

#include "odo/quadfit.hpp"
#include "odo/trajectory.hpp"
#include "odo/vehicle.hpp"

namespace odo {

/// Below this per-step heading change the motion is treated as straight; the
/// chord and the straight segment differ by well under 1e-9 m there.
constexpr double kStraightThreshold = 1e-7;  // rad

/// Rigid planar motion over one interval, expressed in the vehicle frame at
/// the interval start.
struct MotionDelta {
  double dtheta = 0.0;                                       // rad
  Eigen::Vector2d dp_vehicle{0.0, 0.0};                      // m
  double radius = std::numeric_limits<double>::infinity();   // signed datum radius
  std::optional<Eigen::Vector2d> center;                     // c^v; nullopt when straight
};

/// Signed datum radius plus a low-confidence flag set when noise pushed a
/// front-wheel radicand negative and it was clamped to zero.
struct DatumRadius {
  double radius = 0.0;
  bool low_confidence = false;
};

/// Trapezoidal heading change from two yaw-rate samples:
/// ((rate1 + rate2) / 2) * (t2 - t1). Throws InvalidInterval when t2 <= t1.
double heading_delta(double rate1, double rate2, std::int64_t t1_us, std::int64_t t2_us);

/// The division form (rate1 + rate2) / (2 (t2 - t1)), selectable for
/// comparison runs only; it is not dimensionally a heading change.
double heading_delta_division_form(double rate1, double rate2, std::int64_t t1_us,
                                   std::int64_t t2_us);

/// Per-wheel turning radii r_i = d_i / dtheta, signed. Returns nullopt as the
/// straight-line signal when |dtheta| is below the threshold.
std::optional<std::array<double, 4>> wheel_radii(const std::array<double, 4>& distances_m,
                                                 double dtheta,
                                                 double threshold = kStraightThreshold);

/// Datum radius for fixed rear steering: the average of the four per-wheel
/// estimates, computed on magnitudes with the sign restored afterwards. The
/// +-w/2 corrections of the rear and front pairs cancel in the average.
DatumRadius datum_radius_fixed(const std::array<double, 4>& radii, const VehicleGeometry& geom);

/// Least-squares turning centre for adaptive rear steering. The algebraic
/// circle residual |w_i - c|^2 - r_i^2 gives linear stationary conditions;
/// the centred 2x2 system is solved in closed form. Throws NoUniqueCenter.
Eigen::Vector2d datum_center_rear_steer(const std::array<double, 4>& radii,
                                        const VehicleGeometry& geom);

/// Chord displacement (r sin dtheta, r (1 - cos dtheta)) in vehicle
/// coordinates, falling back to (d_mean, 0) below the straight threshold.
Eigen::Vector2d motion_vector(double radius, double dtheta, double d_mean,
                              double threshold = kStraightThreshold);

/// Displacement of the datum rotating by dtheta about an arbitrary centre:
/// (I - R(dtheta)) c.
Eigen::Vector2d motion_vector_about(const Eigen::Vector2d& center, double dtheta);

/// Full per-interval step from signed wheel distances and heading change.
MotionDelta motion_from_wheels(const std::array<double, 4>& distances_m, double dtheta,
                               const VehicleGeometry& geom,
                               double threshold = kStraightThreshold);

/// World-pose update: position rotated by the current heading then
/// translated, heading incremented and renormalized.
PlanarPose accumulate(const PlanarPose& pose, const MotionDelta& delta, std::int64_t t_us);

/// Fitted models for one frame: yaw rate plus the four signed wheel speeds.
struct FrameModels {
  QuadraticModel yaw_rate;
  std::array<QuadraticModel, 4> wheel_speed;
};

struct IntegratorConfig {
  std::int64_t slice_us = 500;  // fine integration step
  double straight_threshold = kStraightThreshold;
  bool division_form_heading = false;  // use heading_delta_division_form per slice
};

/// Aggregate motion over one frame interval.
struct FrameDelta {
  double dtheta = 0.0;
  Eigen::Vector2d dp_world{0.0, 0.0};    // displacement given the start heading
  Eigen::Vector2d dp_vehicle{0.0, 0.0};  // same, in the frame-start vehicle frame
};

/// Integrates the fitted signals over [t_prev, t_now] in fine time slices.
/// Per slice the endpoint evaluations are averaged (trapezoid), wheel
/// distances become radii and a chord displacement, and heading and world
/// position accumulate. theta_start is the world heading at t_prev.
FrameDelta integrate_frame(const FrameModels& models, std::int64_t t_prev_us,
                           std::int64_t t_now_us, const VehicleGeometry& geom,
                           const IntegratorConfig& config = {}, double theta_start = 0.0);

}  // namespace odo
