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
#include <string>

#include <Eigen/Core>

#include "odo/trajectory.hpp"
#include "odo/vehicle.hpp"

namespace odo {

/// Four suspension heights (metres above ground), wheel order rl, rr, fl, fr.
struct SuspensionFrame {
  std::array<double, 4> heights{};
  std::int64_t t_us = 0;

  void validate() const;  // heights must lie in (0, 2) m
};

/// Least-squares plane through the four suspension points.
struct SuspensionPlane {
  Eigen::Vector3d normal{0.0, 0.0, 1.0};  // unit, z > 0
  Eigen::Vector3d point{0.0, 0.0, 0.0};   // mean of the four points
  double residual = 0.0;                  // RMS point-to-plane distance
};

/// Rigid body motion of the suspension plane relative to the settled
/// reference: R_s maps the live normal onto the reference normal,
/// t_s = point_ref - point_live.
struct BodyMotion {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation{0.0, 0.0, 0.0};
};

/// Sensor mounting calibration in the settled state.
struct SensorExtrinsics {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();  // vehicle -> sensor
  Eigen::Vector3d position{0.0, 0.0, 0.0};                 // sensor origin, vehicle frame
};

/// Rotation and position of a sensor in some frame.
struct SensorPose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d position{0.0, 0.0, 0.0};
};

/// Fits z = a x + b y + c through the four suspension points placed at the
/// wheel XY positions; normal = normalize(-a, -b, 1).
SuspensionPlane fit_plane(const SuspensionFrame& frame, const VehicleGeometry& geom);

/// Axis-angle rotation between the two plane normals (identity when they are
/// parallel) plus the reference-point translation.
BodyMotion body_motion(const SuspensionPlane& live, const SuspensionPlane& reference);

/// Sensor pose in the vehicle frame under the given suspension motion:
/// rotation = R_e R_s, position = R_s (c_e + t_s).
SensorPose sensor_pose_vehicle(const SensorExtrinsics& extrinsics, const BodyMotion& motion);

/// Vehicle-frame sensor pose raised into the world frame through the planar
/// vehicle pose (rotation about Z by the heading).
SensorPose sensor_pose_world(const PlanarPose& vehicle_pose, const SensorPose& sensor_in_vehicle);

/// Rotation matrix for the planar heading (vehicle -> world, about Z).
Eigen::Matrix3d heading_rotation(double heading_rad);

/// Reference-plane calibration artifact (JSON file).
struct ReferencePlane {
  std::array<double, 4> heights{};
  SuspensionPlane plane;
};

ReferencePlane make_reference_plane(const SuspensionFrame& frame, const VehicleGeometry& geom);
ReferencePlane load_reference_plane(const std::string& path);
void save_reference_plane(const std::string& path, const ReferencePlane& ref,
                          const VehicleGeometry& geom);

SensorExtrinsics load_extrinsics(const std::string& path);
void save_extrinsics(const std::string& path, const SensorExtrinsics& ext);

}  // namespace odo
