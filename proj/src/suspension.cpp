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

#include "odo/suspension.hpp"

#include <cmath>
#include <fstream>

#include <Eigen/Dense>
#include <json.hpp>

#include "odo/errors.hpp"

namespace odo {

void SuspensionFrame::validate() const {
  for (double h : heights) {
    if (!(h > 0.0 && h < 2.0)) {
      throw Error("suspension height outside the plausible (0, 2) m band");
    }
  }
}

SuspensionPlane fit_plane(const SuspensionFrame& frame, const VehicleGeometry& geom) {
  Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
  Eigen::Vector3d atb = Eigen::Vector3d::Zero();
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector2d w = geom.wheel_position(static_cast<Wheel>(i));
    const Eigen::Vector3d row{w.x(), w.y(), 1.0};
    ata += row * row.transpose();
    atb += row * frame.heights[i];
    mean += Eigen::Vector3d{w.x(), w.y(), frame.heights[i]};
  }
  // The four wheel positions form a rectangle, so the system is always
  // well conditioned.
  const Eigen::Vector3d abc = ata.ldlt().solve(atb);

  SuspensionPlane plane;
  plane.normal = Eigen::Vector3d{-abc.x(), -abc.y(), 1.0}.normalized();
  plane.point = mean / 4.0;

  double ss = 0.0;
  const double denom = std::sqrt(abc.x() * abc.x() + abc.y() * abc.y() + 1.0);
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector2d w = geom.wheel_position(static_cast<Wheel>(i));
    const double gap = (frame.heights[i] - (abc.x() * w.x() + abc.y() * w.y() + abc.z())) / denom;
    ss += gap * gap;
  }
  plane.residual = std::sqrt(ss / 4.0);
  return plane;
}

BodyMotion body_motion(const SuspensionPlane& live, const SuspensionPlane& reference) {
  BodyMotion motion;
  motion.translation = reference.point - live.point;

  const Eigen::Vector3d axis_raw = live.normal.cross(reference.normal);
  const double sine = axis_raw.norm();
  const double cosine = live.normal.dot(reference.normal);
  if (sine < 1e-12) {
    return motion;  // parallel normals, pure translation
  }
  const Eigen::Vector3d axis = axis_raw / sine;
  Eigen::Matrix3d skew;
  skew << 0.0, -axis.z(), axis.y(),
          axis.z(), 0.0, -axis.x(),
          -axis.y(), axis.x(), 0.0;
  motion.rotation = Eigen::Matrix3d::Identity() + sine * skew + (1.0 - cosine) * skew * skew;
  return motion;
}

SensorPose sensor_pose_vehicle(const SensorExtrinsics& extrinsics, const BodyMotion& motion) {
  SensorPose pose;
  pose.rotation = extrinsics.rotation * motion.rotation;
  pose.position = motion.rotation * (extrinsics.position + motion.translation);
  return pose;
}

Eigen::Matrix3d heading_rotation(double heading_rad) {
  const double c = std::cos(heading_rad);
  const double s = std::sin(heading_rad);
  Eigen::Matrix3d r;
  r << c, -s, 0.0,
       s, c, 0.0,
       0.0, 0.0, 1.0;
  return r;
}

SensorPose sensor_pose_world(const PlanarPose& vehicle_pose, const SensorPose& sensor_in_vehicle) {
  const Eigen::Matrix3d veh_to_world = heading_rotation(vehicle_pose.heading);
  SensorPose pose;
  pose.rotation = sensor_in_vehicle.rotation * veh_to_world.transpose();
  pose.position = veh_to_world * sensor_in_vehicle.position +
                  Eigen::Vector3d{vehicle_pose.position.x(), vehicle_pose.position.y(), 0.0};
  return pose;
}

ReferencePlane make_reference_plane(const SuspensionFrame& frame, const VehicleGeometry& geom) {
  frame.validate();
  ReferencePlane ref;
  ref.heights = frame.heights;
  ref.plane = fit_plane(frame, geom);
  return ref;
}

namespace {

nlohmann::json vec3_json(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }

Eigen::Vector3d vec3_from(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw Error("expected a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

ReferencePlane load_reference_plane(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open reference-plane file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("bad reference-plane JSON in " + path + ": " + e.what());
  }
  ReferencePlane ref;
  const auto& h = j.at("heights_m");
  for (int i = 0; i < 4; ++i) ref.heights[i] = h.at(i).get<double>();
  ref.plane.normal = vec3_from(j.at("normal")).normalized();
  ref.plane.point = vec3_from(j.at("point_m"));
  ref.plane.residual = j.value("residual_m", 0.0);
  return ref;
}

void save_reference_plane(const std::string& path, const ReferencePlane& ref,
                          const VehicleGeometry& geom) {
  nlohmann::json wheels;
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector2d w = geom.wheel_position(static_cast<Wheel>(i));
    wheels.push_back({w.x(), w.y()});
  }
  nlohmann::json j{
      {"wheel_positions_m", wheels},
      {"heights_m", ref.heights},
      {"normal", vec3_json(ref.plane.normal)},
      {"point_m", vec3_json(ref.plane.point)},
      {"residual_m", ref.plane.residual},
  };
  std::ofstream out(path);
  if (!out) throw Error("cannot write reference-plane file: " + path);
  out << j.dump(2) << '\n';
}

SensorExtrinsics load_extrinsics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open extrinsics file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("bad extrinsics JSON in " + path + ": " + e.what());
  }
  SensorExtrinsics ext;
  const auto& r = j.at("rotation");  // row-major 3x3
  if (!r.is_array() || r.size() != 3) throw Error("extrinsics rotation must be 3 rows");
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) ext.rotation(i, k) = r.at(i).at(k).get<double>();
  }
  ext.position = vec3_from(j.at("position_m"));
  const Eigen::Matrix3d gap = ext.rotation * ext.rotation.transpose() - Eigen::Matrix3d::Identity();
  if (gap.norm() > 1e-6) throw Error("extrinsics rotation is not orthonormal");
  return ext;
}

void save_extrinsics(const std::string& path, const SensorExtrinsics& ext) {
  nlohmann::json rows;
  for (int i = 0; i < 3; ++i) {
    rows.push_back({ext.rotation(i, 0), ext.rotation(i, 1), ext.rotation(i, 2)});
  }
  nlohmann::json j{{"rotation", rows}, {"position_m", vec3_json(ext.position)}};
  std::ofstream out(path);
  if (!out) throw Error("cannot write extrinsics file: " + path);
  out << j.dump(2) << '\n';
}

}  // namespace odo
