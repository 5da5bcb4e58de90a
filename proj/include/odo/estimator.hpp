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

#include <optional>
#include <string>
#include <vector>

#include "odo/baselines.hpp"
#include "odo/planar.hpp"
#include "odo/signal_log.hpp"
#include "odo/suspension.hpp"
#include "odo/trajectory.hpp"
#include "odo/vehicle.hpp"

namespace odo {

enum class OdometryModel { Proposed, TwoTrack, OneTrack, YawRate };

std::string model_name(OdometryModel model);
std::optional<OdometryModel> model_from_name(const std::string& name);

struct EstimatorConfig {
  OdometryModel model = OdometryModel::Proposed;
  std::int64_t window_us = 200000;       // quadratic-fit history
  std::int64_t frame_period_us = 33000;  // camera-frame-like cadence
  IntegratorConfig integrator;
  bool calibrate_yaw = true;  // standstill offset calibration when possible
  StandstillConfig standstill;
  std::vector<std::int64_t> frame_times_us;  // explicit schedule override
};

struct TimedSensorPose {
  std::int64_t t_us = 0;
  SensorPose pose;
};

struct EstimateResult {
  Trajectory trajectory;
  std::vector<TimedSensorPose> sensor_poses;  // filled when suspension inputs given
  std::optional<YawOffset> yaw_offset;        // applied offset, when calibrated
};

/// Runs the selected odometry model over the log at the frame cadence. The
/// first frame is the world origin. With extrinsics and a reference plane the
/// per-frame world sensor pose is emitted as well. Throws MissingChannel when
/// the log lacks a channel the model needs.
EstimateResult estimate(const SignalLog& log, const VehicleGeometry& geom,
                        const EstimatorConfig& config,
                        const std::optional<SensorExtrinsics>& extrinsics = std::nullopt,
                        const std::optional<ReferencePlane>& reference_plane = std::nullopt);

/// Channels the model cannot run without.
std::vector<Channel> required_channels(OdometryModel model);

}  // namespace odo
