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

#include "odo/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "odo/errors.hpp"
#include "odo/quadfit.hpp"

namespace odo {

std::string model_name(OdometryModel model) {
  switch (model) {
    case OdometryModel::Proposed:
      return "proposed";
    case OdometryModel::TwoTrack:
      return "two_track";
    case OdometryModel::OneTrack:
      return "one_track";
    default:
      return "yaw_rate";
  }
}

std::optional<OdometryModel> model_from_name(const std::string& name) {
  if (name == "proposed") return OdometryModel::Proposed;
  if (name == "two_track") return OdometryModel::TwoTrack;
  if (name == "one_track") return OdometryModel::OneTrack;
  if (name == "yaw_rate") return OdometryModel::YawRate;
  return std::nullopt;
}

std::vector<Channel> required_channels(OdometryModel model) {
  switch (model) {
    case OdometryModel::Proposed:
      return {Channel::YawRate, Channel::WheelSpeedRL, Channel::WheelSpeedRR,
              Channel::WheelSpeedFL, Channel::WheelSpeedFR};
    case OdometryModel::TwoTrack:
      return {Channel::WheelTickRL, Channel::WheelTickRR};
    case OdometryModel::OneTrack:
      return {Channel::FrontWheelAngle, Channel::WheelSpeedRL, Channel::WheelSpeedRR};
    default:
      return {Channel::YawRate, Channel::WheelSpeedRL, Channel::WheelSpeedRR};
  }
}

namespace {

/// Direction sign for a wheel at time t: the latest direction sample at or
/// before t, backfilled from the first report for earlier times, +1 when the
/// log carries no direction channel at all.
double direction_at(const SignalLog& log, Wheel wheel, std::int64_t t_us) {
  const Channel dir = wheel_dir_channel(wheel);
  if (!log.has(dir)) return 1.0;
  const auto v = value_at_or_before(log, dir, t_us);
  return v ? v->value : log.samples(dir).front().value;
}

/// Window of one wheel-speed channel with the direction sign applied per
/// sample.
SignalWindow signed_speed_window(const SignalStore& store, Wheel wheel, std::int64_t t_frame_us,
                                 std::int64_t window_us) {
  SignalWindow w = store.window(wheel_speed_channel(wheel), t_frame_us, window_us);
  for (auto& s : w.samples) s.value *= direction_at(store.log(), wheel, s.t_us);
  return w;
}

std::vector<TimedValue> signed_speeds_in_range(const SignalStore& store, Wheel wheel,
                                               std::int64_t t1_us, std::int64_t t2_us) {
  auto samples = store.samples_in_range(wheel_speed_channel(wheel), t1_us, t2_us);
  for (auto& s : samples) s.value *= direction_at(store.log(), wheel, s.t_us);
  if (samples.empty()) {
    // Hold the latest earlier value so sparse channels still cover the frame.
    if (auto held = store.value_at_or_before(wheel_speed_channel(wheel), t1_us)) {
      samples.push_back({t1_us, held->value * direction_at(store.log(), wheel, t1_us)});
    }
  }
  return samples;
}

std::vector<std::int64_t> frame_schedule(const SignalLog& log, const EstimatorConfig& cfg,
                                         const std::vector<Channel>& required) {
  if (!cfg.frame_times_us.empty()) return cfg.frame_times_us;
  std::int64_t start = 0;
  std::int64_t end = 0;
  bool first = true;
  for (Channel c : required) {
    const auto& ch = log.samples(c);
    if (first) {
      start = ch.front().t_us;
      end = ch.back().t_us;
      first = false;
    } else {
      start = std::max(start, ch.front().t_us);
      end = std::min(end, ch.back().t_us);
    }
  }
  std::vector<std::int64_t> frames;
  for (std::int64_t t = start + cfg.window_us; t <= end; t += cfg.frame_period_us) {
    frames.push_back(t);
  }
  if (frames.size() < 2) {
    throw Error("log too short for the frame schedule (needs window plus one frame period)");
  }
  return frames;
}

FrameDelta proposed_frame(const SignalStore& store, const VehicleGeometry& geom,
                          const EstimatorConfig& cfg, std::int64_t t_prev, std::int64_t t_now,
                          double heading) {
  FrameModels models;
  models.yaw_rate = fit(store.window(Channel::YawRate, t_now, cfg.window_us));
  for (Wheel w : kWheels) {
    models.wheel_speed[w] = fit(signed_speed_window(store, w, t_now, cfg.window_us));
  }
  return integrate_frame(models, t_prev, t_now, geom, cfg.integrator, heading);
}

MotionDelta two_track_frame(const SignalStore& store, const VehicleGeometry& geom,
                            std::int64_t t_prev, std::int64_t t_now) {
  auto tick_delta = [&](Wheel w) {
    const Channel ch = wheel_tick_channel(w);
    const auto a = store.value_at_or_before(ch, t_prev);
    const auto b = store.value_at_or_before(ch, t_now);
    TickDelta d;
    d.t1_us = t_prev;
    d.t2_us = t_now;
    d.ticks = (a && b) ? b->value - a->value : 0.0;
    const Channel dir_ch = wheel_dir_channel(w);
    if (store.log().has(dir_ch)) {
      const auto dir = store.value_at_or_before(dir_ch, t_now);
      d.direction = dir ? static_cast<int>(dir->value) : 0;
    }
    return d;
  };
  return two_track_step(tick_delta(kRearLeft), tick_delta(kRearRight), geom);
}

MotionDelta one_track_frame(const SignalStore& store, const VehicleGeometry& geom,
                            std::int64_t t_prev, std::int64_t t_now) {
  const auto phi = store.value_at_or_before(Channel::FrontWheelAngle, t_now);
  if (!phi) throw InsufficientSamples("no front wheel angle sample before frame");
  auto mean = [](const std::vector<TimedValue>& v) {
    double s = 0.0;
    for (const auto& x : v) s += x.value;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
  };
  const std::array<double, 2> rear = {
      mean(signed_speeds_in_range(store, kRearLeft, t_prev, t_now)),
      mean(signed_speeds_in_range(store, kRearRight, t_prev, t_now))};
  return one_track_step(phi->value, rear, t_prev, t_now, geom);
}

MotionDelta yaw_rate_frame(const SignalStore& store, std::int64_t t_prev, std::int64_t t_now) {
  auto yaw = store.samples_in_range(Channel::YawRate, t_prev, t_now);
  if (yaw.empty()) {
    if (auto held = store.value_at_or_before(Channel::YawRate, t_prev)) {
      yaw.push_back({t_prev, held->value});
    }
  }
  return yaw_rate_step(yaw, signed_speeds_in_range(store, kRearLeft, t_prev, t_now),
                       signed_speeds_in_range(store, kRearRight, t_prev, t_now), t_prev, t_now);
}

}  // namespace

EstimateResult estimate(const SignalLog& log, const VehicleGeometry& geom,
                        const EstimatorConfig& config,
                        const std::optional<SensorExtrinsics>& extrinsics,
                        const std::optional<ReferencePlane>& reference_plane) {
  geom.validate();
  const auto required = required_channels(config.model);
  for (Channel c : required) {
    if (!log.has(c)) {
      throw MissingChannel("model `" + model_name(config.model) + "` requires channel `" +
                           std::string(channel_name(c)) + "`");
    }
  }
  const bool emit_sensor = extrinsics.has_value() && reference_plane.has_value();
  if (emit_sensor) {
    for (Wheel w : kWheels) {
      if (!log.has(susp_height_channel(w))) {
        throw MissingChannel("sensor-pose output requires channel `" +
                             std::string(channel_name(susp_height_channel(w))) + "`");
      }
    }
  }

  SignalStore store(log);
  EstimateResult result;
  if (config.calibrate_yaw && log.has(Channel::YawRate)) {
    try {
      result.yaw_offset = store.calibrate(config.standstill);
    } catch (const NoStandstill&) {
      // No usable standstill; serve the raw yaw rate.
    }
  }

  const auto frames = frame_schedule(log, config, required);
  PlanarPose pose;
  pose.t_us = frames.front();
  result.trajectory.push_back(pose);

  auto emit_sensor_pose = [&](const PlanarPose& vehicle_pose) {
    if (!emit_sensor) return;
    SuspensionFrame frame;
    frame.t_us = vehicle_pose.t_us;
    for (Wheel w : kWheels) {
      const auto h = store.value_at_or_before(susp_height_channel(w), vehicle_pose.t_us);
      if (!h) return;  // no height yet at the first frames
      frame.heights[w] = h->value;
    }
    const SuspensionPlane live = fit_plane(frame, geom);
    const BodyMotion motion = body_motion(live, reference_plane->plane);
    const SensorPose in_vehicle = sensor_pose_vehicle(*extrinsics, motion);
    result.sensor_poses.push_back(
        {vehicle_pose.t_us, sensor_pose_world(vehicle_pose, in_vehicle)});
  };
  emit_sensor_pose(pose);

  for (std::size_t i = 1; i < frames.size(); ++i) {
    const std::int64_t t_prev = frames[i - 1];
    const std::int64_t t_now = frames[i];
    switch (config.model) {
      case OdometryModel::Proposed: {
        const FrameDelta fd = proposed_frame(store, geom, config, t_prev, t_now, pose.heading);
        pose.position += fd.dp_world;
        pose.heading = normalize_angle(pose.heading + fd.dtheta);
        pose.t_us = t_now;
        break;
      }
      case OdometryModel::TwoTrack:
        pose = accumulate(pose, two_track_frame(store, geom, t_prev, t_now), t_now);
        break;
      case OdometryModel::OneTrack:
        pose = accumulate(pose, one_track_frame(store, geom, t_prev, t_now), t_now);
        break;
      default:
        pose = accumulate(pose, yaw_rate_frame(store, t_prev, t_now), t_now);
        break;
    }
    result.trajectory.push_back(pose);
    emit_sensor_pose(pose);
  }
  return result;
}

}  // namespace odo
