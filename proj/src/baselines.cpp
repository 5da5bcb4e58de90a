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

#include "odo/baselines.hpp"

#include <cmath>
#include <numbers>

#include "odo/errors.hpp"

namespace odo {

double TickDelta::distance(const VehicleGeometry& geom) const {
  if (ticks < 0.0) throw Error("tick delta must be non-negative");
  if (ticks > 0.0 && direction == 0) {
    throw DirectionUnknown("wheel ticks changed without a direction signal");
  }
  return direction * geom.tick_distance(ticks);
}

MotionDelta two_track_step(const TickDelta& rear_left, const TickDelta& rear_right,
                           const VehicleGeometry& geom) {
  const double d_l = rear_left.distance(geom);
  const double d_r = rear_right.distance(geom);
  const double w = geom.track_width;

  // Left turn (heading increasing, Y toward the left): the outer right wheel
  // travels farther, so dtheta = (d_r - d_l) / w.
  const double dtheta = (d_r - d_l) / w;
  MotionDelta delta;
  delta.dtheta = dtheta;
  if (std::abs(dtheta) < kStraightThreshold) {
    delta.dp_vehicle = {0.5 * (d_l + d_r), 0.0};
    return delta;
  }
  delta.radius = 0.5 * w * (d_l + d_r) / (d_r - d_l);
  delta.center = Eigen::Vector2d{0.0, delta.radius};
  delta.dp_vehicle = motion_vector(delta.radius, dtheta, 0.0);
  return delta;
}

MotionDelta one_track_step(double front_wheel_angle, const std::array<double, 2>& rear_speeds,
                           std::int64_t t1_us, std::int64_t t2_us, const VehicleGeometry& geom) {
  if (t2_us <= t1_us) throw InvalidInterval("one_track_step needs t2 > t1");
  if (std::abs(front_wheel_angle) >= std::numbers::pi / 2.0) {
    throw Error("front wheel angle out of range");
  }
  const double dt_s = static_cast<double>(t2_us - t1_us) * 1e-6;
  const double d = 0.5 * (rear_speeds[0] + rear_speeds[1]) * dt_s;

  MotionDelta delta;
  delta.dtheta = d * std::tan(front_wheel_angle) / geom.wheelbase;
  if (std::abs(front_wheel_angle) < 1e-7) {
    delta.dp_vehicle = {d, 0.0};
    return delta;
  }
  delta.radius = geom.wheelbase / std::tan(front_wheel_angle);
  delta.center = Eigen::Vector2d{0.0, delta.radius};
  delta.dp_vehicle = motion_vector(delta.radius, delta.dtheta, d);
  return delta;
}

double trapezoid_integral(const std::vector<TimedValue>& samples, std::int64_t t1_us,
                          std::int64_t t2_us) {
  if (samples.empty()) throw InsufficientSamples("trapezoid_integral needs at least 1 sample");
  if (t2_us <= t1_us) throw InvalidInterval("trapezoid_integral needs t2 > t1");

  auto sec = [](std::int64_t us) { return static_cast<double>(us) * 1e-6; };
  double acc = samples.front().value * (sec(samples.front().t_us) - sec(t1_us));
  for (std::size_t i = 1; i < samples.size(); ++i) {
    acc += 0.5 * (samples[i - 1].value + samples[i].value) *
           (sec(samples[i].t_us) - sec(samples[i - 1].t_us));
  }
  acc += samples.back().value * (sec(t2_us) - sec(samples.back().t_us));
  return acc;
}

MotionDelta yaw_rate_step(const std::vector<TimedValue>& yaw_samples,
                          const std::vector<TimedValue>& rear_left_speeds,
                          const std::vector<TimedValue>& rear_right_speeds,
                          std::int64_t t1_us, std::int64_t t2_us) {
  if (t2_us <= t1_us) throw InvalidInterval("yaw_rate_step needs t2 > t1");
  if (yaw_samples.empty() || rear_left_speeds.empty() || rear_right_speeds.empty()) {
    throw InsufficientSamples("yaw_rate_step needs yaw and rear speed samples in the interval");
  }
  const double dt_s = static_cast<double>(t2_us - t1_us) * 1e-6;
  const double dtheta = trapezoid_integral(yaw_samples, t1_us, t2_us);

  auto mean = [](const std::vector<TimedValue>& v) {
    double s = 0.0;
    for (const auto& x : v) s += x.value;
    return s / static_cast<double>(v.size());
  };
  const double d = 0.5 * (mean(rear_left_speeds) + mean(rear_right_speeds)) * dt_s;

  MotionDelta delta;
  delta.dtheta = dtheta;
  if (std::abs(dtheta) < kStraightThreshold) {
    delta.dp_vehicle = {d, 0.0};
    return delta;
  }
  delta.radius = d / dtheta;
  delta.center = Eigen::Vector2d{0.0, delta.radius};
  delta.dp_vehicle = motion_vector(delta.radius, dtheta, d);
  return delta;
}

}  // namespace odo
