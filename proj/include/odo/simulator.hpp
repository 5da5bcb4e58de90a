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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "odo/signal_log.hpp"
#include "odo/suspension.hpp"
#include "odo/trajectory.hpp"
#include "odo/vehicle.hpp"

namespace odo {

/// One constant-jerk, constant-curvature-rate piece of a manoeuvre.
/// Within the segment (local time t): v(t) = v0 + a t + j t^2 / 2,
/// kappa(t) = kappa0 + kappa_dot t.
struct ManoeuvreSegment {
  double duration_s = 0.0;
  double v0 = 0.0;
  double accel = 0.0;
  double jerk = 0.0;
  double kappa0 = 0.0;
  double kappa_dot = 0.0;
};

/// Emission period and phase of one signal channel. A missing phase is
/// randomized in [0, period) from the scenario seed.
struct ChannelTiming {
  std::int64_t period_us = 20000;
  std::optional<std::int64_t> phase_us;
};

/// Static load applied to the vehicle body.
struct LoadSpec {
  double mass_kg = 0.0;
  Eigen::Vector2d position{0.0, 0.0};                           // vehicle frame, metres
  std::array<double, 4> stiffness{30000, 30000, 30000, 30000};  // N/m per corner
  std::array<double, 4> unloaded_heights{0.5, 0.5, 0.5, 0.5};   // m
};

/// Full scenario description for the signal synthesizer. Every scenario
/// starts with a standstill lead-in so yaw-offset calibration and frame
/// wind-up have history to work with.
struct ManoeuvreSpec {
  std::vector<ManoeuvreSegment> segments;
  double lead_in_s = 1.0;
  std::map<Channel, ChannelTiming> timing;  // per-channel overrides
  std::map<Channel, double> noise_sigma;
  std::map<Channel, double> quantization;  // bus scaling step, 0 = continuous
  double yaw_rate_bias = 0.0;       // rad/s systematic gyro offset
  double ackermann_error = 0.0;     // rad bias on the synthesized front wheel angle
  std::uint64_t seed = 0;
  std::optional<LoadSpec> load;     // drives the suspension height channels
};

/// Analytic speed / curvature profile of a scenario, including the lead-in.
class ManoeuvreProfile {
 public:
  ManoeuvreProfile(const ManoeuvreSpec& spec, const VehicleGeometry& geom);

  double duration_s() const { return duration_s_; }
  double speed(double t_s) const;
  double curvature(double t_s) const;
  double yaw_rate(double t_s) const { return speed(t_s) * curvature(t_s); }
  double front_wheel_angle(double t_s) const;

  /// Ground speed of one wheel: |v| sqrt((kappa w_x)^2 + (1 - kappa w_y)^2),
  /// which smoothly reduces to |v| on straights.
  double wheel_speed(double t_s, Wheel wheel) const;

  /// True whether every active profile piece is constant over [t1, t2]
  /// (no accel, jerk or curvature rate), so exact arc stepping applies.
  bool constant_on(double t1_s, double t2_s) const;

 private:
  struct Piece {
    double start_s;
    ManoeuvreSegment seg;
  };
  const Piece& piece_at(double t_s) const;

  std::vector<Piece> pieces_;
  double duration_s_ = 0.0;
  VehicleGeometry geom_;
};

/// Integrates the unicycle model along the profile and emits poses every
/// dt_us. Constant pieces advance by exact arcs; varying pieces use 10 us
/// trapezoidal substeps.
Trajectory generate_ground_truth(const ManoeuvreSpec& spec, const VehicleGeometry& geom,
                                 std::int64_t dt_us = 20000);

/// Samples every configured channel at its own rate and phase, adding
/// per-channel Gaussian noise. Deterministic under the scenario seed.
SignalLog synthesize_signals(const ManoeuvreSpec& spec, const VehicleGeometry& geom);

struct LoadResult {
  SuspensionFrame frame;
  std::array<double, 4> corner_forces{};  // N, load-induced only
  bool clamped = false;                   // load position clamped into the wheel rectangle
};

/// Linear static load model: the load weight splits bilinearly over the
/// wheel rectangle and each corner drops by F_i / k_i.
LoadResult simulate_load(const LoadSpec& load, const VehicleGeometry& geom);

/// The canned figure-of-8 used for model-comparison runs: straight run-up,
/// one left and one right loop with curvature ramps in between, 0.5 deg
/// Ackermann bias and mild sensor noise under seed 42.
ManoeuvreSpec figure_eight_scenario();

/// Constant-curvature circle manoeuvre (radius in metres, signed by
/// turn direction) at constant speed for the given number of revolutions.
ManoeuvreSpec circle_scenario(double radius_m, double speed_mps, double revolutions,
                              std::uint64_t seed = 0);

/// The 127 canned loading configurations: masses 50-300 kg in 50 kg steps
/// placed on a 0.5 m grid with x in [0, 3] and y in [0, 1], plus one
/// unloaded reference configuration at the front.
std::vector<LoadSpec> load_sweep(const LoadSpec& base);

/// Scenario JSON (de)serialization.
ManoeuvreSpec load_scenario(const std::string& path);
void save_scenario(const std::string& path, const ManoeuvreSpec& spec);

}  // namespace odo
