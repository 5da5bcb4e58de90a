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

#include "odo/planar.hpp"

#include <cmath>

#include <Eigen/Geometry>

#include "odo/errors.hpp"

namespace odo {

double heading_delta(double rate1, double rate2, std::int64_t t1_us, std::int64_t t2_us) {
  if (t2_us <= t1_us) throw InvalidInterval("heading_delta needs t2 > t1");
  return 0.5 * (rate1 + rate2) * static_cast<double>(t2_us - t1_us) * 1e-6;
}

double heading_delta_division_form(double rate1, double rate2, std::int64_t t1_us,
                                   std::int64_t t2_us) {
  if (t2_us <= t1_us) throw InvalidInterval("heading_delta needs t2 > t1");
  return (rate1 + rate2) / (2.0 * static_cast<double>(t2_us - t1_us) * 1e-6);
}

std::optional<std::array<double, 4>> wheel_radii(const std::array<double, 4>& distances_m,
                                                 double dtheta, double threshold) {
  if (std::abs(dtheta) < threshold) return std::nullopt;
  std::array<double, 4> radii;
  for (int i = 0; i < 4; ++i) radii[i] = distances_m[i] / dtheta;
  return radii;
}

DatumRadius datum_radius_fixed(const std::array<double, 4>& radii, const VehicleGeometry& geom) {
  const double w2 = geom.track_width / 2.0;
  const double l2 = geom.wheelbase * geom.wheelbase;

  DatumRadius out;
  auto front_leg = [&](double rho) {
    const double radicand = rho * rho - l2;
    if (radicand < 0.0) {
      out.low_confidence = true;
      return 0.0;
    }
    return std::sqrt(radicand);
  };

  const double r1 = std::abs(radii[kRearLeft]) - w2;
  const double r2 = std::abs(radii[kRearRight]) + w2;
  const double r3 = front_leg(std::abs(radii[kFrontLeft])) + w2;
  const double r4 = front_leg(std::abs(radii[kFrontRight])) - w2;
  const double magnitude = (r1 + r2 + r3 + r4) / 4.0;

  const double mean_signed = (radii[0] + radii[1] + radii[2] + radii[3]) / 4.0;
  out.radius = mean_signed < 0.0 ? -magnitude : magnitude;
  return out;
}

Eigen::Vector2d datum_center_rear_steer(const std::array<double, 4>& radii,
                                        const VehicleGeometry& geom) {
  // |w_i - c|^2 = r_i^2 linearized as 2 w_i . c - |c|^2 = |w_i|^2 - r_i^2;
  // subtracting the mean equation removes |c|^2 and leaves A c = b.
  Eigen::Vector2d w_mean{0.0, 0.0};
  double u_mean = 0.0;
  std::array<Eigen::Vector2d, 4> w;
  std::array<double, 4> u;
  for (int i = 0; i < 4; ++i) {
    w[i] = geom.wheel_position(static_cast<Wheel>(i));
    u[i] = w[i].squaredNorm() - radii[i] * radii[i];
    w_mean += w[i];
    u_mean += u[i];
  }
  w_mean /= 4.0;
  u_mean /= 4.0;

  Eigen::Matrix2d a = Eigen::Matrix2d::Zero();
  Eigen::Vector2d b = Eigen::Vector2d::Zero();
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector2d wc = w[i] - w_mean;
    a += 4.0 * wc * wc.transpose();
    b += 2.0 * wc * (u[i] - u_mean);
  }
  const double det = a.determinant();
  if (std::abs(det) < 1e-12) {
    throw NoUniqueCenter("centred wheel positions are rank deficient");
  }
  return a.inverse() * b;
}

Eigen::Vector2d motion_vector(double radius, double dtheta, double d_mean, double threshold) {
  if (std::abs(dtheta) < threshold) return {d_mean, 0.0};
  return {radius * std::sin(dtheta), radius * (1.0 - std::cos(dtheta))};
}

Eigen::Vector2d motion_vector_about(const Eigen::Vector2d& center, double dtheta) {
  const Eigen::Matrix2d r = Eigen::Rotation2Dd(dtheta).toRotationMatrix();
  return center - r * center;
}

MotionDelta motion_from_wheels(const std::array<double, 4>& distances_m, double dtheta,
                               const VehicleGeometry& geom, double threshold) {
  MotionDelta delta;
  delta.dtheta = dtheta;
  const auto radii = wheel_radii(distances_m, dtheta, threshold);
  if (!radii) {
    // Straight fallback replaces only the translation model; the (tiny)
    // heading change still accumulates.
    const double d_mean =
        (distances_m[0] + distances_m[1] + distances_m[2] + distances_m[3]) / 4.0;
    delta.dp_vehicle = {d_mean, 0.0};
    return delta;
  }
  if (geom.rear_steering) {
    const Eigen::Vector2d c = datum_center_rear_steer(*radii, geom);
    delta.center = c;
    delta.radius = c.norm();
    delta.dp_vehicle = motion_vector_about(c, dtheta);
  } else {
    const DatumRadius r = datum_radius_fixed(*radii, geom);
    delta.radius = r.radius;
    delta.center = Eigen::Vector2d{0.0, r.radius};
    delta.dp_vehicle = motion_vector(r.radius, dtheta, 0.0, threshold);
  }
  return delta;
}

PlanarPose accumulate(const PlanarPose& pose, const MotionDelta& delta, std::int64_t t_us) {
  PlanarPose next;
  next.position = pose.position + Eigen::Rotation2Dd(pose.heading) * delta.dp_vehicle;
  next.heading = normalize_angle(pose.heading + delta.dtheta);
  next.t_us = t_us;
  return next;
}

FrameDelta integrate_frame(const FrameModels& models, std::int64_t t_prev_us,
                           std::int64_t t_now_us, const VehicleGeometry& geom,
                           const IntegratorConfig& config, double theta_start) {
  if (t_now_us <= t_prev_us) throw InvalidInterval("integrate_frame needs t_now > t_prev");
  if (config.slice_us <= 0) throw InvalidInterval("slice must be positive");

  const std::int64_t dt_us = t_now_us - t_prev_us;
  const std::int64_t slices = (dt_us + config.slice_us - 1) / config.slice_us;
  const double h = static_cast<double>(dt_us) * 1e-6 / static_cast<double>(slices);

  const double yaw_tau0 = static_cast<double>(t_prev_us - models.yaw_rate.t_ref_us) * 1e-6;
  std::array<double, 4> speed_tau0;
  for (int i = 0; i < 4; ++i) {
    speed_tau0[i] = static_cast<double>(t_prev_us - models.wheel_speed[i].t_ref_us) * 1e-6;
  }

  double theta = theta_start;
  double dtheta_total = 0.0;
  Eigen::Vector2d p{0.0, 0.0};

  double rate_a = evaluate_at_offset(models.yaw_rate, yaw_tau0);
  std::array<double, 4> speed_a;
  for (int i = 0; i < 4; ++i) speed_a[i] = evaluate_at_offset(models.wheel_speed[i], speed_tau0[i]);

  for (std::int64_t k = 0; k < slices; ++k) {
    const double tau_b = static_cast<double>(k + 1) * h;
    const double rate_b = evaluate_at_offset(models.yaw_rate, yaw_tau0 + tau_b);
    std::array<double, 4> speed_b;
    std::array<double, 4> dist;
    for (int i = 0; i < 4; ++i) {
      speed_b[i] = evaluate_at_offset(models.wheel_speed[i], speed_tau0[i] + tau_b);
      dist[i] = 0.5 * (speed_a[i] + speed_b[i]) * h;
    }
    const double dtheta = config.division_form_heading
                              ? (rate_a + rate_b) / (2.0 * h)
                              : 0.5 * (rate_a + rate_b) * h;

    const MotionDelta step = motion_from_wheels(dist, dtheta, geom, config.straight_threshold);
    p += Eigen::Rotation2Dd(theta) * step.dp_vehicle;
    theta += step.dtheta;
    dtheta_total += step.dtheta;

    rate_a = rate_b;
    speed_a = speed_b;
  }

  FrameDelta out;
  out.dtheta = dtheta_total;
  out.dp_world = p;
  out.dp_vehicle = Eigen::Rotation2Dd(-theta_start) * p;
  return out;
}

}  // namespace odo
