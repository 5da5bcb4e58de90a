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

#include "odo/metrics.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include <Eigen/Geometry>

#include "odo/errors.hpp"

namespace odo {

namespace {

void require_nonempty(const Trajectory& t, const char* which) {
  if (t.empty()) throw Error(std::string(which) + " trajectory is empty");
}

}  // namespace

Eigen::Vector2d e_pos(const Trajectory& estimated, const Trajectory& reference) {
  require_nonempty(estimated, "estimated");
  require_nonempty(reference, "reference");
  const Eigen::Vector2d diff = reference.back().position - estimated.back().position;
  const Eigen::Vector2d rotated = Eigen::Rotation2Dd(reference.back().heading) * diff;
  return rotated.cwiseAbs();
}

double e_alig(const Trajectory& estimated, const Trajectory& reference) {
  require_nonempty(estimated, "estimated");
  require_nonempty(reference, "reference");
  return std::abs(normalize_angle(reference.back().heading - estimated.back().heading));
}

double point_to_polyline(const Eigen::Vector2d& point, const Trajectory& polyline) {
  if (polyline.size() < 2) throw Error("polyline needs at least 2 points");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < polyline.size(); ++i) {
    const Eigen::Vector2d a = polyline[i - 1].position;
    const Eigen::Vector2d ab = polyline[i].position - a;
    const double len2 = ab.squaredNorm();
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp((point - a).dot(ab) / len2, 0.0, 1.0);
    best = std::min(best, (point - (a + t * ab)).norm());
  }
  return best;
}

double e_loc(const Trajectory& estimated, const Trajectory& reference) {
  require_nonempty(estimated, "estimated");
  const double length = arc_length(reference);
  if (reference.size() < 2 || length <= 0.0) {
    throw DegenerateReference("reference trajectory has no length");
  }
  double sum = 0.0;
  for (const auto& p : estimated) sum += point_to_polyline(p.position, reference);
  return sum / length;
}

double e_loc_paired_denominator(const Trajectory& estimated, const Trajectory& reference) {
  require_nonempty(estimated, "estimated");
  if (estimated.size() != reference.size()) {
    throw Error("paired denominator needs equally sized trajectories");
  }
  double denom = 0.0;
  for (std::size_t i = 0; i < estimated.size(); ++i) {
    denom += (reference[i].position - estimated[i].position).norm();
  }
  if (denom <= 0.0) throw DegenerateReference("paired denominator is zero");
  double sum = 0.0;
  for (const auto& p : estimated) sum += point_to_polyline(p.position, reference);
  return sum / denom;
}

std::vector<Eigen::Vector2d> velocity_series(const Trajectory& traj) {
  if (traj.size() < 2) throw Error("velocity series needs at least 2 poses");
  std::vector<Eigen::Vector2d> velocities;
  velocities.reserve(traj.size() - 1);
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const std::int64_t dt_us = traj[i].t_us - traj[i - 1].t_us;
    if (dt_us <= 0) throw InvalidTimestamps("trajectory timestamps must strictly increase");
    velocities.push_back((traj[i].position - traj[i - 1].position) /
                         (static_cast<double>(dt_us) * 1e-6));
  }
  return velocities;
}

MetricsReport evaluate(const Trajectory& estimated, const Trajectory& reference,
                       const std::string& model, const std::string& trajectory_name,
                       const EvaluateOptions& options) {
  MetricsReport r;
  r.model = model;
  r.trajectory = trajectory_name;
  r.n = static_cast<int>(estimated.size());
  r.m = static_cast<int>(reference.size());
  r.length_m = arc_length(reference);
  const Eigen::Vector2d pos = e_pos(estimated, reference);
  r.e_pos_x = pos.x();
  r.e_pos_y = pos.y();
  r.e_alig = e_alig(estimated, reference);
  r.e_loc = options.paired_denominator ? e_loc_paired_denominator(estimated, reference)
                                       : e_loc(estimated, reference);
  r.e_loc_prime = r.e_loc / static_cast<double>(r.n);
  return r;
}

void write_report_header(std::ostream& out) {
  out << "model,trajectory,length_m,e_pos_x,e_pos_y,e_alig_deg,e_loc,e_loc_prime\n";
}

void write_report_row(std::ostream& out, const MetricsReport& r) {
  char buf[256];
  const double deg = r.e_alig * 180.0 / std::numbers::pi;
  const int len = std::snprintf(buf, sizeof(buf), "%s,%s,%.3f,%.4f,%.4f,%.4f,%.4f,%.5f\n",
                                r.model.c_str(), r.trajectory.c_str(), r.length_m, r.e_pos_x,
                                r.e_pos_y, deg, r.e_loc, r.e_loc_prime);
  out.write(buf, len);
}

}  // namespace odo
