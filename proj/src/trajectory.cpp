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

#include "odo/trajectory.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>

#include "odo/errors.hpp"

namespace odo {

double normalize_angle(double rad) {
  const double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(rad, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

double arc_length(const Trajectory& traj) {
  double len = 0.0;
  for (std::size_t i = 1; i < traj.size(); ++i) {
    len += (traj[i].position - traj[i - 1].position).norm();
  }
  return len;
}

namespace {

void write_fixed(std::ostream& out, double v) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof(buf), "%.9f", v);
  out.write(buf, n);
}

bool parse_field(std::string_view s, double& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "timestamp_us,x_m,y_m,heading_rad\n";
  for (const auto& p : traj) {
    out << p.t_us << ',';
    write_fixed(out, p.position.x());
    out << ',';
    write_fixed(out, p.position.y());
    out << ',';
    write_fixed(out, p.heading);
    out << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& in) {
  Trajectory traj;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = line;
    while (!sv.empty() && (sv.back() == '\r' || sv.back() == ' ')) sv.remove_suffix(1);
    if (sv.empty() || sv.front() == '#' || sv.starts_with("timestamp")) continue;

    PlanarPose p;
    std::size_t start = 0;
    double fields[4];
    for (int f = 0; f < 4; ++f) {
      const auto comma = sv.find(',', start);
      const bool last = f == 3;
      if (last != (comma == std::string_view::npos)) {
        throw ParseError("expected `timestamp_us,x_m,y_m,heading_rad`", line_no);
      }
      const auto field = sv.substr(start, last ? std::string_view::npos : comma - start);
      if (!parse_field(field, fields[f])) {
        throw ParseError("bad number `" + std::string(field) + "`", line_no);
      }
      start = comma + 1;
    }
    p.t_us = static_cast<std::int64_t>(fields[0]);
    p.position = {fields[1], fields[2]};
    p.heading = fields[3];
    traj.push_back(p);
  }
  return traj;
}

void write_trajectory_geojson(std::ostream& out, const Trajectory& traj) {
  out << "{\"type\":\"Feature\",\"properties\":{},\"geometry\":{\"type\":\"LineString\","
         "\"coordinates\":[";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (i) out << ',';
    out << '[';
    write_fixed(out, traj[i].position.x());
    out << ',';
    write_fixed(out, traj[i].position.y());
    out << ']';
  }
  out << "]}}\n";
}

}  // namespace odo
