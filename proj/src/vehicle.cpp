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

#include "odo/vehicle.hpp"

#include <fstream>

#include <json.hpp>

#include "odo/errors.hpp"

namespace odo {

void VehicleGeometry::validate() const {
  if (wheelbase <= 0 || track_width <= 0 || wheel_circumference <= 0 || ticks_per_rev <= 0) {
    throw Error("vehicle geometry values must be positive");
  }
}

VehicleGeometry load_geometry(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open geometry file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("bad geometry JSON in " + path + ": " + e.what());
  }
  VehicleGeometry g;
  g.wheelbase = j.value("wheelbase_m", g.wheelbase);
  g.track_width = j.value("track_width_m", g.track_width);
  g.wheel_circumference = j.value("wheel_circumference_m", g.wheel_circumference);
  g.ticks_per_rev = j.value("ticks_per_rev", g.ticks_per_rev);
  g.rear_steering = j.value("rear_steering", g.rear_steering);
  g.validate();
  return g;
}

void save_geometry(const std::string& path, const VehicleGeometry& geom) {
  nlohmann::json j{
      {"wheelbase_m", geom.wheelbase},
      {"track_width_m", geom.track_width},
      {"wheel_circumference_m", geom.wheel_circumference},
      {"ticks_per_rev", geom.ticks_per_rev},
      {"rear_steering", geom.rear_steering},
  };
  std::ofstream out(path);
  if (!out) throw Error("cannot write geometry file: " + path);
  out << j.dump(2) << '\n';
}

}  // namespace odo
