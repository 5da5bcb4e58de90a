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

#include "odo/channels.hpp"

namespace odo {

namespace {

constexpr std::array<std::string_view, kChannelCount> kNames = {
    "yaw_rate",
    "wheel_speed_rl", "wheel_speed_rr", "wheel_speed_fl", "wheel_speed_fr",
    "wheel_tick_rl",  "wheel_tick_rr",  "wheel_tick_fl",  "wheel_tick_fr",
    "wheel_dir_rl",   "wheel_dir_rr",   "wheel_dir_fl",   "wheel_dir_fr",
    "front_wheel_angle",
    "susp_height_rl", "susp_height_rr", "susp_height_fl", "susp_height_fr",
};

}  // namespace

std::string_view channel_name(Channel c) { return kNames[static_cast<int>(c)]; }

std::optional<Channel> channel_from_name(std::string_view name) {
  for (int i = 0; i < kChannelCount; ++i) {
    if (kNames[i] == name) return static_cast<Channel>(i);
  }
  return std::nullopt;
}

Channel wheel_speed_channel(Wheel w) {
  return static_cast<Channel>(static_cast<int>(Channel::WheelSpeedRL) + static_cast<int>(w));
}

Channel wheel_tick_channel(Wheel w) {
  return static_cast<Channel>(static_cast<int>(Channel::WheelTickRL) + static_cast<int>(w));
}

Channel wheel_dir_channel(Wheel w) {
  return static_cast<Channel>(static_cast<int>(Channel::WheelDirRL) + static_cast<int>(w));
}

Channel susp_height_channel(Wheel w) {
  return static_cast<Channel>(static_cast<int>(Channel::SuspHeightRL) + static_cast<int>(w));
}

bool is_tick_channel(Channel c) {
  return c >= Channel::WheelTickRL && c <= Channel::WheelTickFR;
}

bool is_dir_channel(Channel c) {
  return c >= Channel::WheelDirRL && c <= Channel::WheelDirFR;
}

}  // namespace odo
