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
#include <optional>
#include <string>
#include <string_view>

namespace odo {

/// Wheel index order used for every per-wheel quadruple in the library.
enum Wheel : int { kRearLeft = 0, kRearRight = 1, kFrontLeft = 2, kFrontRight = 3 };

constexpr std::array<Wheel, 4> kWheels = {kRearLeft, kRearRight, kFrontLeft, kFrontRight};

/// Signal channels understood by the log ingestion.
enum class Channel : int {
  YawRate = 0,       // rad/s
  WheelSpeedRL,      // m/s, unsigned
  WheelSpeedRR,
  WheelSpeedFL,
  WheelSpeedFR,
  WheelTickRL,       // cumulative encoder count
  WheelTickRR,
  WheelTickFL,
  WheelTickFR,
  WheelDirRL,        // {-1, 0, +1}
  WheelDirRR,
  WheelDirFL,
  WheelDirFR,
  FrontWheelAngle,   // rad
  SuspHeightRL,      // m
  SuspHeightRR,
  SuspHeightFL,
  SuspHeightFR,
};

constexpr int kChannelCount = 18;

/// CSV channel name, e.g. "yaw_rate" or "wheel_speed_fl".
std::string_view channel_name(Channel c);

/// Inverse of channel_name(); nullopt for unknown names.
std::optional<Channel> channel_from_name(std::string_view name);

Channel wheel_speed_channel(Wheel w);
Channel wheel_tick_channel(Wheel w);
Channel wheel_dir_channel(Wheel w);
Channel susp_height_channel(Wheel w);

bool is_tick_channel(Channel c);
bool is_dir_channel(Channel c);

/// One timestamped value on a named channel; the universal ingestion record.
struct ChannelSample {
  std::int64_t timestamp_us = 0;
  Channel channel = Channel::YawRate;
  double value = 0.0;
};

}  // namespace odo
