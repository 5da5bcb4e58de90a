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
#include <iosfwd>
#include <optional>
#include <vector>

#include "odo/channels.hpp"

namespace odo {

/// A (timestamp, value) pair inside one channel's sample sequence.
struct TimedValue {
  std::int64_t t_us = 0;
  double value = 0.0;

  friend bool operator==(const TimedValue&, const TimedValue&) = default;
};

/// Per-channel, timestamp-sorted sample sequences. Read-only after ingestion;
/// safe for concurrent readers.
class SignalLog {
 public:
  const std::vector<TimedValue>& samples(Channel c) const {
    return channels_[static_cast<int>(c)];
  }

  bool has(Channel c) const { return !samples(c).empty(); }
  std::size_t total_samples() const;

  /// Earliest / latest timestamp over all channels; nullopt for an empty log.
  std::optional<std::int64_t> first_timestamp() const;
  std::optional<std::int64_t> last_timestamp() const;

  /// Appends one sample (used by ingestion and the simulator). Does not sort;
  /// call finalize() once after the last append.
  void append(const ChannelSample& s);

  /// Sorts every channel, drops exact duplicates and validates the per-channel
  /// invariants (monotone ticks, direction domain, conflicting values).
  void finalize();

 private:
  std::array<std::vector<TimedValue>, kChannelCount> channels_;
};

/// Samples of one channel restricted to [t_ref, t_frame], both ends closed.
struct SignalWindow {
  Channel channel = Channel::YawRate;
  std::vector<TimedValue> samples;
  std::int64_t t_ref_us = 0;
  std::int64_t t_frame_us = 0;
};

/// Yaw-rate sensor offset measured at standstill.
struct YawOffset {
  double offset = 0.0;           // rad/s, subtracted from served yaw-rate values
  int sample_count = 0;
  double standstill_duration = 0.0;  // seconds covered by the standstill intervals
};

struct StandstillConfig {
  double wheel_speed_epsilon = 0.0;  // wheel counts as stopped when |v| <= epsilon
  int min_samples = 50;
  /// Accumulate over every standstill of the drive, or use only the latest
  /// qualifying interval.
  enum class Scope { AccumulateAll, LatestInterval };
  Scope scope = Scope::AccumulateAll;
};

/// Parses a signal-log CSV stream: `timestamp_us,channel,value` per line,
/// optional header, `#` comments. Throws ParseError (with line number),
/// ConflictingSamples.
SignalLog ingest_log(std::istream& stream);

/// Writes the log in the same CSV format; values round-trip bit-exactly.
void serialize_log(std::ostream& out, const SignalLog& log);

/// All samples of `channel` with t_frame - length <= t <= t_frame.
/// Throws InsufficientSamples when fewer than 3 fall inside.
SignalWindow window(const SignalLog& log, Channel channel, std::int64_t t_frame_us,
                    std::int64_t length_us);

/// Raw samples with t1 <= t <= t2, no minimum-count requirement.
std::vector<TimedValue> samples_in_range(const SignalLog& log, Channel channel,
                                         std::int64_t t1_us, std::int64_t t2_us);

/// Most recent sample at or before t; nullopt when none exists.
std::optional<TimedValue> value_at_or_before(const SignalLog& log, Channel channel,
                                             std::int64_t t_us);

/// Maximal intervals during which all four wheel speeds are at standstill.
/// An interval spans consecutive samples of every wheel-speed channel whose
/// magnitudes are all <= epsilon.
std::vector<std::pair<std::int64_t, std::int64_t>> standstill_intervals(
    const SignalLog& log, double wheel_speed_epsilon = 0.0);

/// Mean yaw rate over the standstill intervals. Throws NoStandstill when
/// fewer than config.min_samples yaw samples fall inside them.
YawOffset calibrate_yaw_offset(const SignalLog& log, const StandstillConfig& config = {});

/// Serves log data with the yaw-rate offset subtracted once configured.
class SignalStore {
 public:
  explicit SignalStore(SignalLog log) : log_(std::move(log)) {}

  const SignalLog& log() const { return log_; }
  void set_yaw_offset(const YawOffset& offset) { offset_ = offset; }
  const std::optional<YawOffset>& yaw_offset() const { return offset_; }

  /// Runs calibrate_yaw_offset on the held log and applies the result.
  YawOffset calibrate(const StandstillConfig& config = {});

  SignalWindow window(Channel channel, std::int64_t t_frame_us, std::int64_t length_us) const;
  std::vector<TimedValue> samples_in_range(Channel channel, std::int64_t t1_us,
                                           std::int64_t t2_us) const;
  std::optional<TimedValue> value_at_or_before(Channel channel, std::int64_t t_us) const;

 private:
  void apply_offset(Channel c, std::vector<TimedValue>& samples) const;

  SignalLog log_;
  std::optional<YawOffset> offset_;
};

}  // namespace odo
