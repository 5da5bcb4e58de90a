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

#include "odo/signal_log.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "odo/errors.hpp"

namespace odo {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_int64(std::string_view s, std::int64_t& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_double(std::string_view s, double& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

void write_double(std::ostream& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.write(buf, res.ptr - buf);
}

}  // namespace

std::size_t SignalLog::total_samples() const {
  std::size_t n = 0;
  for (const auto& ch : channels_) n += ch.size();
  return n;
}

std::optional<std::int64_t> SignalLog::first_timestamp() const {
  std::optional<std::int64_t> t;
  for (const auto& ch : channels_) {
    if (!ch.empty() && (!t || ch.front().t_us < *t)) t = ch.front().t_us;
  }
  return t;
}

std::optional<std::int64_t> SignalLog::last_timestamp() const {
  std::optional<std::int64_t> t;
  for (const auto& ch : channels_) {
    if (!ch.empty() && (!t || ch.back().t_us > *t)) t = ch.back().t_us;
  }
  return t;
}

void SignalLog::append(const ChannelSample& s) {
  channels_[static_cast<int>(s.channel)].push_back({s.timestamp_us, s.value});
}

void SignalLog::finalize() {
  for (int i = 0; i < kChannelCount; ++i) {
    auto& ch = channels_[i];
    std::stable_sort(ch.begin(), ch.end(),
                     [](const TimedValue& a, const TimedValue& b) { return a.t_us < b.t_us; });
    // Deduplicate exact repeats; equal timestamps with different values conflict.
    auto out = ch.begin();
    for (auto it = ch.begin(); it != ch.end(); ++it) {
      if (out != ch.begin() && it->t_us == std::prev(out)->t_us) {
        if (it->value != std::prev(out)->value) {
          throw ConflictingSamples(
              std::string("conflicting values on ") +
              std::string(channel_name(static_cast<Channel>(i))) + " at t=" +
              std::to_string(it->t_us));
        }
        continue;
      }
      *out++ = *it;
    }
    ch.erase(out, ch.end());

    const Channel c = static_cast<Channel>(i);
    double prev_tick = -std::numeric_limits<double>::infinity();
    for (const auto& s : ch) {
      if (s.t_us < 0) {
        throw Error("negative timestamp on " + std::string(channel_name(c)));
      }
      if (!std::isfinite(s.value)) {
        throw Error("non-finite value on " + std::string(channel_name(c)));
      }
      if (is_tick_channel(c)) {
        if (s.value < 0 || s.value < prev_tick) {
          throw Error("tick counter must be non-negative and non-decreasing on " +
                      std::string(channel_name(c)));
        }
        prev_tick = s.value;
      }
      if (is_dir_channel(c) && s.value != -1.0 && s.value != 0.0 && s.value != 1.0) {
        throw Error("direction value outside {-1,0,+1} on " + std::string(channel_name(c)));
      }
    }
  }
}

SignalLog ingest_log(std::istream& stream) {
  SignalLog log;
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    std::string_view sv = trim(line);
    if (sv.empty() || sv.front() == '#') continue;
    if (sv.starts_with("timestamp")) continue;  // optional header line

    const auto c1 = sv.find(',');
    const auto c2 = c1 == std::string_view::npos ? std::string_view::npos : sv.find(',', c1 + 1);
    if (c2 == std::string_view::npos || sv.find(',', c2 + 1) != std::string_view::npos) {
      throw ParseError("expected `timestamp_us,channel,value`", line_no);
    }
    const std::string_view ts_field = trim(sv.substr(0, c1));
    const std::string_view ch_field = trim(sv.substr(c1 + 1, c2 - c1 - 1));
    const std::string_view val_field = trim(sv.substr(c2 + 1));

    ChannelSample s;
    if (!parse_int64(ts_field, s.timestamp_us)) {
      throw ParseError("bad timestamp `" + std::string(ts_field) + "`", line_no);
    }
    if (s.timestamp_us < 0) {
      throw ParseError("negative timestamp", line_no);
    }
    const auto channel = channel_from_name(ch_field);
    if (!channel) {
      throw ParseError("unknown channel `" + std::string(ch_field) + "`", line_no);
    }
    s.channel = *channel;
    if (!parse_double(val_field, s.value)) {
      throw ParseError("bad value `" + std::string(val_field) + "`", line_no);
    }
    log.append(s);
  }
  log.finalize();
  return log;
}

void serialize_log(std::ostream& out, const SignalLog& log) {
  out << "timestamp_us,channel,value\n";
  // Channels are merged back into one time-ordered stream.
  std::array<std::size_t, kChannelCount> pos{};
  for (;;) {
    int best = -1;
    std::int64_t best_t = 0;
    for (int i = 0; i < kChannelCount; ++i) {
      const auto& ch = log.samples(static_cast<Channel>(i));
      if (pos[i] < ch.size() && (best < 0 || ch[pos[i]].t_us < best_t)) {
        best = i;
        best_t = ch[pos[i]].t_us;
      }
    }
    if (best < 0) break;
    const auto& s = log.samples(static_cast<Channel>(best))[pos[best]++];
    out << s.t_us << ',' << channel_name(static_cast<Channel>(best)) << ',';
    write_double(out, s.value);
    out << '\n';
  }
}

SignalWindow window(const SignalLog& log, Channel channel, std::int64_t t_frame_us,
                    std::int64_t length_us) {
  if (length_us <= 0) throw InvalidInterval("window length must be positive");
  SignalWindow w;
  w.channel = channel;
  w.t_frame_us = t_frame_us;
  w.t_ref_us = t_frame_us - length_us;
  w.samples = samples_in_range(log, channel, w.t_ref_us, t_frame_us);
  if (w.samples.size() < 3) {
    throw InsufficientSamples(std::string(channel_name(channel)) + ": " +
                              std::to_string(w.samples.size()) +
                              " samples in window, need at least 3");
  }
  return w;
}

std::vector<TimedValue> samples_in_range(const SignalLog& log, Channel channel,
                                         std::int64_t t1_us, std::int64_t t2_us) {
  const auto& ch = log.samples(channel);
  auto lo = std::lower_bound(ch.begin(), ch.end(), t1_us,
                             [](const TimedValue& s, std::int64_t t) { return s.t_us < t; });
  auto hi = std::upper_bound(ch.begin(), ch.end(), t2_us,
                             [](std::int64_t t, const TimedValue& s) { return t < s.t_us; });
  return {lo, hi};
}

std::optional<TimedValue> value_at_or_before(const SignalLog& log, Channel channel,
                                             std::int64_t t_us) {
  const auto& ch = log.samples(channel);
  auto it = std::upper_bound(ch.begin(), ch.end(), t_us,
                             [](std::int64_t t, const TimedValue& s) { return t < s.t_us; });
  if (it == ch.begin()) return std::nullopt;
  return *std::prev(it);
}

std::vector<std::pair<std::int64_t, std::int64_t>> standstill_intervals(
    const SignalLog& log, double wheel_speed_epsilon) {
  // Per wheel: maximal spans of consecutive samples that are all at standstill.
  // The vehicle-level intervals are the intersection over the four wheels.
  std::array<std::vector<std::pair<std::int64_t, std::int64_t>>, 4> per_wheel;
  for (Wheel w : kWheels) {
    const auto& ch = log.samples(wheel_speed_channel(w));
    if (ch.empty()) return {};
    auto& spans = per_wheel[w];
    std::size_t i = 0;
    while (i < ch.size()) {
      if (std::abs(ch[i].value) > wheel_speed_epsilon) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j + 1 < ch.size() && std::abs(ch[j + 1].value) <= wheel_speed_epsilon) ++j;
      spans.emplace_back(ch[i].t_us, ch[j].t_us);
      i = j + 1;
    }
    if (spans.empty()) return {};
  }

  std::vector<std::pair<std::int64_t, std::int64_t>> result = per_wheel[0];
  for (int w = 1; w < 4; ++w) {
    std::vector<std::pair<std::int64_t, std::int64_t>> merged;
    std::size_t a = 0;
    std::size_t b = 0;
    while (a < result.size() && b < per_wheel[w].size()) {
      const auto lo = std::max(result[a].first, per_wheel[w][b].first);
      const auto hi = std::min(result[a].second, per_wheel[w][b].second);
      if (lo <= hi) merged.emplace_back(lo, hi);
      if (result[a].second < per_wheel[w][b].second) {
        ++a;
      } else {
        ++b;
      }
    }
    result = std::move(merged);
    if (result.empty()) return {};
  }
  return result;
}

YawOffset calibrate_yaw_offset(const SignalLog& log, const StandstillConfig& config) {
  auto intervals = standstill_intervals(log, config.wheel_speed_epsilon);
  if (config.scope == StandstillConfig::Scope::LatestInterval) {
    // Keep only the most recent interval with enough yaw samples.
    while (!intervals.empty()) {
      const auto& [lo, hi] = intervals.back();
      if (static_cast<int>(samples_in_range(log, Channel::YawRate, lo, hi).size()) >=
          config.min_samples) {
        intervals.erase(intervals.begin(), std::prev(intervals.end()));
        break;
      }
      intervals.pop_back();
    }
  }
  double sum = 0.0;
  int count = 0;
  double duration = 0.0;
  for (const auto& [lo, hi] : intervals) {
    duration += static_cast<double>(hi - lo) * 1e-6;
    for (const auto& s : samples_in_range(log, Channel::YawRate, lo, hi)) {
      sum += s.value;
      ++count;
    }
  }
  if (count < config.min_samples) {
    throw NoStandstill("only " + std::to_string(count) + " standstill yaw samples, need " +
                       std::to_string(config.min_samples));
  }
  return {sum / count, count, duration};
}

YawOffset SignalStore::calibrate(const StandstillConfig& config) {
  const YawOffset off = calibrate_yaw_offset(log_, config);
  offset_ = off;
  return off;
}

void SignalStore::apply_offset(Channel c, std::vector<TimedValue>& samples) const {
  if (c != Channel::YawRate || !offset_) return;
  for (auto& s : samples) s.value -= offset_->offset;
}

SignalWindow SignalStore::window(Channel channel, std::int64_t t_frame_us,
                                 std::int64_t length_us) const {
  SignalWindow w = odo::window(log_, channel, t_frame_us, length_us);
  apply_offset(channel, w.samples);
  return w;
}

std::vector<TimedValue> SignalStore::samples_in_range(Channel channel, std::int64_t t1_us,
                                                      std::int64_t t2_us) const {
  auto v = odo::samples_in_range(log_, channel, t1_us, t2_us);
  apply_offset(channel, v);
  return v;
}

std::optional<TimedValue> SignalStore::value_at_or_before(Channel channel,
                                                          std::int64_t t_us) const {
  auto v = odo::value_at_or_before(log_, channel, t_us);
  if (v && channel == Channel::YawRate && offset_) v->value -= offset_->offset;
  return v;
}

}  // namespace odo
