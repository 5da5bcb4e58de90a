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

#include <doctest.h>

#include <random>
#include <sstream>

#include "odo/errors.hpp"
#include "odo/signal_log.hpp"

using namespace odo;

namespace {

SignalLog ingest(const std::string& text) {
  std::istringstream in(text);
  return ingest_log(in);
}

}  // namespace

TEST_CASE("single line maps to one sample") {
  const SignalLog log = ingest("1000,yaw_rate,0.05\n");
  REQUIRE(log.samples(Channel::YawRate).size() == 1);
  CHECK(log.samples(Channel::YawRate)[0].t_us == 1000);
  CHECK(log.samples(Channel::YawRate)[0].value == 0.05);
  CHECK(log.total_samples() == 1);
}

TEST_CASE("empty stream is a valid empty log") {
  const SignalLog log = ingest("");
  CHECK(log.total_samples() == 0);
  CHECK(!log.first_timestamp());
}

TEST_CASE("header and comments are skipped") {
  const SignalLog log = ingest(
      "timestamp_us,channel,value\n"
      "# a comment\n"
      "\n"
      "500,wheel_speed_fl,1.25\n");
  CHECK(log.total_samples() == 1);
  CHECK(log.samples(Channel::WheelSpeedFL)[0].value == 1.25);
}

TEST_CASE("interleaved 300-row file matches an independent per-channel count") {
  // Oracle: count lines per channel name directly in the text.
  std::ostringstream text;
  int expected_yaw = 0, expected_speed = 0, expected_angle = 0;
  std::mt19937 rng(7);
  for (int i = 0; i < 300; ++i) {
    const std::int64_t t = 1000 * i;
    switch (rng() % 3) {
      case 0:
        text << t << ",yaw_rate,0.1\n";
        break;
      case 1:
        text << t << ",wheel_speed_fl,2.0\n";
        break;
      default:
        text << t << ",front_wheel_angle,0.01\n";
        break;
    }
  }
  const std::string body = text.str();
  std::istringstream count_in(body);
  std::string line;
  while (std::getline(count_in, line)) {
    if (line.find(",yaw_rate,") != std::string::npos) ++expected_yaw;
    if (line.find(",wheel_speed_fl,") != std::string::npos) ++expected_speed;
    if (line.find(",front_wheel_angle,") != std::string::npos) ++expected_angle;
  }
  REQUIRE(expected_yaw + expected_speed + expected_angle == 300);

  const SignalLog log = ingest(body);
  CHECK(log.samples(Channel::YawRate).size() == static_cast<std::size_t>(expected_yaw));
  CHECK(log.samples(Channel::WheelSpeedFL).size() == static_cast<std::size_t>(expected_speed));
  CHECK(log.samples(Channel::FrontWheelAngle).size() == static_cast<std::size_t>(expected_angle));
}

TEST_CASE("malformed lines carry the line number") {
  CHECK_THROWS_WITH_AS(ingest("1000,yaw_rate,0.05\nnot a line\n"),
                       doctest::Contains("line 2"), ParseError);
  CHECK_THROWS_AS(ingest("abc,yaw_rate,0.05\n"), ParseError);
  CHECK_THROWS_AS(ingest("1000,yaw_rate\n"), ParseError);
  CHECK_THROWS_AS(ingest("1000,yaw_rate,0.05,extra\n"), ParseError);
  CHECK_THROWS_AS(ingest("1000,yaw_rate,banana\n"), ParseError);
  CHECK_THROWS_AS(ingest("-5,yaw_rate,0.05\n"), ParseError);
}

TEST_CASE("unknown channel names are rejected") {
  CHECK_THROWS_WITH_AS(ingest("1000,warp_drive,0.05\n"), doctest::Contains("warp_drive"),
                       ParseError);
}

TEST_CASE("exact duplicates are dropped, conflicting values rejected") {
  const SignalLog log = ingest("1000,yaw_rate,0.05\n1000,yaw_rate,0.05\n");
  CHECK(log.samples(Channel::YawRate).size() == 1);
  CHECK_THROWS_AS(ingest("1000,yaw_rate,0.05\n1000,yaw_rate,0.06\n"), ConflictingSamples);
}

TEST_CASE("out-of-order samples are sorted per channel") {
  const SignalLog log = ingest("3000,yaw_rate,3\n1000,yaw_rate,1\n2000,yaw_rate,2\n");
  const auto& s = log.samples(Channel::YawRate);
  REQUIRE(s.size() == 3);
  CHECK(s[0].t_us == 1000);
  CHECK(s[1].t_us == 2000);
  CHECK(s[2].t_us == 3000);
}

TEST_CASE("tick and direction invariants are enforced") {
  CHECK_THROWS_AS(ingest("1000,wheel_tick_fl,10\n2000,wheel_tick_fl,9\n"), Error);
  CHECK_THROWS_AS(ingest("1000,wheel_dir_fl,0.5\n"), Error);
  CHECK_NOTHROW(ingest("1000,wheel_dir_fl,-1\n2000,wheel_dir_fl,0\n3000,wheel_dir_fl,1\n"));
}

TEST_CASE("window keeps closed boundaries") {
  SignalLog log;
  for (int k = 0; k <= 8; ++k) {
    log.append({k * 50000, Channel::YawRate, static_cast<double>(k)});
  }
  log.finalize();
  const SignalWindow w = window(log, Channel::YawRate, 400000, 200000);
  REQUIRE(w.samples.size() == 5);  // 200, 250, 300, 350, 400 ms
  CHECK(w.samples.front().t_us == 200000);
  CHECK(w.samples.back().t_us == 400000);
  CHECK(w.t_ref_us == 200000);
  CHECK(w.t_frame_us == 400000);
}

TEST_CASE("window with fewer than three samples fails") {
  SignalLog log;
  log.append({0, Channel::YawRate, 0.0});
  log.append({10000, Channel::YawRate, 0.0});
  log.append({500000, Channel::YawRate, 0.0});
  log.finalize();
  CHECK_THROWS_AS(window(log, Channel::YawRate, 500000, 200000), InsufficientSamples);
}

TEST_CASE("window equals a brute-force filter on random logs") {
  std::mt19937 rng(42);
  std::uniform_int_distribution<std::int64_t> time_dist(0, 1000000);
  std::uniform_real_distribution<double> value_dist(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    SignalLog log;
    const int n = 5 + static_cast<int>(rng() % 200);
    for (int i = 0; i < n; ++i) {
      log.append({time_dist(rng), Channel::YawRate, value_dist(rng)});
    }
    try {
      log.finalize();
    } catch (const ConflictingSamples&) {
      continue;  // random collision, skip the trial
    }
    const std::int64_t t_frame = time_dist(rng);
    const std::int64_t length = 1 + static_cast<std::int64_t>(rng() % 400000);

    std::vector<TimedValue> brute;
    for (const auto& s : log.samples(Channel::YawRate)) {
      if (s.t_us >= t_frame - length && s.t_us <= t_frame) brute.push_back(s);
    }
    if (brute.size() < 3) {
      CHECK_THROWS_AS(window(log, Channel::YawRate, t_frame, length), InsufficientSamples);
      continue;
    }
    const SignalWindow w = window(log, Channel::YawRate, t_frame, length);
    CHECK(w.samples == brute);

    // Idempotence: filtering the window samples again changes nothing.
    std::vector<TimedValue> again;
    for (const auto& s : w.samples) {
      if (s.t_us >= w.t_ref_us && s.t_us <= w.t_frame_us) again.push_back(s);
    }
    CHECK(again == w.samples);
  }
}

namespace {

/// Builds a log that stands still on [0, stand1_ms], drives, then stands
/// still again on [drive_end, end]; returns the log.
SignalLog two_standstill_log(double yaw_bias) {
  SignalLog log;
  auto wheel_value = [](int t_ms) {
    const bool standing = t_ms <= 1000 || t_ms >= 3000;
    return standing ? 0.0 : 2.0;
  };
  for (int t_ms = 0; t_ms <= 4000; t_ms += 20) {
    for (Wheel w : kWheels) {
      log.append({t_ms * 1000, wheel_speed_channel(w), wheel_value(t_ms)});
    }
  }
  for (int t_ms = 5; t_ms <= 4000; t_ms += 25) {
    const bool standing = t_ms <= 1000 || t_ms >= 3000;
    log.append({t_ms * 1000, Channel::YawRate, standing ? yaw_bias : 0.4});
  }
  log.finalize();
  return log;
}

}  // namespace

TEST_CASE("constant yaw rate at standstill becomes the offset") {
  SignalLog log;
  for (int t_ms = 0; t_ms <= 2000; t_ms += 20) {
    for (Wheel w : kWheels) log.append({t_ms * 1000, wheel_speed_channel(w), 0.0});
    log.append({t_ms * 1000 + 3, Channel::YawRate, 0.003});
  }
  log.finalize();
  const YawOffset offset = calibrate_yaw_offset(log);
  CHECK(offset.offset == doctest::Approx(0.003).epsilon(1e-12));
  CHECK(offset.sample_count >= 50);
}

TEST_CASE("no standstill interval raises NoStandstill") {
  SignalLog log;
  for (int t_ms = 0; t_ms <= 2000; t_ms += 20) {
    for (Wheel w : kWheels) log.append({t_ms * 1000, wheel_speed_channel(w), 1.0});
    log.append({t_ms * 1000 + 3, Channel::YawRate, 0.003});
  }
  log.finalize();
  CHECK_THROWS_AS(calibrate_yaw_offset(log), NoStandstill);
}

TEST_CASE("offset over two standstill intervals matches a hand-rolled oracle") {
  const SignalLog log = two_standstill_log(0.0123);

  // Oracle: scan yaw samples, take those whose time lies in a span where all
  // wheel samples around it are zero (the drive phase is 1..3 s exclusive).
  double sum = 0.0;
  int count = 0;
  for (const auto& s : log.samples(Channel::YawRate)) {
    if (s.t_us <= 1000000 || s.t_us >= 3000000) {
      sum += s.value;
      ++count;
    }
  }
  REQUIRE(count >= 50);
  const YawOffset offset = calibrate_yaw_offset(log);
  CHECK(offset.sample_count == count);
  CHECK(offset.offset == doctest::Approx(sum / count).epsilon(1e-12));
}

TEST_CASE("latest-interval scope uses only the most recent standstill") {
  SignalLog log;
  auto standing = [](int t_ms) { return t_ms <= 1000 || t_ms >= 3000; };
  for (int t_ms = 0; t_ms <= 4000; t_ms += 20) {
    for (Wheel w : kWheels) {
      log.append({t_ms * 1000, wheel_speed_channel(w), standing(t_ms) ? 0.0 : 2.0});
    }
  }
  for (int t_ms = 5; t_ms <= 4000; t_ms += 15) {
    const double value = t_ms <= 1000 ? 0.01 : (t_ms >= 3000 ? 0.02 : 0.5);
    log.append({t_ms * 1000, Channel::YawRate, value});
  }
  log.finalize();

  StandstillConfig all;
  const YawOffset merged = calibrate_yaw_offset(log, all);
  CHECK(merged.offset > 0.01);
  CHECK(merged.offset < 0.02);

  StandstillConfig latest;
  latest.scope = StandstillConfig::Scope::LatestInterval;
  const YawOffset recent = calibrate_yaw_offset(log, latest);
  CHECK(recent.offset == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(recent.sample_count < merged.sample_count);
}

TEST_CASE("served yaw values average to zero over standstill after calibration") {
  SignalStore store(two_standstill_log(0.0123));
  store.calibrate();
  const auto intervals = standstill_intervals(store.log());
  REQUIRE(!intervals.empty());
  double sum = 0.0;
  int count = 0;
  for (const auto& [lo, hi] : intervals) {
    for (const auto& s : store.samples_in_range(Channel::YawRate, lo, hi)) {
      sum += s.value;
      ++count;
    }
  }
  REQUIRE(count > 0);
  CHECK(std::abs(sum / count) < 1e-12);
}

TEST_CASE("ingest-serialize-ingest round-trips exactly") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> value_dist(-10.0, 10.0);
  SignalLog log;
  for (int i = 0; i < 500; ++i) {
    log.append({i * 777, Channel::YawRate, value_dist(rng)});
    log.append({i * 777 + 13, Channel::WheelSpeedRR, value_dist(rng)});
  }
  log.finalize();

  std::ostringstream first;
  serialize_log(first, log);
  std::istringstream reread(first.str());
  const SignalLog log2 = ingest_log(reread);

  CHECK(log2.samples(Channel::YawRate) == log.samples(Channel::YawRate));
  CHECK(log2.samples(Channel::WheelSpeedRR) == log.samples(Channel::WheelSpeedRR));

  std::ostringstream second;
  serialize_log(second, log2);
  CHECK(first.str() == second.str());
}
