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

#include "odo/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include <json.hpp>

#include "odo/errors.hpp"

namespace odo {

namespace {

constexpr double kGravity = 9.80665;        // m/s^2
constexpr double kFineStep = 1e-5;          // 10 us substep for varying pieces
constexpr double kArcStraight = 1e-12;      // rad, exact-arc straight cutoff

double segment_speed(const ManoeuvreSegment& s, double t) {
  return s.v0 + s.accel * t + 0.5 * s.jerk * t * t;
}

double segment_curvature(const ManoeuvreSegment& s, double t) {
  return s.kappa0 + s.kappa_dot * t;
}

bool segment_constant(const ManoeuvreSegment& s) {
  return s.accel == 0.0 && s.jerk == 0.0 && s.kappa_dot == 0.0;
}

std::mt19937_64 channel_rng(std::uint64_t seed, Channel c) {
  return std::mt19937_64(seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(c) + 1)));
}

}  // namespace

ManoeuvreProfile::ManoeuvreProfile(const ManoeuvreSpec& spec, const VehicleGeometry& geom)
    : geom_(geom) {
  double t = 0.0;
  if (spec.lead_in_s > 0.0) {
    ManoeuvreSegment lead;
    lead.duration_s = spec.lead_in_s;
    lead.kappa0 = spec.segments.empty() ? 0.0 : spec.segments.front().kappa0;
    pieces_.push_back({t, lead});
    t += spec.lead_in_s;
  }
  for (const auto& seg : spec.segments) {
    if (seg.duration_s <= 0.0) throw Error("segment duration must be positive");
    pieces_.push_back({t, seg});
    t += seg.duration_s;
  }
  if (pieces_.empty()) throw Error("scenario has no segments");
  duration_s_ = t;
}

const ManoeuvreProfile::Piece& ManoeuvreProfile::piece_at(double t_s) const {
  for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
    if (t_s >= it->start_s) return *it;
  }
  return pieces_.front();
}

double ManoeuvreProfile::speed(double t_s) const {
  const Piece& p = piece_at(t_s);
  return segment_speed(p.seg, t_s - p.start_s);
}

double ManoeuvreProfile::curvature(double t_s) const {
  const Piece& p = piece_at(t_s);
  return segment_curvature(p.seg, t_s - p.start_s);
}

double ManoeuvreProfile::front_wheel_angle(double t_s) const {
  return std::atan(geom_.wheelbase * curvature(t_s));
}

double ManoeuvreProfile::wheel_speed(double t_s, Wheel wheel) const {
  const double v = speed(t_s);
  const double kappa = curvature(t_s);
  const Eigen::Vector2d w = geom_.wheel_position(wheel);
  const double kx = kappa * w.x();
  const double ky = 1.0 - kappa * w.y();
  return std::abs(v) * std::sqrt(kx * kx + ky * ky);
}

bool ManoeuvreProfile::constant_on(double t1_s, double t2_s) const {
  const Piece& a = piece_at(t1_s);
  const Piece& b = piece_at(t2_s);
  return &a == &b && segment_constant(a.seg);
}

namespace {

struct MotionState {
  Eigen::Vector2d position{0.0, 0.0};
  double heading = 0.0;
};

void advance_exact_arc(MotionState& s, double v, double kappa, double dt) {
  const double dtheta = v * kappa * dt;
  if (std::abs(dtheta) < kArcStraight) {
    s.position += v * dt * Eigen::Vector2d{std::cos(s.heading), std::sin(s.heading)};
    s.heading += dtheta;
    return;
  }
  const double r = 1.0 / kappa;
  const Eigen::Vector2d local{r * std::sin(dtheta), r * (1.0 - std::cos(dtheta))};
  const double c = std::cos(s.heading);
  const double sn = std::sin(s.heading);
  s.position += Eigen::Vector2d{c * local.x() - sn * local.y(), sn * local.x() + c * local.y()};
  s.heading += dtheta;
}

void advance_trapezoid(const ManoeuvreProfile& profile, MotionState& s, double t1, double t2) {
  const int n = std::max(1, static_cast<int>(std::ceil((t2 - t1) / kFineStep)));
  const double h = (t2 - t1) / n;
  double ta = t1;
  double va = profile.speed(ta);
  double wa = profile.yaw_rate(ta);
  for (int k = 0; k < n; ++k) {
    const double tb = t1 + (k + 1) * h;
    const double vb = profile.speed(tb);
    const double wb = profile.yaw_rate(tb);
    const double theta_b = s.heading + 0.5 * (wa + wb) * h;
    s.position += 0.5 * h *
                  (va * Eigen::Vector2d{std::cos(s.heading), std::sin(s.heading)} +
                   vb * Eigen::Vector2d{std::cos(theta_b), std::sin(theta_b)});
    s.heading = theta_b;
    ta = tb;
    va = vb;
    wa = wb;
  }
}

/// Advances the unicycle state from t1 to t2, splitting at piece boundaries.
void advance(const ManoeuvreProfile& profile, const std::vector<double>& boundaries,
             MotionState& s, double t1, double t2) {
  double a = t1;
  for (double b : boundaries) {
    if (b <= a + 1e-12 || b >= t2 - 1e-12) continue;
    if (profile.constant_on(a, b)) {
      advance_exact_arc(s, profile.speed(a), profile.curvature(a), b - a);
    } else {
      advance_trapezoid(profile, s, a, b);
    }
    a = b;
  }
  if (t2 > a) {
    if (profile.constant_on(a, t2)) {
      advance_exact_arc(s, profile.speed(a), profile.curvature(a), t2 - a);
    } else {
      advance_trapezoid(profile, s, a, t2);
    }
  }
}

std::vector<double> piece_boundaries(const ManoeuvreSpec& spec) {
  std::vector<double> b;
  double t = spec.lead_in_s > 0.0 ? spec.lead_in_s : 0.0;
  if (spec.lead_in_s > 0.0) b.push_back(t);
  for (const auto& seg : spec.segments) {
    t += seg.duration_s;
    b.push_back(t);
  }
  return b;
}

double integrate_wheel_distance(const ManoeuvreProfile& profile,
                                const std::vector<double>& boundaries, Wheel wheel, double t1,
                                double t2) {
  double total = 0.0;
  double a = t1;
  auto piecewise = [&](double from, double to) {
    if (to <= from) return;
    if (profile.constant_on(from, to)) {
      total += profile.wheel_speed(from, wheel) * (to - from);
      return;
    }
    const int n = std::max(1, static_cast<int>(std::ceil((to - from) / kFineStep)));
    const double h = (to - from) / n;
    double sa = profile.wheel_speed(from, wheel);
    for (int k = 0; k < n; ++k) {
      const double sb = profile.wheel_speed(from + (k + 1) * h, wheel);
      total += 0.5 * (sa + sb) * h;
      sa = sb;
    }
  };
  for (double b : boundaries) {
    if (b <= a + 1e-12 || b >= t2 - 1e-12) continue;
    piecewise(a, b);
    a = b;
  }
  piecewise(a, t2);
  return total;
}

ChannelTiming timing_for(const ManoeuvreSpec& spec, Channel c) {
  if (auto it = spec.timing.find(c); it != spec.timing.end()) return it->second;
  ChannelTiming t;
  switch (c) {
    case Channel::YawRate:
      t.period_us = 20000;
      break;
    case Channel::FrontWheelAngle:
      t.period_us = 40000;
      break;
    default:
      if (is_tick_channel(c)) {
        t.period_us = 20000;
      } else if (is_dir_channel(c)) {
        t.period_us = 100000;
      } else if (c >= Channel::SuspHeightRL) {
        t.period_us = 50000;
      } else {
        t.period_us = 30000;  // wheel speeds
      }
      break;
  }
  return t;
}

double noise_for(const ManoeuvreSpec& spec, Channel c) {
  if (auto it = spec.noise_sigma.find(c); it != spec.noise_sigma.end()) return it->second;
  return 0.0;
}

/// Bus scaling: signals on CAN are integer-scaled by their message layout.
double quantize_for(const ManoeuvreSpec& spec, Channel c, double value) {
  const auto it = spec.quantization.find(c);
  if (it == spec.quantization.end() || it->second <= 0.0) return value;
  return std::round(value / it->second) * it->second;
}

std::vector<std::int64_t> sample_times(const ManoeuvreSpec& spec, Channel c,
                                       double duration_s) {
  ChannelTiming t = timing_for(spec, c);
  if (t.period_us <= 0) throw Error("channel period must be positive");
  std::int64_t phase = 0;
  if (t.phase_us) {
    phase = *t.phase_us;
  } else {
    auto rng = channel_rng(spec.seed * 0x100000001b3ULL + 17, c);
    phase = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(t.period_us));
  }
  std::vector<std::int64_t> times;
  const std::int64_t end = static_cast<std::int64_t>(duration_s * 1e6);
  for (std::int64_t ts = phase; ts <= end; ts += t.period_us) times.push_back(ts);
  return times;
}

}  // namespace

Trajectory generate_ground_truth(const ManoeuvreSpec& spec, const VehicleGeometry& geom,
                                 std::int64_t dt_us) {
  if (dt_us <= 0) throw Error("ground-truth emission step must be positive");
  const ManoeuvreProfile profile(spec, geom);
  const auto boundaries = piece_boundaries(spec);

  Trajectory traj;
  MotionState state;
  const std::int64_t end_us = static_cast<std::int64_t>(profile.duration_s() * 1e6);
  std::int64_t t_us = 0;
  traj.push_back({state.position, state.heading, 0});
  while (t_us + dt_us <= end_us) {
    const std::int64_t next = t_us + dt_us;
    advance(profile, boundaries, state, t_us * 1e-6, next * 1e-6);
    traj.push_back({state.position, normalize_angle(state.heading), next});
    t_us = next;
  }
  return traj;
}

SignalLog synthesize_signals(const ManoeuvreSpec& spec, const VehicleGeometry& geom) {
  const ManoeuvreProfile profile(spec, geom);
  const auto boundaries = piece_boundaries(spec);
  const double duration = profile.duration_s();
  SignalLog log;

  auto emit = [&](Channel c, auto&& value_at) {
    auto rng = channel_rng(spec.seed, c);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double sigma = noise_for(spec, c);
    for (std::int64_t ts : sample_times(spec, c, duration)) {
      double v = value_at(ts * 1e-6);
      if (sigma > 0.0) v += sigma * gauss(rng);
      log.append({ts, c, quantize_for(spec, c, v)});
    }
  };

  emit(Channel::YawRate,
       [&](double t) { return profile.yaw_rate(t) + spec.yaw_rate_bias; });

  for (Wheel w : kWheels) {
    // Hall sensors emit no pulses at standstill, so a stopped wheel reports
    // an exact zero regardless of the noise level.
    auto rng = channel_rng(spec.seed, wheel_speed_channel(w));
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double sigma = noise_for(spec, wheel_speed_channel(w));
    for (std::int64_t ts : sample_times(spec, wheel_speed_channel(w), duration)) {
      const double truth = profile.wheel_speed(ts * 1e-6, w);
      double v = 0.0;
      if (truth != 0.0) {
        v = truth;
        if (sigma > 0.0) v = std::max(0.0, v + sigma * gauss(rng));
        v = quantize_for(spec, wheel_speed_channel(w), v);
      }
      log.append({ts, wheel_speed_channel(w), v});
    }

    emit(wheel_dir_channel(w), [&](double t) {
      const double v = profile.speed(t);
      return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
    });

    // Tick counters quantize the accumulated unsigned wheel distance.
    double dist = 0.0;
    double last_t = 0.0;
    for (std::int64_t ts : sample_times(spec, wheel_tick_channel(w), duration)) {
      const double t = ts * 1e-6;
      dist += integrate_wheel_distance(profile, boundaries, w, last_t, t);
      last_t = t;
      const double count = std::floor(dist / geom.wheel_circumference * geom.ticks_per_rev);
      log.append({ts, wheel_tick_channel(w), count});
    }
  }

  emit(Channel::FrontWheelAngle,
       [&](double t) { return profile.front_wheel_angle(t) + spec.ackermann_error; });

  if (spec.load) {
    const LoadResult lr = simulate_load(*spec.load, geom);
    for (Wheel w : kWheels) {
      emit(susp_height_channel(w), [&](double) { return lr.frame.heights[w]; });
    }
  }

  log.finalize();
  return log;
}

LoadResult simulate_load(const LoadSpec& load, const VehicleGeometry& geom) {
  if (load.mass_kg < 0.0) throw Error("load mass must be non-negative");
  for (double k : load.stiffness) {
    if (k <= 0.0) throw Error("corner stiffness must be positive");
  }

  LoadResult out;
  const double half_w = geom.track_width / 2.0;
  const double x = std::clamp(load.position.x(), 0.0, geom.wheelbase);
  const double y = std::clamp(load.position.y(), -half_w, half_w);
  out.clamped = x != load.position.x() || y != load.position.y();

  const double front_share = x / geom.wheelbase;
  const double left_share = (y + half_w) / geom.track_width;
  const double weight = load.mass_kg * kGravity;

  out.corner_forces[kRearLeft] = weight * (1.0 - front_share) * left_share;
  out.corner_forces[kRearRight] = weight * (1.0 - front_share) * (1.0 - left_share);
  out.corner_forces[kFrontLeft] = weight * front_share * left_share;
  out.corner_forces[kFrontRight] = weight * front_share * (1.0 - left_share);

  for (int i = 0; i < 4; ++i) {
    out.frame.heights[i] = load.unloaded_heights[i] - out.corner_forces[i] / load.stiffness[i];
  }
  return out;
}

ManoeuvreSpec figure_eight_scenario() {
  ManoeuvreSpec spec;
  spec.seed = 42;
  spec.lead_in_s = 3.0;  // enough standstill yaw samples for offset calibration
  spec.yaw_rate_bias = 0.02;
  spec.ackermann_error = 0.5 * std::numbers::pi / 180.0;

  // Two 8 m loops whose curvature wobbles about its nominal value in four
  // quarters, so the yaw rate keeps a sustained slope inside the loops. The
  // wobble integrates to zero over a loop and leaves the 2 pi turn intact.
  const double kappa = 0.125;
  const double v = 2.0;
  const double wobble = 0.015;
  const double quarter = 2.0 * std::numbers::pi / (v * kappa) / 4.0;
  spec.segments.push_back({2.0, 0.0, 1.0, 0.0, 0.0, 0.0});  // accelerate to 2 m/s
  spec.segments.push_back({1.0, v, 0.0, 0.0, 0.0, kappa});  // wind into the left loop
  auto add_loop = [&](double sign) {
    const double k0 = sign * kappa;
    spec.segments.push_back({quarter, v, 0.0, 0.0, k0, sign * wobble});
    spec.segments.push_back({quarter, v, 0.0, 0.0, k0 + sign * wobble * quarter, -sign * wobble});
    spec.segments.push_back({quarter, v, 0.0, 0.0, k0, -sign * wobble});
    spec.segments.push_back({quarter, v, 0.0, 0.0, k0 - sign * wobble * quarter, sign * wobble});
  };
  add_loop(1.0);
  spec.segments.push_back({2.0, v, 0.0, 0.0, kappa, -kappa});  // cross over
  add_loop(-1.0);
  spec.segments.push_back({1.0, v, 0.0, 0.0, -kappa, kappa});  // unwind
  spec.segments.push_back({2.0, v, -1.0, 0.0, 0.0, 0.0});      // brake to rest

  spec.timing[Channel::YawRate] = {40000, std::nullopt};  // coarse end of 20-40 ms
  for (Wheel w : kWheels) {
    spec.timing[wheel_speed_channel(w)] = {27000, std::nullopt};
    spec.timing[wheel_tick_channel(w)] = {23000, std::nullopt};
    spec.timing[wheel_dir_channel(w)] = {110000, std::nullopt};
    spec.timing[susp_height_channel(w)] = {60000, std::nullopt};
  }
  spec.timing[Channel::FrontWheelAngle] = {37000, std::nullopt};

  spec.noise_sigma[Channel::YawRate] = 0.0003;
  for (Wheel w : kWheels) spec.noise_sigma[wheel_speed_channel(w)] = 0.03;
  spec.noise_sigma[Channel::FrontWheelAngle] = 0.002;

  spec.load = LoadSpec{};
  return spec;
}

ManoeuvreSpec circle_scenario(double radius_m, double speed_mps, double revolutions,
                              std::uint64_t seed) {
  if (radius_m == 0.0 || speed_mps <= 0.0 || revolutions <= 0.0) {
    throw Error("circle scenario needs nonzero radius, positive speed and revolutions");
  }
  ManoeuvreSpec spec;
  spec.seed = seed;
  spec.lead_in_s = 0.0;  // already on the circle at t = 0
  const double kappa = 1.0 / radius_m;
  const double duration = revolutions * 2.0 * std::numbers::pi * std::abs(radius_m) / speed_mps;
  spec.segments = {{duration, speed_mps, 0.0, 0.0, kappa, 0.0}};
  return spec;
}

std::vector<LoadSpec> load_sweep(const LoadSpec& base) {
  std::vector<LoadSpec> configs;
  LoadSpec unloaded = base;
  unloaded.mass_kg = 0.0;
  unloaded.position = {0.0, 0.0};
  configs.push_back(unloaded);
  for (int mass = 50; mass <= 300; mass += 50) {
    for (int xi = 0; xi <= 6; ++xi) {
      for (int yi = 0; yi <= 2; ++yi) {
        LoadSpec l = base;
        l.mass_kg = mass;
        l.position = {0.5 * xi, 0.5 * yi};
        configs.push_back(l);
      }
    }
  }
  return configs;  // 1 + 6*7*3 = 127
}

namespace {

const std::map<std::string, std::vector<Channel>>& channel_groups() {
  static const std::map<std::string, std::vector<Channel>> groups = [] {
    std::map<std::string, std::vector<Channel>> g;
    g["yaw_rate"] = {Channel::YawRate};
    g["front_wheel_angle"] = {Channel::FrontWheelAngle};
    g["wheel_speed"] = {};
    g["wheel_tick"] = {};
    g["wheel_dir"] = {};
    g["susp_height"] = {};
    for (Wheel w : kWheels) {
      g["wheel_speed"].push_back(wheel_speed_channel(w));
      g["wheel_tick"].push_back(wheel_tick_channel(w));
      g["wheel_dir"].push_back(wheel_dir_channel(w));
      g["susp_height"].push_back(susp_height_channel(w));
    }
    return g;
  }();
  return groups;
}

std::vector<Channel> channels_for_key(const std::string& key) {
  if (auto c = channel_from_name(key)) return {*c};
  if (auto it = channel_groups().find(key); it != channel_groups().end()) return it->second;
  throw Error("unknown channel or group `" + key + "` in scenario");
}

LoadSpec load_spec_from_json(const nlohmann::json& j) {
  LoadSpec l;
  l.mass_kg = j.value("mass_kg", 0.0);
  if (j.contains("position_m")) {
    l.position = {j["position_m"].at(0).get<double>(), j["position_m"].at(1).get<double>()};
  }
  if (j.contains("stiffness_n_per_m")) {
    for (int i = 0; i < 4; ++i) l.stiffness[i] = j["stiffness_n_per_m"].at(i).get<double>();
  }
  if (j.contains("unloaded_heights_m")) {
    for (int i = 0; i < 4; ++i) l.unloaded_heights[i] = j["unloaded_heights_m"].at(i).get<double>();
  }
  return l;
}

nlohmann::json load_spec_to_json(const LoadSpec& l) {
  return {
      {"mass_kg", l.mass_kg},
      {"position_m", {l.position.x(), l.position.y()}},
      {"stiffness_n_per_m", l.stiffness},
      {"unloaded_heights_m", l.unloaded_heights},
  };
}

}  // namespace

ManoeuvreSpec load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("bad scenario JSON in " + path + ": " + e.what());
  }

  ManoeuvreSpec spec;
  spec.seed = j.value("seed", 0ULL);
  spec.lead_in_s = j.value("lead_in_s", 1.0);
  spec.yaw_rate_bias = j.value("yaw_rate_bias", 0.0);
  spec.ackermann_error = j.value("ackermann_error_rad", 0.0);
  if (!j.contains("segments") || !j["segments"].is_array() || j["segments"].empty()) {
    throw Error("scenario needs a non-empty `segments` array");
  }
  for (const auto& js : j["segments"]) {
    ManoeuvreSegment s;
    s.duration_s = js.at("duration_s").get<double>();
    s.v0 = js.value("v0", 0.0);
    s.accel = js.value("accel", 0.0);
    s.jerk = js.value("jerk", 0.0);
    s.kappa0 = js.value("kappa0", 0.0);
    s.kappa_dot = js.value("kappa_dot", 0.0);
    spec.segments.push_back(s);
  }
  if (j.contains("timing")) {
    for (const auto& [key, jt] : j["timing"].items()) {
      ChannelTiming t;
      t.period_us = jt.at("period_us").get<std::int64_t>();
      if (jt.contains("phase_us")) t.phase_us = jt["phase_us"].get<std::int64_t>();
      for (Channel c : channels_for_key(key)) spec.timing[c] = t;
    }
  }
  if (j.contains("noise")) {
    for (const auto& [key, sigma] : j["noise"].items()) {
      for (Channel c : channels_for_key(key)) spec.noise_sigma[c] = sigma.get<double>();
    }
  }
  if (j.contains("quantization")) {
    for (const auto& [key, step] : j["quantization"].items()) {
      for (Channel c : channels_for_key(key)) spec.quantization[c] = step.get<double>();
    }
  }
  if (j.contains("load")) spec.load = load_spec_from_json(j["load"]);
  return spec;
}

void save_scenario(const std::string& path, const ManoeuvreSpec& spec) {
  nlohmann::json segments = nlohmann::json::array();
  for (const auto& s : spec.segments) {
    segments.push_back({{"duration_s", s.duration_s},
                        {"v0", s.v0},
                        {"accel", s.accel},
                        {"jerk", s.jerk},
                        {"kappa0", s.kappa0},
                        {"kappa_dot", s.kappa_dot}});
  }
  nlohmann::json timing;
  for (const auto& [c, t] : spec.timing) {
    nlohmann::json jt{{"period_us", t.period_us}};
    if (t.phase_us) jt["phase_us"] = *t.phase_us;
    timing[std::string(channel_name(c))] = jt;
  }
  nlohmann::json noise;
  for (const auto& [c, sigma] : spec.noise_sigma) {
    noise[std::string(channel_name(c))] = sigma;
  }
  nlohmann::json quant;
  for (const auto& [c, step] : spec.quantization) {
    quant[std::string(channel_name(c))] = step;
  }
  nlohmann::json j{
      {"seed", spec.seed},
      {"lead_in_s", spec.lead_in_s},
      {"yaw_rate_bias", spec.yaw_rate_bias},
      {"ackermann_error_rad", spec.ackermann_error},
      {"segments", segments},
      {"timing", timing},
      {"noise", noise},
      {"quantization", quant},
  };
  if (spec.load) j["load"] = load_spec_to_json(*spec.load);
  std::ofstream out(path);
  if (!out) throw Error("cannot write scenario file: " + path);
  out << j.dump(2) << '\n';
}

}  // namespace odo
