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

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "odo/errors.hpp"
#include "odo/estimator.hpp"
#include "odo/metrics.hpp"
#include "odo/simulator.hpp"
#include "odo/signal_log.hpp"
#include "odo/trajectory.hpp"
#include "odo/vehicle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;   // runtime / data errors
constexpr int kExitUsage = 2;  // usage / spec errors

struct UsageError : odo::Error {
  using odo::Error::Error;
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw odo::Error("cannot write " + path);
  return out;
}

odo::SignalLog read_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw odo::Error("cannot open log file: " + path);
  return odo::ingest_log(in);
}

odo::Trajectory read_traj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw odo::Error("cannot open trajectory file: " + path);
  return odo::read_trajectory_csv(in);
}

std::string geojson_path(const std::string& csv_path) {
  const auto dot = csv_path.rfind('.');
  const std::string base = dot == std::string::npos ? csv_path : csv_path.substr(0, dot);
  return base + ".geojson";
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string scenario_file;
  std::string canned;
  std::string geometry_file;
  std::string out_log = "signals.csv";
  std::string out_truth = "truth.csv";
  std::string out_sweep = "load_sweep.csv";
  std::int64_t truth_dt_us = 20000;
  std::optional<std::uint64_t> seed;
};

int run_load_sweep(const SimulateArgs& args, const odo::VehicleGeometry& geom) {
  const auto configs = odo::load_sweep(odo::LoadSpec{});
  auto out = open_output(args.out_sweep);
  out << "index,mass_kg,x_m,y_m,h_rl,h_rr,h_fl,h_fr\n";
  int clamped = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const auto result = odo::simulate_load(configs[i], geom);
    if (result.clamped) ++clamped;
    char buf[256];
    const int n = std::snprintf(buf, sizeof(buf), "%zu,%.1f,%.2f,%.2f,%.9f,%.9f,%.9f,%.9f\n", i,
                                configs[i].mass_kg, configs[i].position.x(),
                                configs[i].position.y(), result.frame.heights[0],
                                result.frame.heights[1], result.frame.heights[2],
                                result.frame.heights[3]);
    out.write(buf, n);
  }
  if (clamped > 0) {
    std::cerr << "warning: " << clamped << " load positions clamped into the wheel rectangle\n";
  }
  std::cout << "wrote " << configs.size() << " load configurations to " << args.out_sweep << "\n";
  return kExitOk;
}

int cmd_simulate(const SimulateArgs& args) {
  odo::VehicleGeometry geom;
  if (!args.geometry_file.empty()) geom = odo::load_geometry(args.geometry_file);

  if (args.canned == "load-sweep") return run_load_sweep(args, geom);

  odo::ManoeuvreSpec spec;
  if (!args.canned.empty()) {
    if (args.canned != "figure8") throw UsageError("unknown canned scenario: " + args.canned);
    spec = odo::figure_eight_scenario();
  } else if (!args.scenario_file.empty()) {
    try {
      spec = odo::load_scenario(args.scenario_file);
    } catch (const odo::Error& e) {
      throw UsageError(e.what());
    }
  } else {
    throw UsageError("simulate needs --scenario or --canned");
  }
  if (args.seed) spec.seed = *args.seed;

  const odo::SignalLog log = odo::synthesize_signals(spec, geom);
  const odo::Trajectory truth = odo::generate_ground_truth(spec, geom, args.truth_dt_us);

  auto log_out = open_output(args.out_log);
  odo::serialize_log(log_out, log);
  auto truth_out = open_output(args.out_truth);
  odo::write_trajectory_csv(truth_out, truth);
  std::cout << "wrote " << log.total_samples() << " samples to " << args.out_log << " and "
            << truth.size() << " poses to " << args.out_truth << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
  std::string log_file;
  std::string geometry_file;
  std::string model = "proposed";
  std::string out = "trajectory.csv";
  std::string out_sensor;
  std::string extrinsics_file;
  std::string reference_plane_file;
  std::string frames_file;
  double window_ms = 200.0;
  double slice_us = 500.0;
  double frame_ms = 33.0;
  double standstill_epsilon = 0.0;
  bool strict_paper_eq3 = false;
  bool no_yaw_calib = false;
};

std::vector<std::int64_t> read_frames(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw odo::Error("cannot open frames file: " + path);
  std::vector<std::int64_t> frames;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string tok;
    if (!(ss >> tok) || tok.front() == '#') continue;
    try {
      frames.push_back(std::stoll(tok));
    } catch (...) {
      throw odo::ParseError("bad frame timestamp `" + tok + "`", line_no);
    }
  }
  return frames;
}

odo::EstimatorConfig make_config(const EstimateArgs& args) {
  odo::EstimatorConfig cfg;
  const auto model = odo::model_from_name(args.model);
  if (!model) throw UsageError("unknown model: " + args.model);
  cfg.model = *model;
  cfg.window_us = static_cast<std::int64_t>(args.window_ms * 1000.0);
  cfg.frame_period_us = static_cast<std::int64_t>(args.frame_ms * 1000.0);
  cfg.integrator.slice_us = static_cast<std::int64_t>(args.slice_us);
  cfg.integrator.division_form_heading = args.strict_paper_eq3;
  cfg.calibrate_yaw = !args.no_yaw_calib;
  cfg.standstill.wheel_speed_epsilon = args.standstill_epsilon;
  if (!args.frames_file.empty()) cfg.frame_times_us = read_frames(args.frames_file);
  return cfg;
}

void write_sensor_poses(std::ostream& out, const std::vector<odo::TimedSensorPose>& poses) {
  out << "timestamp_us,x_m,y_m,z_m,r00,r01,r02,r10,r11,r12,r20,r21,r22\n";
  for (const auto& sp : poses) {
    char buf[512];
    const auto& r = sp.pose.rotation;
    const auto& p = sp.pose.position;
    const int n = std::snprintf(
        buf, sizeof(buf),
        "%lld,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f\n",
        static_cast<long long>(sp.t_us), p.x(), p.y(), p.z(), r(0, 0), r(0, 1), r(0, 2), r(1, 0),
        r(1, 1), r(1, 2), r(2, 0), r(2, 1), r(2, 2));
    out.write(buf, n);
  }
}

int cmd_estimate(const EstimateArgs& args) {
  const odo::SignalLog log = read_log(args.log_file);
  odo::VehicleGeometry geom;
  if (!args.geometry_file.empty()) geom = odo::load_geometry(args.geometry_file);
  const odo::EstimatorConfig cfg = make_config(args);

  std::optional<odo::SensorExtrinsics> ext;
  std::optional<odo::ReferencePlane> ref;
  if (!args.extrinsics_file.empty()) ext = odo::load_extrinsics(args.extrinsics_file);
  if (!args.reference_plane_file.empty()) ref = odo::load_reference_plane(args.reference_plane_file);
  if (ext.has_value() != ref.has_value()) {
    throw UsageError("sensor-pose output needs both --extrinsics and --reference-plane");
  }

  const odo::EstimateResult result = odo::estimate(log, geom, cfg, ext, ref);

  auto out = open_output(args.out);
  odo::write_trajectory_csv(out, result.trajectory);
  auto geo = open_output(geojson_path(args.out));
  odo::write_trajectory_geojson(geo, result.trajectory);

  if (!result.sensor_poses.empty()) {
    const std::string sensor_path =
        args.out_sensor.empty() ? geojson_path(args.out) + ".sensor.csv" : args.out_sensor;
    auto sensor_out = open_output(sensor_path);
    write_sensor_poses(sensor_out, result.sensor_poses);
  }
  if (result.yaw_offset) {
    std::cout << "yaw offset " << result.yaw_offset->offset << " rad/s from "
              << result.yaw_offset->sample_count << " standstill samples\n";
  }
  std::cout << "wrote " << result.trajectory.size() << " poses to " << args.out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string est_file;
  std::string ref_file;
  std::string log_file;
  std::string geometry_file;
  std::string model_label = "proposed";
  std::string name = "trajectory";
  std::string out;
  bool all_models = false;
  bool strict_denominator = false;
  EstimateArgs estimate;  // reused for --all-models runs
};

int cmd_evaluate(const EvaluateArgs& args) {
  const odo::Trajectory ref = read_traj(args.ref_file);
  odo::EvaluateOptions opts;
  opts.paired_denominator = args.strict_denominator;

  std::ostringstream rows;
  odo::write_report_header(rows);
  if (args.all_models) {
    if (args.log_file.empty()) throw UsageError("--all-models needs --log");
    const odo::SignalLog log = read_log(args.log_file);
    odo::VehicleGeometry geom;
    if (!args.geometry_file.empty()) geom = odo::load_geometry(args.geometry_file);
    for (auto model : {odo::OdometryModel::Proposed, odo::OdometryModel::TwoTrack,
                       odo::OdometryModel::OneTrack, odo::OdometryModel::YawRate}) {
      EstimateArgs ea = args.estimate;
      ea.model = odo::model_name(model);
      const odo::EstimatorConfig cfg = make_config(ea);
      const auto result = odo::estimate(log, geom, cfg);
      odo::write_report_row(
          rows, odo::evaluate(result.trajectory, ref, odo::model_name(model), args.name, opts));
    }
  } else {
    const odo::Trajectory est = read_traj(args.est_file);
    odo::write_report_row(rows,
                          odo::evaluate(est, ref, args.model_label, args.name, opts));
  }

  if (args.out.empty()) {
    std::cout << rows.str();
  } else {
    open_output(args.out) << rows.str();
  }
  return kExitOk;
}

// ------------------------------------------------------- calibrate-suspension

struct CalibrateArgs {
  std::string log_file;
  std::string geometry_file;
  std::string out = "reference_plane.json";
  std::int64_t from_us = 0;
  std::int64_t to_us = 0;
};

int cmd_calibrate_suspension(const CalibrateArgs& args) {
  const odo::SignalLog log = read_log(args.log_file);
  odo::VehicleGeometry geom;
  if (!args.geometry_file.empty()) geom = odo::load_geometry(args.geometry_file);

  std::int64_t from = args.from_us;
  std::int64_t to = args.to_us;
  if (to <= from) {
    const auto first = log.first_timestamp();
    const auto last = log.last_timestamp();
    if (!first || !last) throw odo::Error("log is empty");
    from = *first;
    to = *last;
  }

  odo::SuspensionFrame frame;
  frame.t_us = to;
  for (odo::Wheel w : odo::kWheels) {
    const auto samples = odo::samples_in_range(log, odo::susp_height_channel(w), from, to);
    if (samples.empty()) {
      throw odo::Error("no susp_height samples for wheel index " + std::to_string(w) +
                       " in the selected interval");
    }
    double sum = 0.0;
    for (const auto& s : samples) sum += s.value;
    frame.heights[w] = sum / static_cast<double>(samples.size());
  }
  const odo::ReferencePlane ref = odo::make_reference_plane(frame, geom);
  odo::save_reference_plane(args.out, ref, geom);
  std::cout << "wrote reference plane to " << args.out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- report

int cmd_report(const std::vector<std::string>& inputs, const std::string& out_path) {
  std::ostringstream merged;
  odo::write_report_header(merged);
  std::string expected_header;
  {
    std::ostringstream h;
    odo::write_report_header(h);
    expected_header = h.str();
    if (!expected_header.empty() && expected_header.back() == '\n') expected_header.pop_back();
  }
  for (const auto& path : inputs) {
    std::ifstream in(path);
    if (!in) throw odo::Error("cannot open report file: " + path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (line == expected_header) continue;
      if (std::count(line.begin(), line.end(), ',') != 7) {
        throw odo::ParseError("report row in " + path + " does not have 8 columns", line_no);
      }
      merged << line << '\n';
    }
  }
  if (out_path.empty()) {
    std::cout << merged.str();
  } else {
    open_output(out_path) << merged.str();
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2.5D wheel odometry: simulate, estimate and evaluate vehicle trajectories"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Synthesize a signal log and ground truth");
  simulate->add_option("--scenario", sim.scenario_file, "Scenario JSON file");
  simulate->add_option("--canned", sim.canned, "Canned scenario: figure8 or load-sweep");
  simulate->add_option("--geometry", sim.geometry_file, "Vehicle geometry JSON");
  simulate->add_option("--out-log", sim.out_log, "Signal log CSV output");
  simulate->add_option("--out-truth", sim.out_truth, "Ground-truth trajectory CSV output");
  simulate->add_option("--out-sweep", sim.out_sweep, "Load-sweep CSV output");
  simulate->add_option("--truth-dt-us", sim.truth_dt_us, "Ground-truth emission period");
  std::uint64_t seed_value = 0;
  auto* seed_opt = simulate->add_option("--seed", seed_value, "Override the scenario seed");

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Run an odometry model over a signal log");
  estimate->add_option("--log", est.log_file, "Signal log CSV")->required();
  estimate->add_option("--geometry", est.geometry_file, "Vehicle geometry JSON");
  estimate->add_option("--model", est.model, "proposed|two_track|one_track|yaw_rate");
  estimate->add_option("--out", est.out, "Trajectory CSV output");
  estimate->add_option("--out-sensor", est.out_sensor, "World sensor-pose CSV output");
  estimate->add_option("--extrinsics", est.extrinsics_file, "Sensor extrinsics JSON");
  estimate->add_option("--reference-plane", est.reference_plane_file,
                       "Suspension reference plane JSON");
  estimate->add_option("--frames", est.frames_file, "Frame timestamp file (us per line)");
  estimate->add_option("--window-ms", est.window_ms, "Quadratic-fit window length");
  estimate->add_option("--slice-us", est.slice_us, "Fine integration slice");
  estimate->add_option("--frame-ms", est.frame_ms, "Frame cadence");
  estimate->add_option("--standstill-epsilon", est.standstill_epsilon,
                       "Wheel-speed standstill threshold for yaw calibration");
  estimate->add_flag("--strict-paper-eq3", est.strict_paper_eq3,
                     "Use the printed division form of the heading update");
  estimate->add_flag("--no-yaw-calib", est.no_yaw_calib, "Skip yaw-offset calibration");

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Compare trajectories and report error metrics");
  evaluate->add_option("--est", ev.est_file, "Estimated trajectory CSV");
  evaluate->add_option("--ref", ev.ref_file, "Reference trajectory CSV")->required();
  evaluate->add_option("--log", ev.log_file, "Signal log (for --all-models)");
  evaluate->add_option("--geometry", ev.geometry_file, "Vehicle geometry JSON");
  evaluate->add_option("--model", ev.model_label, "Model label for the report row");
  evaluate->add_option("--name", ev.name, "Trajectory label for the report row");
  evaluate->add_option("--out", ev.out, "Report CSV output (stdout when omitted)");
  evaluate->add_flag("--all-models", ev.all_models, "Estimate and evaluate every model");
  evaluate->add_flag("--strict-paper-denominator", ev.strict_denominator,
                     "Use the per-sample-pair denominator (needs equal sizes)");
  evaluate->add_option("--window-ms", ev.estimate.window_ms, "Quadratic-fit window length");
  evaluate->add_option("--slice-us", ev.estimate.slice_us, "Fine integration slice");
  evaluate->add_option("--frame-ms", ev.estimate.frame_ms, "Frame cadence");

  CalibrateArgs cal;
  auto* calibrate =
      app.add_subcommand("calibrate-suspension", "Capture the settled suspension reference plane");
  calibrate->add_option("--log", cal.log_file, "Signal log CSV")->required();
  calibrate->add_option("--geometry", cal.geometry_file, "Vehicle geometry JSON");
  calibrate->add_option("--from-us", cal.from_us, "Standstill interval start");
  calibrate->add_option("--to-us", cal.to_us, "Standstill interval end");
  calibrate->add_option("--out", cal.out, "Reference plane JSON output");

  std::vector<std::string> report_inputs;
  std::string report_out;
  auto* report = app.add_subcommand("report", "Merge evaluate outputs into one report table");
  report->add_option("files", report_inputs, "Report CSV files")->required();
  report->add_option("--out", report_out, "Merged CSV output (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) {
      if (*seed_opt) sim.seed = seed_value;
      return cmd_simulate(sim);
    }
    if (*estimate) return cmd_estimate(est);
    if (*evaluate) {
      ev.estimate.log_file = ev.log_file;
      ev.estimate.geometry_file = ev.geometry_file;
      if (!ev.all_models && ev.est_file.empty()) throw UsageError("evaluate needs --est");
      return cmd_evaluate(ev);
    }
    if (*calibrate) return cmd_calibrate_suspension(cal);
    if (*report) return cmd_report(report_inputs, report_out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const odo::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
