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

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Geometry>

#include "odo/errors.hpp"
#include "odo/metrics.hpp"

using namespace odo;

namespace {

Trajectory line(std::initializer_list<std::pair<double, double>> points) {
  Trajectory t;
  std::int64_t ts = 0;
  for (const auto& [x, y] : points) {
    t.push_back({{x, y}, 0.0, ts});
    ts += 1000000;
  }
  return t;
}

/// Independent point-to-polyline oracle: golden-section search of the
/// unimodal per-segment distance, then the minimum over segments.
double oracle_point_to_polyline(const Eigen::Vector2d& p, const Trajectory& poly) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < poly.size(); ++i) {
    const Eigen::Vector2d a = poly[i - 1].position;
    const Eigen::Vector2d b = poly[i].position;
    auto dist = [&](double t) { return (p - (a + t * (b - a))).norm(); };
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 120; ++it) {
      const double m1 = hi - inv_phi * (hi - lo);
      const double m2 = lo + inv_phi * (hi - lo);
      if (dist(m1) < dist(m2)) {
        hi = m2;
      } else {
        lo = m1;
      }
    }
    best = std::min({best, dist(lo), dist(0.0), dist(1.0)});
  }
  return best;
}

}  // namespace

TEST_CASE("final position error in the reference heading frame") {
  SUBCASE("identical finals give zero") {
    const Trajectory t = line({{0, 0}, {10, 0}});
    const Eigen::Vector2d e = e_pos(t, t);
    CHECK(e.x() == doctest::Approx(0.0));
    CHECK(e.y() == doctest::Approx(0.0));
  }
  SUBCASE("zero reference heading keeps components") {
    Trajectory ref = line({{0, 0}, {10, 0}});
    Trajectory est = line({{0, 0}, {9.9, 0.2}});
    const Eigen::Vector2d e = e_pos(est, ref);
    CHECK(e.x() == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(e.y() == doctest::Approx(0.2).epsilon(1e-12));
  }
  SUBCASE("rotated reference matches a 2x2 matrix oracle") {
    Trajectory ref = line({{0, 0}, {10, 0}});
    ref.back().heading = std::numbers::pi / 2.0;
    Trajectory est = line({{0, 0}, {9.9, -0.2}});
    const Eigen::Vector2d diff = ref.back().position - est.back().position;  // (0.1, 0.2)
    const Eigen::Vector2d oracle =
        (Eigen::Rotation2Dd(ref.back().heading).toRotationMatrix() * diff).cwiseAbs();
    const Eigen::Vector2d e = e_pos(est, ref);
    CHECK(e.x() == doctest::Approx(oracle.x()).epsilon(1e-12));
    CHECK(e.y() == doctest::Approx(oracle.y()).epsilon(1e-12));
    CHECK(e.x() == doctest::Approx(0.2).epsilon(1e-12));  // components swap
    CHECK(e.y() == doctest::Approx(0.1).epsilon(1e-12));
  }
}

TEST_CASE("final heading error wraps into [0, pi]") {
  Trajectory ref = line({{0, 0}, {1, 0}});
  Trajectory est = line({{0, 0}, {1, 0}});
  SUBCASE("equal headings") { CHECK(e_alig(est, ref) == doctest::Approx(0.0)); }
  SUBCASE("plain difference") {
    ref.back().heading = 0.1;
    est.back().heading = -0.1;
    CHECK(e_alig(est, ref) == doctest::Approx(0.2).epsilon(1e-12));
  }
  SUBCASE("wrap-around difference") {
    ref.back().heading = 3.1;
    est.back().heading = -3.1;
    CHECK(e_alig(est, ref) ==
          doctest::Approx(2.0 * std::numbers::pi - 6.2).epsilon(1e-9));
    CHECK(e_alig(est, ref) == doctest::Approx(0.0831853).epsilon(1e-4));
  }
}

TEST_CASE("point-to-polyline distance handles feet and endpoints") {
  const Trajectory seg = line({{0, 0}, {2, 0}});
  CHECK(point_to_polyline({1.0, 1.0}, seg) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(point_to_polyline({3.0, 1.0}, seg) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(point_to_polyline({-1.0, 0.0}, seg) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("point-to-polyline equals the search oracle on random polylines") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  Trajectory poly;
  Eigen::Vector2d cursor{0.0, 0.0};
  for (int i = 0; i <= 100; ++i) {
    poly.push_back({cursor, 0.0, i * 1000});
    cursor += Eigen::Vector2d{0.3 + 0.05 * (rng() % 10), u(rng) * 0.05};
  }
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Vector2d p{u(rng) * 3.0, u(rng)};
    CHECK(point_to_polyline(p, poly) ==
          doctest::Approx(oracle_point_to_polyline(p, poly)).epsilon(1e-6));
  }
}

TEST_CASE("points on the polyline have zero distance, points off do not") {
  const Trajectory poly = line({{0, 0}, {2, 0}, {2, 3}});
  CHECK(point_to_polyline({1.0, 0.0}, poly) < 1e-12);
  CHECK(point_to_polyline({2.0, 2.0}, poly) < 1e-12);
  CHECK(point_to_polyline({2.0, 0.0}, poly) < 1e-12);
  CHECK(point_to_polyline({1.0, 0.5}, poly) > 0.4);
}

TEST_CASE("cumulative spread of identical trajectories is zero") {
  const Trajectory t = line({{0, 0}, {5, 0}, {10, 1}});
  CHECK(e_loc(t, t) == doctest::Approx(0.0));
}

TEST_CASE("parallel offset closed form gives 0.25") {
  // 50 samples at constant 0.5 m offset from a straight 100 m reference.
  Trajectory ref = line({{0, 0}, {100, 0}});
  Trajectory est;
  for (int i = 0; i < 50; ++i) {
    est.push_back({{1.0 + 2.0 * i, 0.5}, 0.0, i * 1000000});
  }
  CHECK(e_loc(est, ref) == doctest::Approx(50.0 * 0.5 / 100.0).epsilon(1e-9));
}

TEST_CASE("degenerate references are rejected") {
  const Trajectory est = line({{0, 0}, {1, 0}});
  Trajectory single;
  single.push_back({{0, 0}, 0.0, 0});
  CHECK_THROWS_AS(e_loc(est, single), DegenerateReference);
  const Trajectory stacked = line({{3, 3}, {3, 3}});
  CHECK_THROWS_AS(e_loc(est, stacked), DegenerateReference);
}

TEST_CASE("paired denominator form needs equal sizes") {
  const Trajectory ref = line({{0, 0}, {50, 0}, {100, 0}});
  Trajectory est = ref;
  for (auto& p : est) p.position.y() += 0.5;
  const double paired = e_loc_paired_denominator(est, ref);
  CHECK(paired == doctest::Approx(3.0 * 0.5 / (3.0 * 0.5)).epsilon(1e-12));
  const Trajectory shorter = line({{0, 0}, {100, 0}});
  CHECK_THROWS_AS(e_loc_paired_denominator(shorter, ref), Error);
}

TEST_CASE("spread error is invariant under joint rigid transforms") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Trajectory ref, est;
  for (int i = 0; i <= 60; ++i) {
    const double x = 0.5 * i;
    ref.push_back({{x, std::sin(0.2 * x)}, 0.0, i * 1000});
    est.push_back({{x, std::sin(0.2 * x) + 0.1 * u(rng)}, 0.0, i * 1000});
  }
  const double base = e_loc(est, ref);
  for (int trial = 0; trial < 10; ++trial) {
    const double angle = u(rng) * 3.0;
    const Eigen::Vector2d shift{u(rng) * 20.0, u(rng) * 20.0};
    auto moved = [&](const Trajectory& t) {
      Trajectory out = t;
      for (auto& p : out) {
        p.position = Eigen::Rotation2Dd(angle) * p.position + shift;
        p.heading = normalize_angle(p.heading + angle);
      }
      return out;
    };
    CHECK(e_loc(moved(est), moved(ref)) == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("velocity series is the finite difference of positions") {
  SUBCASE("single step") {
    Trajectory t;
    t.push_back({{0.0, 0.0}, 0.0, 0});
    t.push_back({{2.0, 0.0}, 0.0, 1000000});
    const auto v = velocity_series(t);
    REQUIRE(v.size() == 1);
    CHECK(v[0].x() == doctest::Approx(2.0));
    CHECK(v[0].y() == doctest::Approx(0.0));
  }
  SUBCASE("stationary trajectory") {
    Trajectory t;
    for (int i = 0; i < 5; ++i) t.push_back({{1.0, 1.0}, 0.0, i * 100000});
    for (const auto& v : velocity_series(t)) CHECK(v.norm() == doctest::Approx(0.0));
  }
  SUBCASE("circle speeds stay within the chord error bound") {
    const double r = 10.0, omega = 0.2;
    Trajectory t;
    for (int i = 0; i <= 100; ++i) {
      const double tt = 0.02 * i;
      t.push_back({{r * std::sin(omega * tt), r * (1.0 - std::cos(omega * tt))}, 0.0,
                   static_cast<std::int64_t>(tt * 1e6)});
    }
    for (const auto& v : velocity_series(t)) {
      CHECK(v.norm() == doctest::Approx(r * omega).epsilon(1e-3));
      // Chord closed form: |v| = 2 r sin(omega dt / 2) / dt.
      CHECK(v.norm() ==
            doctest::Approx(2.0 * r * std::sin(omega * 0.01) / 0.02).epsilon(1e-9));
    }
  }
  SUBCASE("duplicate timestamps are rejected") {
    Trajectory t;
    t.push_back({{0.0, 0.0}, 0.0, 1000});
    t.push_back({{1.0, 0.0}, 0.0, 1000});
    CHECK_THROWS_AS(velocity_series(t), InvalidTimestamps);
  }
}

TEST_CASE("evaluate fills the report and e_loc_prime scales by n") {
  Trajectory ref = line({{0, 0}, {50, 0}, {100, 0}});
  Trajectory est;
  for (int i = 0; i < 40; ++i) est.push_back({{2.5 * i, 0.4}, 0.0, i * 1000000});
  const MetricsReport r = evaluate(est, ref, "proposed", "parallel");
  CHECK(r.n == 40);
  CHECK(r.m == 3);
  CHECK(r.length_m == doctest::Approx(100.0));
  CHECK(r.e_loc_prime == r.e_loc / 40.0);  // exact by definition
  CHECK(r.e_loc_prime * r.n == doctest::Approx(r.e_loc).epsilon(1e-15));
  CHECK(r.e_pos_x >= 0.0);
  CHECK(r.e_pos_y >= 0.0);
  CHECK(r.e_alig >= 0.0);
  CHECK(r.e_loc >= 0.0);
}

TEST_CASE("report rows carry the published column order and precision") {
  MetricsReport r;
  r.model = "proposed";
  r.trajectory = "fig8";
  r.length_m = 133.2;
  r.e_pos_x = 0.11;
  r.e_pos_y = 1.07;
  r.e_alig = 2.04 * std::numbers::pi / 180.0;
  r.e_loc = 11.2;
  r.e_loc_prime = 0.00135;
  r.n = 3927;
  r.m = 7203;

  std::ostringstream out;
  write_report_header(out);
  write_report_row(out, r);
  const std::string text = out.str();
  CHECK(text.find("model,trajectory,length_m,e_pos_x,e_pos_y,e_alig_deg,e_loc,e_loc_prime\n") ==
        0);
  CHECK(text.find("proposed,fig8,133.200,0.1100,1.0700,2.0400,11.2000,0.00135") !=
        std::string::npos);
}
