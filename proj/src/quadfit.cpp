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

#include "odo/quadfit.hpp"

#include <cmath>
#include <cstdlib>

#include "odo/errors.hpp"

namespace odo {

QuadraticModel fit(const SignalWindow& window) {
  const auto& samples = window.samples;
  if (samples.size() < 3) {
    throw InsufficientSamples("quadratic fit needs at least 3 samples, got " +
                              std::to_string(samples.size()));
  }

  // Sums of powers of tau = (t - t_ref) in seconds, accumulated in extended
  // precision so the closed-form 3x3 solve stays well below the 1e-9 contract.
  long double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
  long double b0 = 0, b1 = 0, b2 = 0;
  const long double n = static_cast<long double>(samples.size());
  for (const auto& s : samples) {
    const long double tau = static_cast<long double>(s.t_us - window.t_ref_us) * 1e-6L;
    const long double tau2 = tau * tau;
    s1 += tau;
    s2 += tau2;
    s3 += tau2 * tau;
    s4 += tau2 * tau2;
    b0 += s.value;
    b1 += tau * s.value;
    b2 += tau2 * s.value;
  }

  // Normal system ordered (c3, c2, c1):
  //   [s4 s3 s2][c3]   [b2]
  //   [s3 s2 s1][c2] = [b1]
  //   [s2 s1 n ][c1]   [b0]
  const long double det = s4 * (s2 * n - s1 * s1) - s3 * (s3 * n - s1 * s2) +
                          s2 * (s3 * s1 - s2 * s2);
  if (std::abs(static_cast<double>(det)) < 1e-12) {
    throw DegenerateFit("det(T'T) = " + std::to_string(static_cast<double>(det)));
  }

  const long double det3 = b2 * (s2 * n - s1 * s1) - s3 * (b1 * n - s1 * b0) +
                           s2 * (b1 * s1 - s2 * b0);
  const long double det2 = s4 * (b1 * n - s1 * b0) - b2 * (s3 * n - s1 * s2) +
                           s2 * (s3 * b0 - b1 * s2);
  const long double det1 = s4 * (s2 * b0 - b1 * s1) - s3 * (s3 * b0 - b1 * s2) +
                           b2 * (s3 * s1 - s2 * s2);

  QuadraticModel m;
  m.c3 = static_cast<double>(det3 / det);
  m.c2 = static_cast<double>(det2 / det);
  m.c1 = static_cast<double>(det1 / det);
  m.t_ref_us = window.t_ref_us;
  m.t_frame_us = window.t_frame_us;
  if (!std::isfinite(m.c1) || !std::isfinite(m.c2) || !std::isfinite(m.c3)) {
    throw DegenerateFit("non-finite coefficients");
  }
  return m;
}

double evaluate(const QuadraticModel& model, std::int64_t t_us) {
  return evaluate_at_offset(model, static_cast<double>(t_us - model.t_ref_us) * 1e-6);
}

double evaluate_at_offset(const QuadraticModel& model, double tau_s) {
  return (model.c3 * tau_s + model.c2) * tau_s + model.c1;
}

bool extrapolation_flagged(const QuadraticModel& model, std::int64_t t_us) {
  return std::llabs(t_us - model.t_frame_us) > 100000;
}

}  // namespace odo
