// Copyright 2026 The casq developers
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

#include <algorithm>
#include <cmath>
#include <functional>

#include "casq/types.hpp"

namespace casq {

struct OdeOptions {
  // Error control is on the Frobenius norm of the embedded-pair difference
  // against atol + rtol * ||y||. The defaults keep the accumulated norm
  // drift of a microsecond-scale propagation below 1e-8.
  double rtol = 3e-12;
  double atol = 1e-14;
  double initial_step = 1e-3;  // ns
  double max_step = 1e9;       // ns
};

struct OdeStats {
  long steps = 0;
  long rejected = 0;
};

/// Embedded Dormand-Prince 5(4) pair with PI step control. State is any
/// Eigen matrix/vector of complex doubles; f computes dy/dt into its third
/// argument. Throws ToleranceNotMet on step-size underflow.
template <typename State>
void integrate_adaptive(const std::function<void(double, const State&, State&)>& f, double t0,
                        double t1, State& y, const OdeOptions& opts = {},
                        OdeStats* stats = nullptr) {
  if (t1 <= t0) return;

  // Butcher tableau of the Dormand-Prince 5(4) method.
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  State k1 = y, k2 = y, k3 = y, k4 = y, k5 = y, k6 = y, k7 = y, ytmp = y, ynew = y;

  double t = t0;
  double h = std::min({opts.initial_step, opts.max_step, t1 - t0});
  const double h_floor = 1e-12 * (t1 - t0);

  f(t, y, k1);
  bool k1_fresh = true;

  while (t < t1) {
    if (t + h > t1) h = t1 - t;
    if (!k1_fresh) {
      f(t, y, k1);
      k1_fresh = true;
    }

    ytmp = y + h * (a21 * k1);
    f(t + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    f(t + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + h, ytmp, k6);
    ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    f(t + h, ynew, k7);

    // Scaled norm of the embedded 4th-order difference.
    const auto err_vec = (h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7)).eval();
    const double y_scale = std::max(y.matrix().norm(), ynew.matrix().norm());
    const double denom = opts.atol + opts.rtol * y_scale;
    const double err = err_vec.matrix().norm() / denom;

    if (err <= 1.0) {
      t += h;
      y.swap(ynew);
      k1.swap(k7);  // first-same-as-last
      k1_fresh = true;
      if (stats) ++stats->steps;
    } else {
      if (stats) ++stats->rejected;
      k1_fresh = true;  // k1 is still f(t, y)
    }

    const double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
    h = std::min(h, opts.max_step);
    if (h < h_floor && t < t1) {
      throw ToleranceNotMet("step size underflow at t = " + std::to_string(t) + " ns");
    }
  }
}

}  // namespace casq
