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

#include "casq/pulse.hpp"

#include <cmath>

namespace casq {

double PulseShape::duration() const {
  switch (kind) {
    case PulseKind::FlatTopGaussian:
      return edge_total + flat_duration;
    case PulseKind::Gaussian:
      return edge_total;
    case PulseKind::Square:
      return flat_duration;
  }
  return 0.0;
}

void PulseShape::validate() const {
  if (amplitude < 0.0) throw Error("PulseShape: amplitude must be >= 0");
  if (flat_duration < 0.0) throw Error("PulseShape: flat_duration must be >= 0");
  if (kind != PulseKind::Square) {
    if (sigma <= 0.0) throw Error("PulseShape: sigma must be > 0");
    if (edge_total <= 0.0) throw Error("PulseShape: edge_total must be > 0");
  }
}

PulseShape PulseShape::flat_top(double amplitude_ghz, double flat_ns, double sigma_ns) {
  PulseShape s;
  s.kind = PulseKind::FlatTopGaussian;
  s.sigma = sigma_ns;
  s.edge_total = 4.0 * sigma_ns;
  s.flat_duration = flat_ns;
  s.amplitude = amplitude_ghz;
  return s;
}

PulseShape PulseShape::square(double amplitude_ghz, double flat_ns) {
  PulseShape s;
  s.kind = PulseKind::Square;
  s.sigma = 0.0;
  s.edge_total = 0.0;
  s.flat_duration = flat_ns;
  s.amplitude = amplitude_ghz;
  return s;
}

PulseShape PulseShape::gaussian(double amplitude_ghz, double sigma_ns) {
  PulseShape s;
  s.kind = PulseKind::Gaussian;
  s.sigma = sigma_ns;
  s.edge_total = 4.0 * sigma_ns;
  s.flat_duration = 0.0;
  s.amplitude = amplitude_ghz;
  return s;
}

double envelope(const PulseShape& shape, double t) {
  const double T = shape.duration();
  if (t < 0.0 || t > T) return 0.0;
  switch (shape.kind) {
    case PulseKind::Square:
      return shape.amplitude;
    case PulseKind::Gaussian: {
      const double center = shape.edge_half();
      const double u = (t - center) / shape.sigma;
      return shape.amplitude * std::exp(-0.5 * u * u);
    }
    case PulseKind::FlatTopGaussian: {
      const double rise_end = shape.edge_half();
      const double fall_start = rise_end + shape.flat_duration;
      if (t < rise_end) {
        const double u = (t - rise_end) / shape.sigma;
        return shape.amplitude * std::exp(-0.5 * u * u);
      }
      if (t > fall_start) {
        const double u = (t - fall_start) / shape.sigma;
        return shape.amplitude * std::exp(-0.5 * u * u);
      }
      return shape.amplitude;
    }
  }
  return 0.0;
}

}  // namespace casq
