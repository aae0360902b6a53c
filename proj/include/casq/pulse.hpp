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

#include "casq/types.hpp"

namespace casq {

enum class PulseKind { FlatTopGaussian, Gaussian, Square };

/// Drive pulse envelope. The flat-top shape has Gaussian rise/fall edges of
/// edge_total/2 each (default edge_total = 4 sigma, so each edge is 2 sigma,
/// with the Gaussian truncated at 2 sigma from its center) around a constant
/// plateau of flat_duration.
struct PulseShape {
  PulseKind kind = PulseKind::FlatTopGaussian;
  double sigma = 10.0;         // ns
  double edge_total = 40.0;    // ns, both edges combined
  double flat_duration = 0.0;  // ns
  double amplitude = 0.0;      // GHz

  double edge_half() const { return 0.5 * edge_total; }

  /// Total support of the pulse in ns.
  double duration() const;

  void validate() const;

  static PulseShape flat_top(double amplitude_ghz, double flat_ns, double sigma_ns = 10.0);
  static PulseShape square(double amplitude_ghz, double flat_ns);
  static PulseShape gaussian(double amplitude_ghz, double sigma_ns);
};

/// Envelope value in GHz at time t (ns from pulse start); 0 outside support.
double envelope(const PulseShape& shape, double t);

}  // namespace casq
