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

#include <string>
#include <vector>

#include "casq/device.hpp"
#include "casq/dynamics.hpp"
#include "casq/types.hpp"

namespace casq {

struct SpectrumConfig {
  bool include_g12 = true;
};

struct CasRatesConfig {
  std::vector<double> amps{0.010, 0.020, 0.030, 0.040, 0.050, 0.060, 0.070, 0.080};
  double window_halfwidth = 0.030;  // GHz
  int coarse_points = 201;
};

struct ChevronConfig {
  Transition transition = Transition::Blue;
  double amp = 0.072;             // GHz
  double delta_halfwidth = 0.010;  // GHz
  int delta_points = 11;
  double tau_min = 0.0;    // ns
  double tau_max = 1500.0;  // ns
  int tau_points = 21;
};

struct ZzMapConfig {
  double x_min = 0.5;
  double x_max = 5.0;
  int x_points = 40;
  double y_min = 0.005;
  double y_max = 0.15;
  int y_points = 40;
  double driven_amp = 0.0073;             // GHz
  double driven_delta_halfwidth = 0.020;  // GHz
  int driven_points = 81;
};

struct CalibrateCzConfig {
  double amp = 0.075;  // GHz
  int phi_points = 24;
};

/// One run configuration: all physical inputs live here, the command line
/// only selects the command, config path, output directory and parallelism.
/// Unknown keys anywhere in the file are rejected with the offending key
/// named.
struct RunConfig {
  DeviceParams device;
  CoherenceParams coherence;
  DriveParams drive;
  unsigned long long seed = 1;
  SpectrumConfig spectrum;
  CasRatesConfig cas_rates;
  ChevronConfig chevron;
  ZzMapConfig zz_map;
  CalibrateCzConfig calibrate_cz;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

}  // namespace casq
