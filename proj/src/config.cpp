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

#include "casq/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace casq {

namespace {

using nlohmann::json;

void require_known_keys(const json& obj, const std::string& section,
                        const std::set<std::string>& known) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.contains(key)) {
      throw ConfigError("unknown key \"" + (section.empty() ? key : section + "." + key) + "\"");
    }
  }
}

template <typename T>
void read(const json& obj, const std::string& section, const std::string& key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("invalid value for \"" + section + "." + key + "\": " + e.what());
  }
}

void read_triplet(const json& obj, const std::string& section, const std::string& key,
                  std::array<double, 3>& out) {
  if (!obj.contains(key)) return;
  const json& arr = obj.at(key);
  if (!arr.is_array() || arr.size() != 3) {
    throw ConfigError("\"" + section + "." + key + "\" must be an array of 3 numbers");
  }
  for (int i = 0; i < 3; ++i) out[static_cast<std::size_t>(i)] = arr.at(i).get<double>();
}

void parse_device(const json& obj, DeviceParams& p) {
  require_known_keys(obj, "device", {"omega", "alpha", "g1c", "g2c", "g12", "levels"});
  read_triplet(obj, "device", "omega", p.omega);
  read_triplet(obj, "device", "alpha", p.alpha);
  read(obj, "device", "g1c", p.g1c);
  read(obj, "device", "g2c", p.g2c);
  read(obj, "device", "g12", p.g12);
  if (obj.contains("levels")) {
    const json& arr = obj.at("levels");
    if (!arr.is_array() || arr.size() != 3) {
      throw ConfigError("\"device.levels\" must be an array of 3 integers");
    }
    p.dims = ModeDims(arr.at(0).get<int>(), arr.at(1).get<int>(), arr.at(2).get<int>());
  }
}

void parse_coherence(const json& obj, CoherenceParams& c) {
  require_known_keys(obj, "coherence", {"t1", "t2_ramsey", "t2_echo"});
  read_triplet(obj, "coherence", "t1", c.t1);
  read_triplet(obj, "coherence", "t2_ramsey", c.t2_ramsey);
  read_triplet(obj, "coherence", "t2_echo", c.t2_echo);
}

PulseKind parse_kind(const std::string& kind) {
  if (kind == "flat_top_gaussian") return PulseKind::FlatTopGaussian;
  if (kind == "gaussian") return PulseKind::Gaussian;
  if (kind == "square") return PulseKind::Square;
  throw ConfigError("unknown pulse kind \"" + kind + "\"");
}

void parse_drive(const json& obj, DriveParams& d) {
  require_known_keys(obj, "drive", {"omega_d", "amp", "shape"});
  read(obj, "drive", "omega_d", d.omega_d);
  read(obj, "drive", "amp", d.amp);
  if (obj.contains("shape")) {
    const json& shape = obj.at("shape");
    if (shape.is_string() && shape.get<std::string>() == "continuous") {
      d.envelope.reset();
      return;
    }
    require_known_keys(shape, "drive.shape",
                       {"kind", "sigma", "edge_total", "flat_duration", "amplitude"});
    PulseShape s;
    std::string kind = "flat_top_gaussian";
    read(shape, "drive.shape", "kind", kind);
    s.kind = parse_kind(kind);
    s.sigma = 10.0;
    s.edge_total = 0.0;
    read(shape, "drive.shape", "sigma", s.sigma);
    read(shape, "drive.shape", "edge_total", s.edge_total);
    if (s.edge_total == 0.0) s.edge_total = 4.0 * s.sigma;
    read(shape, "drive.shape", "flat_duration", s.flat_duration);
    s.amplitude = d.amp;
    read(shape, "drive.shape", "amplitude", s.amplitude);
    s.validate();
    d.envelope = s;
  }
}

Transition parse_transition(const std::string& name) {
  if (name == "blue") return Transition::Blue;
  if (name == "red") return Transition::Red;
  throw ConfigError("unknown transition \"" + name + "\" (expected \"blue\" or \"red\")");
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be an object");

  require_known_keys(root, "",
                     {"device", "coherence", "drive", "seed", "spectrum", "cas_rates", "chevron",
                      "zz_map", "calibrate_cz"});

  RunConfig cfg;
  if (root.contains("device")) parse_device(root.at("device"), cfg.device);
  if (root.contains("coherence")) parse_coherence(root.at("coherence"), cfg.coherence);
  if (root.contains("drive")) parse_drive(root.at("drive"), cfg.drive);
  read(root, "", "seed", cfg.seed);

  if (root.contains("spectrum")) {
    const json& obj = root.at("spectrum");
    require_known_keys(obj, "spectrum", {"include_g12"});
    read(obj, "spectrum", "include_g12", cfg.spectrum.include_g12);
  }
  if (root.contains("cas_rates")) {
    const json& obj = root.at("cas_rates");
    require_known_keys(obj, "cas_rates", {"amps", "window_halfwidth", "coarse_points"});
    read(obj, "cas_rates", "amps", cfg.cas_rates.amps);
    read(obj, "cas_rates", "window_halfwidth", cfg.cas_rates.window_halfwidth);
    read(obj, "cas_rates", "coarse_points", cfg.cas_rates.coarse_points);
  }
  if (root.contains("chevron")) {
    const json& obj = root.at("chevron");
    require_known_keys(obj, "chevron",
                       {"transition", "amp", "delta_halfwidth", "delta_points", "tau_min",
                        "tau_max", "tau_points"});
    std::string transition = "blue";
    read(obj, "chevron", "transition", transition);
    cfg.chevron.transition = parse_transition(transition);
    read(obj, "chevron", "amp", cfg.chevron.amp);
    read(obj, "chevron", "delta_halfwidth", cfg.chevron.delta_halfwidth);
    read(obj, "chevron", "delta_points", cfg.chevron.delta_points);
    read(obj, "chevron", "tau_min", cfg.chevron.tau_min);
    read(obj, "chevron", "tau_max", cfg.chevron.tau_max);
    read(obj, "chevron", "tau_points", cfg.chevron.tau_points);
  }
  if (root.contains("zz_map")) {
    const json& obj = root.at("zz_map");
    require_known_keys(obj, "zz_map",
                       {"x_min", "x_max", "x_points", "y_min", "y_max", "y_points", "driven_amp",
                        "driven_delta_halfwidth", "driven_points"});
    read(obj, "zz_map", "x_min", cfg.zz_map.x_min);
    read(obj, "zz_map", "x_max", cfg.zz_map.x_max);
    read(obj, "zz_map", "x_points", cfg.zz_map.x_points);
    read(obj, "zz_map", "y_min", cfg.zz_map.y_min);
    read(obj, "zz_map", "y_max", cfg.zz_map.y_max);
    read(obj, "zz_map", "y_points", cfg.zz_map.y_points);
    read(obj, "zz_map", "driven_amp", cfg.zz_map.driven_amp);
    read(obj, "zz_map", "driven_delta_halfwidth", cfg.zz_map.driven_delta_halfwidth);
    read(obj, "zz_map", "driven_points", cfg.zz_map.driven_points);
  }
  if (root.contains("calibrate_cz")) {
    const json& obj = root.at("calibrate_cz");
    require_known_keys(obj, "calibrate_cz", {"amp", "phi_points"});
    read(obj, "calibrate_cz", "amp", cfg.calibrate_cz.amp);
    read(obj, "calibrate_cz", "phi_points", cfg.calibrate_cz.phi_points);
  }

  cfg.device.dims.validate();
  cfg.coherence.validate();
  cfg.drive.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file \"" + path + "\"");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace casq
