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

#include "casq/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace casq {

std::string format_number(double value) {
  // Shortest representation that round-trips; identical across runs.
  const nlohmann::json j = value;
  return j.dump();
}

CsvWriter::CsvWriter(std::string path, std::vector<std::string> columns)
    : path_(std::move(path)), columns_(columns.size()) {
  if (columns.empty()) throw Error("CsvWriter: need at least one column");
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i > 0) buffer_ += ',';
    buffer_ += columns[i];
  }
  buffer_ += '\n';
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw Error("CsvWriter: row width mismatch in " + path_);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) buffer_ += ',';
    buffer_ += cells[i];
  }
  buffer_ += '\n';
  ++rows_;
}

void CsvWriter::add_row(const std::vector<double>& cells) {
  std::vector<std::string> formatted;
  formatted.reserve(cells.size());
  for (const double v : cells) formatted.push_back(format_number(v));
  add_row(formatted);
}

namespace {

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write \"" + tmp + "\"");
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

void CsvWriter::close() {
  if (closed_) return;
  write_file_atomic(path_, buffer_);
  closed_ = true;
}

std::string fnv1a_hex(const std::string& data) {
  unsigned long long hash = 14695981039346656037ULL;
  for (const unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", hash);
  return out;
}

void write_manifest(const std::string& directory, const RunManifest& manifest) {
  nlohmann::json j;
  j["command"] = manifest.command;
  j["config_hash"] = manifest.config_hash;
  j["version"] = manifest.version;
  j["wall_seconds"] = manifest.wall_seconds;
  j["outputs"] = nlohmann::json::array();
  for (const auto& [file, rows] : manifest.outputs) {
    j["outputs"].push_back({{"file", file}, {"rows", rows}});
  }
  write_file_atomic((std::filesystem::path(directory) / "run_manifest.json").string(),
                    j.dump(2) + "\n");
}

std::string serialize_cz_record(const CzRecord& r) {
  nlohmann::json j;
  j["omega_d"] = r.omega_d;
  j["plateau_ns"] = r.plateau_ns;
  j["amp"] = r.amp;
  j["theta1"] = r.theta1;
  j["theta2"] = r.theta2;
  j["fbar_coherent"] = r.fbar_coherent;
  j["fbar_lindblad_ramsey"] = r.fbar_lindblad_ramsey;
  j["fbar_lindblad_echo"] = r.fbar_lindblad_echo;
  j["leakage"] = r.leakage;
  return j.dump(2) + "\n";
}

CzRecord parse_cz_record(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("calibration record is not valid JSON: ") + e.what());
  }
  CzRecord r;
  try {
    r.omega_d = j.at("omega_d").get<double>();
    r.plateau_ns = j.at("plateau_ns").get<double>();
    r.amp = j.at("amp").get<double>();
    r.theta1 = j.at("theta1").get<double>();
    r.theta2 = j.at("theta2").get<double>();
    r.fbar_coherent = j.at("fbar_coherent").get<double>();
    r.fbar_lindblad_ramsey = j.at("fbar_lindblad_ramsey").get<double>();
    r.fbar_lindblad_echo = j.at("fbar_lindblad_echo").get<double>();
    r.leakage = j.at("leakage").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("calibration record missing field: ") + e.what());
  }
  return r;
}

}  // namespace casq
