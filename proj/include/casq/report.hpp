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
#include <utility>
#include <vector>

#include "casq/types.hpp"

namespace casq {

/// Deterministic shortest-round-trip decimal formatting, "." decimal point.
std::string format_number(double value);

/// CSV file with a mandatory header row, comma delimiter, UTF-8. Rows are
/// buffered and written on close so interrupted runs leave no partial file.
class CsvWriter {
 public:
  CsvWriter(std::string path, std::vector<std::string> columns);

  void add_row(const std::vector<std::string>& cells);
  void add_row(const std::vector<double>& cells);
  long rows() const { return rows_; }
  const std::string& path() const { return path_; }

  /// Writes the buffered content atomically (temp file + rename).
  void close();

 private:
  std::string path_;
  std::string buffer_;
  std::size_t columns_;
  long rows_ = 0;
  bool closed_ = false;
};

/// FNV-1a 64-bit hash, hex-encoded; used to fingerprint configs.
std::string fnv1a_hex(const std::string& data);

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::string version;
  double wall_seconds = 0.0;
  std::vector<std::pair<std::string, long>> outputs;  // file, row count
};

/// Serializes the manifest to JSON and writes it atomically.
void write_manifest(const std::string& directory, const RunManifest& manifest);

/// Calibration record emitted by the gate-calibration command. Serialized
/// as JSON; parse_cz_record(serialize_cz_record(r)) reproduces r exactly.
struct CzRecord {
  double omega_d = 0.0;
  double plateau_ns = 0.0;
  double amp = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double fbar_coherent = 0.0;
  double fbar_lindblad_ramsey = 0.0;
  double fbar_lindblad_echo = 0.0;
  double leakage = 0.0;

  bool operator==(const CzRecord&) const = default;
};

std::string serialize_cz_record(const CzRecord& record);
CzRecord parse_cz_record(const std::string& text);

}  // namespace casq
