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

#include "casq/config.hpp"
#include "casq/report.hpp"

namespace casq {

inline constexpr const char* kVersion = "0.1.0";

struct CommandContext {
  RunConfig cfg;
  std::string config_text;  // raw file content, fingerprinted in the manifest
  std::string out_dir;
  int jobs = 1;
};

void cmd_spectrum(const CommandContext& ctx);
void cmd_cas_rates(const CommandContext& ctx);
void cmd_chevron(const CommandContext& ctx);
void cmd_zz_map(const CommandContext& ctx);
void cmd_calibrate_cz(const CommandContext& ctx);

/// Dispatch by subcommand name; throws ConfigError for unknown names.
void run_command(const std::string& name, const CommandContext& ctx);

}  // namespace casq
