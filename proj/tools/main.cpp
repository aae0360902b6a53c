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

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "casq/commands.hpp"
#include "casq/config.hpp"
#include "casq/types.hpp"

int main(int argc, char** argv) {
  CLI::App app{"casq: coupler-assisted swap simulator for transmon triplets"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  int jobs = 1;

  const char* commands[] = {"spectrum", "cas-rates", "chevron", "zz-map", "calibrate-cz"};
  const char* descriptions[] = {
      "labeled eigenenergies, static ZZ report and weak-drive transition frequencies",
      "analytic and numeric swap rates over a drive-amplitude sweep",
      "population-transfer map versus drive detuning and pulse duration",
      "design-space ZZ/efficiency maps and the drive-detuning ZZ scan",
      "controlled-phase gate calibration and coherence-limited fidelity"};
  for (int i = 0; i < 5; ++i) {
    CLI::App* sub = app.add_subcommand(commands[i], descriptions[i]);
    sub->add_option("--config", config_path, "run configuration (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--jobs", jobs, "parallel worker budget")->check(CLI::PositiveNumber);
  }

  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    std::ifstream in(config_path);
    if (!in) throw casq::ConfigError("cannot open config file \"" + config_path + "\"");
    std::ostringstream buffer;
    buffer << in.rdbuf();

    casq::CommandContext ctx;
    ctx.config_text = buffer.str();
    ctx.cfg = casq::parse_config(ctx.config_text);
    ctx.out_dir = out_dir;
    ctx.jobs = jobs;
    casq::run_command(name, ctx);
  } catch (const casq::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
