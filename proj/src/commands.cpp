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

#include "casq/commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <vector>

#include "casq/dynamics.hpp"
#include "casq/gates.hpp"
#include "casq/spectrum.hpp"
#include "casq/swt.hpp"

namespace casq {

namespace {

namespace fs = std::filesystem;

class ManifestRun {
 public:
  ManifestRun(const CommandContext& ctx, std::string command)
      : ctx_(ctx), start_(std::chrono::steady_clock::now()) {
    manifest_.command = std::move(command);
    manifest_.config_hash = fnv1a_hex(ctx.config_text);
    manifest_.version = kVersion;
    fs::create_directories(ctx.out_dir);
  }

  std::string path(const std::string& file) const {
    return (fs::path(ctx_.out_dir) / file).string();
  }

  void finish(CsvWriter& writer) {
    writer.close();
    manifest_.outputs.emplace_back(fs::path(writer.path()).filename().string(), writer.rows());
  }

  void add_output(const std::string& file, long rows) {
    manifest_.outputs.emplace_back(file, rows);
  }

  ~ManifestRun() {
    const auto elapsed = std::chrono::steady_clock::now() - start_;
    manifest_.wall_seconds = std::chrono::duration<double>(elapsed).count();
    try {
      write_manifest(ctx_.out_dir, manifest_);
    } catch (...) {
      // A failed manifest write must not mask the command's own outcome.
    }
  }

 private:
  const CommandContext& ctx_;
  RunManifest manifest_;
  std::chrono::steady_clock::time_point start_;
};

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  return out;
}

void write_grid_csv(CsvWriter& csv, const SweepGrid& grid) {
  for (int iy = 0; iy < grid.spec.y_points; ++iy) {
    for (int ix = 0; ix < grid.spec.x_points; ++ix) {
      csv.add_row({format_number(grid.x_axis(ix)), format_number(grid.y_axis(iy)),
                   format_number(grid.xi_zz(iy, ix) * 1e9),  // GHz -> Hz
                   format_number(grid.eta(iy, ix)),
                   std::to_string(grid.flags(iy, ix))});
    }
  }
}

}  // namespace

void cmd_spectrum(const CommandContext& ctx) {
  ManifestRun run(ctx, "spectrum");
  const DeviceParams& p = ctx.cfg.device;
  for (const std::string& w : p.validate()) std::cerr << "warning: " << w << "\n";
  const bool g12 = ctx.cfg.spectrum.include_g12;

  CsvWriter energies(run.path("energies.csv"), {"label", "energy_ghz"});
  const OperatorMatrix h = build_static_hamiltonian(p, g12);
  const LabeledSpectrum s = diagonalize_and_label(h, all_labels(p.dims));
  for (const BareLabel& label : all_labels(p.dims)) {
    energies.add_row({label.str(), format_number(s.energy_ghz(p.dims, label))});
  }
  run.finish(energies);

  CsvWriter zz(run.path("zz_report.csv"),
               {"method", "xi_zz_ghz", "xi_0_analytic_ghz", "g_eff_ghz"});
  const ZzReport with = zz_strength(p, g12);
  zz.add_row({"diagonalization", format_number(with.xi_zz), format_number(with.xi_0_analytic),
              format_number(with.g_eff)});
  const ZzReport without = zz_strength(p, false);
  zz.add_row({"diagonalization_no_g12", format_number(without.xi_zz),
              format_number(without.xi_0_analytic), format_number(without.g_eff)});
  run.finish(zz);

  CsvWriter weak(run.path("weak_drive.csv"), {"transition", "frequency_ghz"});
  const WeakDriveFrequencies freqs = analytic_weak_drive_frequencies(p);
  weak.add_row({"blue", format_number(freqs.blue)});
  weak.add_row({"red", format_number(freqs.red)});
  run.finish(weak);
}

void cmd_cas_rates(const CommandContext& ctx) {
  ManifestRun run(ctx, "cas-rates");
  const DeviceParams& p = ctx.cfg.device;
  const CasRatesConfig& cc = ctx.cfg.cas_rates;
  if (cc.amps.empty()) throw ConfigError("cas_rates.amps is empty");

  CsvWriter csv(run.path("cas_rates.csv"),
                {"amp_ghz", "blue_analytic_ghz", "red_analytic_ghz", "blue_numeric_ghz",
                 "blue_numeric_nog12_ghz", "blue_resonance_ghz", "red_numeric_ghz",
                 "red_numeric_nog12_ghz", "red_resonance_ghz", "blue_stark_ghz",
                 "red_stark_ghz", "status"});

  AnticrossingOptions opts;
  opts.window_halfwidth = cc.window_halfwidth;
  opts.coarse_points = cc.coarse_points;

  for (const double amp : cc.amps) {
    if (amp == 0.0) {
      const WeakDriveFrequencies w = analytic_weak_drive_frequencies(p);
      csv.add_row({"0", "0", "0", "0", "0", format_number(w.blue), "0", "0",
                   format_number(w.red), format_number(w.blue), format_number(w.red), "ok"});
      continue;
    }
    try {
      const CasRates analytic = analytic_cas_rates(p, amp);
      AnticrossingOptions with = opts;
      with.include_g12 = true;
      AnticrossingOptions nog12 = opts;
      nog12.include_g12 = false;
      const AnticrossingResult blue = cas_rate_numeric(p, amp, Transition::Blue, with);
      const AnticrossingResult blue0 = cas_rate_numeric(p, amp, Transition::Blue, nog12);
      const AnticrossingResult red = cas_rate_numeric(p, amp, Transition::Red, with);
      const AnticrossingResult red0 = cas_rate_numeric(p, amp, Transition::Red, nog12);
      DriveParams db;
      db.amp = amp;
      db.omega_d = blue.omega_resonance;
      const AcStarkShift stark = ac_stark_shift(p, db);
      csv.add_row({format_number(amp), format_number(analytic.blue),
                   format_number(analytic.red), format_number(blue.rate),
                   format_number(blue0.rate), format_number(blue.omega_resonance),
                   format_number(red.rate), format_number(red0.rate),
                   format_number(red.omega_resonance), format_number(stark.blue),
                   format_number(stark.red), "ok"});
    } catch (const Error& e) {
      std::cerr << "warning: amplitude " << amp << " failed: " << e.what() << "\n";
      csv.add_row({format_number(amp), "nan", "nan", "nan", "nan", "nan", "nan", "nan", "nan",
                   "nan", "nan", "failed"});
    }
  }
  run.finish(csv);
}

void cmd_chevron(const CommandContext& ctx) {
  ManifestRun run(ctx, "chevron");
  const DeviceParams& p = ctx.cfg.device;
  const ChevronConfig& cc = ctx.cfg.chevron;
  if (cc.delta_points < 1 || cc.tau_points < 2) {
    throw ConfigError("chevron grid needs at least 1 detuning and 2 durations");
  }
  if (cc.amp <= 0.0) throw ConfigError("chevron.amp must be > 0");

  const std::vector<double> delta =
      linspace(-cc.delta_halfwidth, cc.delta_halfwidth, cc.delta_points);
  const std::vector<double> tau = linspace(cc.tau_min, cc.tau_max, cc.tau_points);

  ChevronOptions opts;
  opts.jobs = ctx.jobs;
  const ChevronResult res = chevron_scan(p, cc.amp, delta, tau, cc.transition, opts);

  CsvWriter csv(run.path("chevron.csv"), {"delta_mhz", "tau_ns", "population"});
  for (Eigen::Index r = 0; r < res.population.rows(); ++r) {
    for (Eigen::Index c = 0; c < res.population.cols(); ++c) {
      csv.add_row({format_number(res.delta(r) * 1e3), format_number(res.tau(c)),
                   format_number(res.population(r, c))});
    }
  }
  run.finish(csv);

  // Dense matrix layout: duration axis across the header, one detuning per
  // row.
  std::vector<std::string> header{"delta_mhz"};
  for (Eigen::Index c = 0; c < res.tau.size(); ++c) {
    header.push_back("tau_" + format_number(res.tau(c)) + "_ns");
  }
  CsvWriter matrix(run.path("chevron_matrix.csv"), header);
  for (Eigen::Index r = 0; r < res.population.rows(); ++r) {
    std::vector<std::string> row{format_number(res.delta(r) * 1e3)};
    for (Eigen::Index c = 0; c < res.population.cols(); ++c) {
      row.push_back(format_number(res.population(r, c)));
    }
    matrix.add_row(row);
  }
  run.finish(matrix);

  CsvWriter summary(run.path("chevron_summary.csv"),
                    {"omega_resonance_ghz", "rate_ghz", "amp_ghz", "transition"});
  summary.add_row({format_number(res.omega_resonance), format_number(res.rate_numeric),
                   format_number(cc.amp),
                   cc.transition == Transition::Blue ? "blue" : "red"});
  run.finish(summary);
}

void cmd_zz_map(const CommandContext& ctx) {
  ManifestRun run(ctx, "zz-map");
  const ZzMapConfig& zc = ctx.cfg.zz_map;
  if (zc.x_points < 2 || zc.y_points < 2) throw ConfigError("zz_map sweep range is empty");
  if (zc.x_min >= zc.x_max || zc.y_min > zc.y_max) {
    throw ConfigError("zz_map sweep range is empty");
  }

  SweepSpec swap_spec;
  swap_spec.mode = SweepMode::CasBlue;
  swap_spec.x_min = zc.x_min;
  swap_spec.x_max = zc.x_max;
  swap_spec.x_points = zc.x_points;
  swap_spec.y_min = zc.y_min;
  swap_spec.y_max = zc.y_max;
  swap_spec.y_points = zc.y_points;
  swap_spec.g12 = ctx.cfg.device.g12;
  swap_spec.dims = ctx.cfg.device.dims;

  SweepSpec cr_spec = swap_spec;
  cr_spec.mode = SweepMode::CrossResonance;
  cr_spec.alpha = {-0.30, -0.30, 0.0};

  const std::vector<std::string> columns{"delta12_over_alpha", "g_over_delta", "xi_zz_hz",
                                         "eta", "flags"};
  struct Variant {
    const char* file;
    SweepSpec* spec;
    bool g12;
  };
  SweepSpec swap_with = swap_spec, swap_without = swap_spec;
  SweepSpec cr_with = cr_spec, cr_without = cr_spec;
  const Variant variants[] = {{"zz_map_swap_g12.csv", &swap_with, true},
                              {"zz_map_swap_nog12.csv", &swap_without, false},
                              {"zz_map_cr_g12.csv", &cr_with, true},
                              {"zz_map_cr_nog12.csv", &cr_without, false}};
  for (const Variant& v : variants) {
    v.spec->include_g12 = v.g12;
    const SweepGrid grid = design_map(*v.spec, ctx.jobs);
    CsvWriter csv(run.path(v.file), columns);
    write_grid_csv(csv, grid);
    run.finish(csv);
  }

  // Drive-detuning scan of the tunable interaction.
  const DeviceParams& p = ctx.cfg.device;
  if (zc.driven_points < 2) throw ConfigError("zz_map.driven_points must be at least 2");
  CsvWriter driven(run.path("driven_zz.csv"),
                   {"delta_mhz", "xi_zz_numeric_hz", "xi_zz_analytic_hz", "status"});
  double prev_delta = 0.0, prev_xi = 0.0;
  bool have_prev = false;
  std::vector<double> crossings;
  for (const double delta :
       linspace(-zc.driven_delta_halfwidth, zc.driven_delta_halfwidth, zc.driven_points)) {
    DriveParams d;
    d.amp = zc.driven_amp;
    d.omega_d = p.omega[2];
    const AcStarkShift stark = ac_stark_shift(p, d);
    d.omega_d = stark.blue + delta;
    std::string numeric_cell = "nan", analytic_cell = "nan", status = "ok";
    try {
      const double numeric = tunable_zz(p, d, ZzMethod::Driven).xi_zz;
      numeric_cell = format_number(numeric * 1e9);
      if (have_prev && prev_xi * numeric < 0.0 && prev_delta < 0.0 && delta <= 0.0) {
        crossings.push_back(prev_delta +
                            (0.0 - prev_xi) * (delta - prev_delta) / (numeric - prev_xi));
      }
      prev_delta = delta;
      prev_xi = numeric;
      have_prev = true;
    } catch (const Error&) {
      status = "label_ambiguous";
      have_prev = false;
    }
    try {
      analytic_cell = format_number(tunable_zz(p, d, ZzMethod::Analytic).xi_zz * 1e9);
    } catch (const Error&) {
      status = status == "ok" ? "analytic_singular" : status;
    }
    driven.add_row({format_number(delta * 1e3), numeric_cell, analytic_cell, status});
  }
  run.finish(driven);

  CsvWriter crossing_csv(run.path("driven_zz_summary.csv"),
                         {"amp_ghz", "zero_crossing_delta_mhz", "crossing_count"});
  crossing_csv.add_row({format_number(zc.driven_amp),
                        crossings.empty() ? "nan" : format_number(crossings.front() * 1e3),
                        std::to_string(crossings.size())});
  run.finish(crossing_csv);
}

void cmd_calibrate_cz(const CommandContext& ctx) {
  ManifestRun run(ctx, "calibrate-cz");
  const DeviceParams& p = ctx.cfg.device;
  const double amp = ctx.cfg.calibrate_cz.amp;
  if (amp <= 0.0) throw ConfigError("calibrate_cz.amp must be > 0");

  const CzCalibration cal = calibrate_cz(p, amp);

  ChannelOptions copts;
  const ChannelAnalysis coherent = channel_superoperator(p, cal, std::nullopt, copts);
  const FidelityResult f_coherent = average_gate_fidelity(coherent);

  copts.t2_choice = T2Choice::Ramsey;
  const ChannelAnalysis ramsey = channel_superoperator(p, cal, ctx.cfg.coherence, copts);
  const FidelityResult f_ramsey = average_gate_fidelity(ramsey);

  copts.t2_choice = T2Choice::Echo;
  const ChannelAnalysis echo = channel_superoperator(p, cal, ctx.cfg.coherence, copts);
  const FidelityResult f_echo = average_gate_fidelity(echo);

  CzRecord record;
  record.omega_d = cal.omega_d;
  record.plateau_ns = cal.plateau;
  record.amp = cal.amp;
  record.theta1 = cal.theta1;
  record.theta2 = cal.theta2;
  record.fbar_coherent = f_coherent.fbar;
  record.fbar_lindblad_ramsey = f_ramsey.fbar;
  record.fbar_lindblad_echo = f_echo.fbar;
  record.leakage = f_ramsey.leakage;

  const std::string record_path =
      (std::filesystem::path(ctx.out_dir) / "cz_calibration.json").string();
  {
    std::ofstream out(record_path + ".tmp", std::ios::trunc);
    if (!out) throw Error("cannot write " + record_path);
    out << serialize_cz_record(record);
  }
  std::filesystem::rename(record_path + ".tmp", record_path);
  run.add_output("cz_calibration.json", 1);

  CsvWriter fidelity(run.path("fidelity_report.csv"),
                     {"method", "fbar", "leakage", "controlled_phase_rad", "trace_residual"});
  fidelity.add_row({"coherent", format_number(f_coherent.fbar),
                    format_number(f_coherent.leakage),
                    format_number(cal.predicted_controlled_phase),
                    format_number(coherent.trace_residual)});
  fidelity.add_row({"lindblad_ramsey", format_number(f_ramsey.fbar),
                    format_number(f_ramsey.leakage),
                    format_number(cal.predicted_controlled_phase),
                    format_number(ramsey.trace_residual)});
  fidelity.add_row({"lindblad_echo", format_number(f_echo.fbar), format_number(f_echo.leakage),
                    format_number(cal.predicted_controlled_phase),
                    format_number(echo.trace_residual)});
  run.finish(fidelity);
}

void run_command(const std::string& name, const CommandContext& ctx) {
  if (name == "spectrum") return cmd_spectrum(ctx);
  if (name == "cas-rates") return cmd_cas_rates(ctx);
  if (name == "chevron") return cmd_chevron(ctx);
  if (name == "zz-map") return cmd_zz_map(ctx);
  if (name == "calibrate-cz") return cmd_calibrate_cz(ctx);
  throw ConfigError("unknown command \"" + name + "\"");
}

}  // namespace casq
