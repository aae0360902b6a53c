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

// End-to-end acceptance checks of the simulator against the reference
// device values, one numbered criterion per function. Each prints a PASS or
// FAIL line; the process exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "casq/dynamics.hpp"
#include "casq/gates.hpp"
#include "casq/spectrum.hpp"
#include "casq/swt.hpp"

using namespace casq;

namespace {

struct Criterion {
  bool pass = true;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    pass &= ok;
    details.push_back(std::string(ok ? "    ok:   " : "    FAIL: ") + what);
  }
  void note(const std::string& what) { details.push_back("    note: " + what); }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
  return out;
}

// 1. Static ZZ at the quoted direct coupling reproduces the quoted value.
Criterion criterion_static_zz() {
  Criterion c;
  DeviceParams p;
  p.g12 = 0.0018;
  const ZzReport r = zz_strength(p, true);
  const double xi_khz = r.xi_zz * 1e6;
  c.require(std::abs(xi_khz - (-1.5)) <= 0.5,
            "diagonalization xi_zz = " + fmt(xi_khz) + " kHz, target -1.5 +- 0.5 kHz");
  if (!c.pass) {
    c.note("the four-energy combination is hypersensitive to the direct coupling here:");
    for (const double g12 : {0.0018, 0.0019, 0.00195}) {
      DeviceParams q;
      q.g12 = g12;
      c.note("  g12 = " + fmt(g12 * 1e3) +
             " MHz -> xi_zz = " + fmt(zz_strength(q, true).xi_zz * 1e6) + " kHz");
    }
    c.note("  slope d(xi)/d(g12) is ~ +18 kHz/MHz, so the quoted value is reproduced");
    c.note("  within the rounding of the quoted g12 (at 1.895 MHz) but not at 1.8 MHz");
  }
  return c;
}

// 2. Swap rate: closed form at 75 MHz and numeric-vs-analytic agreement of
// the blue branch over the amplitude sweep.
Criterion criterion_cas_rate() {
  Criterion c;
  const DeviceParams p;
  const CasRates rate75 = analytic_cas_rates(p, 0.075);
  c.require(std::abs(std::abs(rate75.blue) * 1e3 - 2.2) <= 0.4,
            "analytic blue rate at 75 MHz drive = " + fmt(std::abs(rate75.blue) * 1e3) +
                " MHz, target 2.2 +- 0.4 MHz");
  double worst = 0.0;
  for (const double amp : linspace(0.01, 0.08, 8)) {
    const AnticrossingResult numeric = cas_rate_numeric(p, amp, Transition::Blue);
    const double analytic = std::abs(analytic_cas_rates(p, amp).blue);
    worst = std::max(worst, std::abs(numeric.rate - analytic) / analytic);
  }
  c.require(worst <= 0.10, "blue numeric-vs-analytic relative deviation <= 10% up to 80 MHz "
                           "(worst " +
                               fmt(worst * 100) + "%)");
  return c;
}

// 3. The analytic red rate deviates more than the blue at strong drive.
Criterion criterion_red_deviation() {
  Criterion c;
  const DeviceParams p;
  const double amp = 0.080;
  const AnticrossingResult blue = cas_rate_numeric(p, amp, Transition::Blue);
  const AnticrossingResult red = cas_rate_numeric(p, amp, Transition::Red);
  const CasRates analytic = analytic_cas_rates(p, amp);
  const double dev_blue = std::abs(blue.rate - std::abs(analytic.blue)) / std::abs(analytic.blue);
  const double dev_red = std::abs(red.rate - std::abs(analytic.red)) / std::abs(analytic.red);
  c.require(dev_red > dev_blue, "red deviation " + fmt(dev_red * 100) + "% exceeds blue " +
                                    fmt(dev_blue * 100) + "% at 80 MHz drive");
  return c;
}

// 4. Resonance location at 72 MHz drive and the weak-drive limit.
Criterion criterion_resonance() {
  Criterion c;
  const DeviceParams p;
  const AnticrossingResult r = cas_rate_numeric(p, 0.072, Transition::Blue);
  const double offset_mhz = (r.omega_resonance - 6.4207) * 1e3;
  c.require(std::abs(offset_mhz) <= 5.0,
            "numeric resonance " + fmt(r.omega_resonance) + " GHz vs measured 6.4207 GHz (" +
                fmt(offset_mhz) + " MHz)");
  if (std::abs(offset_mhz) > 5.0) {
    c.note("the quartic-oscillator model underestimates the measured drive-induced");
    c.note("shift at strong drive; its own weak-drive limit below is accurate");
  }
  const AnticrossingResult weak = cas_rate_numeric(p, 0.002, Transition::Blue);
  const WeakDriveFrequencies w = analytic_weak_drive_frequencies(p);
  c.require(std::abs(weak.omega_resonance - w.blue) * 1e3 <= 1.0,
            "weak-drive resonance converges to the closed form within 1 MHz (" +
                fmt(std::abs(weak.omega_resonance - w.blue) * 1e3) + " MHz)");
  return c;
}

// 5. Chevron: the time-domain oscillation frequency on resonance equals the
// anticrossing splitting.
Criterion criterion_chevron() {
  Criterion c;
  const DeviceParams p;
  const double amp = 0.072;
  const std::vector<double> delta = linspace(-0.008, 0.008, 11);
  const std::vector<double> tau = linspace(0.0, 1500.0, 21);
  const ChevronResult res = chevron_scan(p, amp, delta, tau, Transition::Blue);

  const int mid = 5;
  std::vector<double> pop;
  for (Eigen::Index col = 0; col < res.population.cols(); ++col) {
    pop.push_back(res.population(mid, col));
  }
  const OscillationFit fit = fit_oscillation(tau, pop);
  const double rel = std::abs(fit.frequency - res.rate_numeric) / res.rate_numeric;
  c.require(rel <= 0.05, "on-resonance oscillation " + fmt(fit.frequency * 1e3) +
                             " MHz vs splitting " + fmt(res.rate_numeric * 1e3) + " MHz (" +
                             fmt(rel * 100) + "%)");
  double lo = 1.0, hi = 0.0;
  for (Eigen::Index i = 0; i < res.population.size(); ++i) {
    lo = std::min(lo, res.population(i));
    hi = std::max(hi, res.population(i));
  }
  c.require(lo >= -1e-9 && hi <= 1.0 + 1e-9, "populations within [0, 1]");
  return c;
}

// 6. Calibrated gate fidelity with the coherence table, and the
// coherence-free bound.
Criterion criterion_cz_fidelity() {
  Criterion c;
  const DeviceParams p;
  const CzCalibration cal = calibrate_cz(p, 0.075);
  c.note("calibrated drive " + fmt(cal.omega_d) + " GHz, plateau " + fmt(cal.plateau) + " ns");
  c.require(cal.plateau >= 400.0 && cal.plateau <= 520.0,
            "calibrated plateau inside the full-cycle window 400-520 ns");
  c.require(std::abs(cal.predicted_controlled_phase - std::numbers::pi) <= 0.02,
            "controlled phase after correction within 0.02 rad of pi (" +
                fmt(cal.predicted_controlled_phase) + ")");

  ChannelOptions opts;
  const FidelityResult coherent =
      average_gate_fidelity(channel_superoperator(p, cal, std::nullopt, opts));
  c.require(coherent.fbar >= 0.999,
            "coherence-free calibrated fidelity " + fmt(coherent.fbar) + " >= 0.999");

  const CoherenceParams table;
  opts.t2_choice = T2Choice::Ramsey;
  const ChannelAnalysis noisy = channel_superoperator(p, cal, table, opts);
  const FidelityResult ramsey = average_gate_fidelity(noisy);
  c.require(std::abs(ramsey.fbar - 0.978) <= 0.005,
            "coherence-limited fidelity " + fmt(ramsey.fbar) + ", target 0.978 +- 0.005");
  c.require(noisy.trace_residual <= 1e-6,
            "channel trace preserving to 1e-6 (residual " + fmt(noisy.trace_residual) + ")");
  opts.t2_choice = T2Choice::Echo;
  const FidelityResult echo =
      average_gate_fidelity(channel_superoperator(p, cal, table, opts));
  c.note("echo-time variant fidelity " + fmt(echo.fbar) + ", leakage " + fmt(ramsey.leakage));
  return c;
}

// 7. Drive-detuning scan of the ZZ interaction: cancellation point and the
// dispersive form.
Criterion criterion_driven_zz() {
  Criterion c;
  const DeviceParams p;
  const double amp = 0.0073;

  const auto xi_pair = [&](double delta) {
    DriveParams d;
    d.amp = amp;
    d.omega_d = p.omega[2];
    const AcStarkShift stark = ac_stark_shift(p, d);
    d.omega_d = stark.blue + delta;
    return std::pair<double, double>{tunable_zz(p, d, ZzMethod::Driven).xi_zz,
                                     tunable_zz(p, d, ZzMethod::Analytic).xi_zz};
  };

  bool crossed = false;
  double prev = xi_pair(-0.015).first;
  for (const double delta : linspace(-0.014, -0.001, 14)) {
    const double cur = xi_pair(delta).first;
    if (prev * cur < 0.0) crossed = true;
    prev = cur;
  }
  c.require(crossed, "the static interaction is cancelled at a negative detuning");

  const double blue_rate = std::abs(analytic_cas_rates(p, amp).blue);
  double worst = 0.0, worst_delta = 0.0;
  for (const double delta : linspace(-0.012, 0.012, 13)) {
    if (std::abs(delta) <= 5.0 * blue_rate) continue;
    const auto [numeric, analytic] = xi_pair(delta);
    const double rel = std::abs(analytic - numeric) / std::abs(numeric);
    if (rel > worst) {
      worst = rel;
      worst_delta = delta;
    }
  }
  c.require(worst <= 0.20, "dispersive form within 20% of the quasi-energy curve beyond five "
                           "linewidths (worst " +
                               fmt(worst * 100) + "% at " + fmt(worst_delta * 1e3) + " MHz)");
  if (worst > 0.20) {
    c.note("the quasi-energy curve confirms a resonant pole twice the printed");
    c.note("dispersive coefficient plus a smooth drive-induced background; see the");
    c.note("far negative branch where the printed form does approach the numerics");
  }
  return c;
}

// 8. Design maps: efficiency unaffected by the direct coupling, which
// strictly enlarges the low-ZZ region.
Criterion criterion_design_maps() {
  Criterion c;
  SweepSpec spec;
  spec.x_points = 40;
  spec.y_points = 40;
  spec.x_min = 0.5;
  spec.x_max = 5.0;
  spec.y_min = 0.005;
  spec.y_max = 0.15;

  spec.include_g12 = true;
  const SweepGrid with = design_map(spec);
  spec.include_g12 = false;
  const SweepGrid without = design_map(spec);

  bool bitwise = with.eta.size() == without.eta.size();
  for (Eigen::Index i = 0; bitwise && i < with.eta.size(); ++i) {
    bitwise = std::memcmp(&with.eta(i), &without.eta(i), sizeof(double)) == 0;
  }
  c.require(bitwise, "efficiency grids are bitwise identical with and without g12");

  int low_with = 0, low_without = 0;
  for (Eigen::Index i = 0; i < with.xi_zz.size(); ++i) {
    if (std::abs(with.xi_zz(i)) < 100e-6) ++low_with;
    if (std::abs(without.xi_zz(i)) < 100e-6) ++low_without;
  }
  c.require(low_with > low_without,
            "strictly more low-ZZ cells with the direct coupling (" + fmt(low_with) + " vs " +
                fmt(low_without) + " of 1600)");
  return c;
}

// 9. Always-on property suite.
Criterion criterion_properties() {
  Criterion c;
  const DeviceParams p;

  // Hermiticity / anti-Hermiticity residuals.
  const SwDecomposition sw = sw_decompose(p);
  const OperatorMatrix h = build_static_hamiltonian(p, true);
  c.require((h.data - h.data.adjoint()).norm() / h.data.norm() < 1e-10,
            "static Hamiltonian Hermitian to 1e-10");
  c.require((sw.s1.data + sw.s1.data.adjoint()).norm() < 1e-10 &&
                (sw.s2.data + sw.s2.data.adjoint()).norm() < 1e-10,
            "transformation generators anti-Hermitian to 1e-10");

  // Cubic scaling of the transformed off-diagonal residual.
  const auto residual = [](const DeviceParams& q) {
    const SwDecomposition s = sw_decompose(q);
    const ComplexMatrix htot = s.h0.data + s.o1.data;
    const ComplexMatrix gen = s.s1.data + s.s2.data;
    const ComplexMatrix commutator1 = gen * htot - htot * gen;
    const ComplexMatrix transformed =
        htot - commutator1 + 0.5 * (gen * commutator1 - commutator1 * gen);
    ComplexMatrix off = transformed;
    off.diagonal().setZero();
    return off.norm();
  };
  DeviceParams half = p;
  half.g1c *= 0.5;
  half.g2c *= 0.5;
  const double ratio = residual(p) / residual(half);
  c.require(ratio >= 7.0 && std::abs(ratio - 8.0) / 8.0 <= 0.15,
            "residual drops by " + fmt(ratio) + "x when the couplings halve (cubic scaling)");

  // Norm and trace conservation through a full-length pulse.
  const AnticrossingResult res = cas_rate_numeric(p, 0.075, Transition::Blue);
  DriveParams d;
  d.omega_d = res.omega_resonance;
  d.amp = 0.075;
  d.envelope = PulseShape::flat_top(0.075, 430.0, 10.0);
  const ComplexVector psi0 = basis_state(p.dims, BareLabel(0, 1, 0));
  const Trajectory traj = evolve_schrodinger(p, d, psi0, {0.0, d.envelope->duration()},
                                             Frame::Rotating);
  const double norm_drift = std::abs(traj.states.back().norm() - 1.0);
  c.require(norm_drift < 1e-8, "state norm conserved to 1e-8 (drift " + fmt(norm_drift) + ")");

  DeviceParams small = p;
  small.dims = ModeDims(3, 3, 3);
  const CoherenceParams coh;
  const auto ops = collapse_operators(small, coh, T2Choice::Ramsey);
  const ComplexVector e0 = basis_state(small.dims, BareLabel(1, 1, 0));
  DriveParams ds = d;
  ds.envelope = PulseShape::flat_top(0.075, 150.0, 10.0);
  const Trajectory lt = evolve_lindblad(small, ds, (e0 * e0.adjoint()).eval(),
                                        {0.0, ds.envelope->duration()}, ops);
  const double trace_drift = std::abs(lt.densities.back().trace().real() - 1.0) +
                             std::abs(lt.densities.back().trace().imag());
  c.require(trace_drift < 1e-8, "density trace conserved to 1e-8 (drift " + fmt(trace_drift) + ")");

  // The projector trace formula equals the Monte Carlo state average on a
  // random unitary channel.
  std::mt19937 rng(20260809);
  std::normal_distribution<double> gauss;
  const ModeDims dims = p.dims;
  const std::array<int, 4> comp{
      basis_index(dims, BareLabel(0, 0, 0)), basis_index(dims, BareLabel(0, 1, 0)),
      basis_index(dims, BareLabel(1, 0, 0)), basis_index(dims, BareLabel(1, 1, 0))};
  Eigen::Matrix4cd g;
  for (int r = 0; r < 4; ++r) {
    for (int k = 0; k < 4; ++k) g(r, k) = Complex(gauss(rng), gauss(rng));
  }
  const Eigen::HouseholderQR<Eigen::Matrix4cd> qr(g);
  const Eigen::Matrix4cd q4 = qr.householderQ();
  ComplexMatrix v = ComplexMatrix::Identity(dims.dim(), dims.dim());
  for (int r = 0; r < 4; ++r) {
    for (int k = 0; k < 4; ++k) {
      v(comp[static_cast<std::size_t>(r)], comp[static_cast<std::size_t>(k)]) = q4(r, k);
    }
  }
  const ChannelAnalysis channel = channel_from_unitary(v, dims);
  const ComplexMatrix ideal = cz_unitary(dims);
  const FidelityResult f = average_gate_fidelity(channel, ideal);

  double mc = 0.0;
  const int samples = 10000;
  for (int s = 0; s < samples; ++s) {
    Eigen::Vector4cd amps;
    for (int i = 0; i < 4; ++i) amps(i) = Complex(gauss(rng), gauss(rng));
    amps.normalize();
    ComplexVector psi = ComplexVector::Zero(dims.dim());
    for (int i = 0; i < 4; ++i) psi(comp[static_cast<std::size_t>(i)]) = amps(i);
    const ComplexVector out = ideal * (v * psi);
    mc += std::norm(psi.dot(out));
  }
  mc /= samples;
  c.require(std::abs(f.fbar - mc) / mc <= 0.005,
            "trace-formula fidelity " + fmt(f.fbar) + " equals the state average " + fmt(mc) +
                " within 0.5%");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  struct Entry {
    const char* name;
    std::function<Criterion()> run;
  };
  const std::vector<Entry> entries{
      {"static ZZ strength", criterion_static_zz},
      {"swap-rate amplitude sweep", criterion_cas_rate},
      {"red-branch deviation at strong drive", criterion_red_deviation},
      {"resonance location and weak-drive limit", criterion_resonance},
      {"chevron consistency", criterion_chevron},
      {"controlled-phase gate fidelity", criterion_cz_fidelity},
      {"drive-tunable ZZ cancellation", criterion_driven_zz},
      {"design-space maps", criterion_design_maps},
      {"property suite", criterion_properties},
  };

  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);

  int failures = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (only != 0 && static_cast<int>(i) + 1 != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Criterion c;
    try {
      c = entries[i].run();
    } catch (const std::exception& e) {
      c.pass = false;
      c.details.push_back(std::string("    error: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %zu: %s (%.1f s)\n", c.pass ? "PASS" : "FAIL", i + 1,
                entries[i].name, seconds);
    for (const std::string& line : c.details) std::printf("%s\n", line.c_str());
    std::fflush(stdout);
    if (!c.pass) ++failures;
  }
  return failures;
}
