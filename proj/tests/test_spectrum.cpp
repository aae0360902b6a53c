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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "casq/spectrum.hpp"
#include "casq/swt.hpp"

using namespace casq;

TEST_CASE("diagonal operator labels map to themselves") {
  const ModeDims dims(3, 3, 3);
  ComplexMatrix h = ComplexMatrix::Zero(dims.dim(), dims.dim());
  for (int i = 0; i < dims.dim(); ++i) h(i, i) = 0.1 * i;
  const auto labels = all_labels(dims);
  const LabeledSpectrum s = diagonalize_and_label(OperatorMatrix(dims, h), labels);
  for (int i = 0; i < dims.dim(); ++i) {
    const int eig = s.eigen_index(dims, labels[static_cast<std::size_t>(i)]);
    CHECK(s.eigenvalues(eig) == doctest::Approx(0.1 * i).epsilon(1e-14));
    CHECK(std::norm(s.eigenvectors(i, eig)) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("dressed coupler energy sits a few MHz above its bare frequency") {
  const DeviceParams p;
  const OperatorMatrix h = build_static_hamiltonian(p, true);
  const LabeledSpectrum s =
      diagonalize_and_label(h, {BareLabel(0, 0, 1), BareLabel(0, 0, 0)});
  const double ec = s.energy_ghz(p.dims, BareLabel(0, 0, 1));
  CHECK(std::abs(ec - p.omega[2]) < 5e-3);
}

TEST_CASE("resonant mixing is reported as ambiguous") {
  DeviceParams p;
  p.dims = ModeDims(2, 2, 2);
  p.omega = {5.0, 9.0, 5.0};  // Q1 resonant with the coupler
  p.alpha = {0.0, 0.0, 0.0};
  p.g1c = 0.05;
  p.g2c = 0.0;
  p.g12 = 0.0;
  const OperatorMatrix h = build_static_hamiltonian(p, false);
  CHECK_THROWS_AS(
      diagonalize_and_label(h, {BareLabel(1, 0, 0), BareLabel(0, 0, 1)}), LabelAmbiguous);
}

TEST_CASE("zz strength vanishes without any coupling path") {
  DeviceParams p;
  p.g1c = 0.0;
  p.g12 = 0.0;  // g2c alone cannot connect the data transmons
  const ZzReport r = zz_strength(p, true);
  CHECK(std::abs(r.xi_zz) < 1e-10);
}

TEST_CASE("static zz of the default device") {
  // Oracle-checked against an independent dense-diagonalization pipeline;
  // converged in the truncation to eight levels.
  const DeviceParams p;
  const ZzReport with = zz_strength(p, true);
  CHECK(with.xi_zz == doctest::Approx(-3.2174e-6).epsilon(1e-3));
  const ZzReport without = zz_strength(p, false);
  CHECK(without.xi_zz == doctest::Approx(23.2898e-6).epsilon(1e-3));
}

TEST_CASE("closed-form static zz and effective coupling") {
  const DeviceParams p;
  const StaticZzAnalytic a = static_zz_analytic(p);
  CHECK(a.g_eff == doctest::Approx(1.174e-4).epsilon(1e-3));
  CHECK(a.xi_0 == doctest::Approx(-2.292e-7).epsilon(1e-3));

  // Tuning the direct coupling to cancel the mediated exchange nulls the
  // closed form.
  DeviceParams q;
  const Detunings d = detunings(q);
  q.g12 = -0.5 * q.g1c * q.g2c * (1.0 / d.delta_1c + 1.0 / d.delta_2c);
  CHECK(std::abs(static_zz_analytic(q).xi_0) < 1e-18);

  DeviceParams r;
  r.alpha[0] = 0.0;
  r.alpha[1] = 0.0;
  CHECK(static_zz_analytic(r).xi_0 == 0.0);
}

TEST_CASE("straddling-boundary poles raise singular denominators") {
  DeviceParams p;
  p.omega[0] = p.omega[1] - p.alpha[0];  // Delta_12 + alpha_1 = 0
  CHECK_THROWS_AS(static_zz_analytic(p), SingularDenominator);
}

TEST_CASE("anticrossing rate and location at the reference drive") {
  const DeviceParams p;
  const AnticrossingResult blue = cas_rate_numeric(p, 0.072, Transition::Blue);
  CHECK(blue.rate == doctest::Approx(2.06e-3).epsilon(0.01));
  CHECK(blue.omega_resonance == doctest::Approx(6.4302).epsilon(1e-4));

  // Against the closed form at the same amplitude.
  const CasRates analytic = analytic_cas_rates(p, 0.072);
  CHECK(std::abs(blue.rate - std::abs(analytic.blue)) / std::abs(analytic.blue) < 0.10);
}

TEST_CASE("weak-drive anticrossing converges to the effective transition") {
  const DeviceParams p;
  const AnticrossingResult r = cas_rate_numeric(p, 0.002, Transition::Blue);
  const WeakDriveFrequencies w = analytic_weak_drive_frequencies(p);
  CHECK(std::abs(r.omega_resonance - w.blue) < 1e-3);
  CHECK(r.rate < 1e-4);
  // Linearity in the drive at small amplitudes.
  const AnticrossingResult r2 = cas_rate_numeric(p, 0.004, Transition::Blue);
  CHECK(r2.rate / r.rate == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("rate per amplitude is constant at small drive") {
  const DeviceParams p;
  const double r5 = cas_rate_numeric(p, 0.005, Transition::Blue).rate / 0.005;
  const double r20 = cas_rate_numeric(p, 0.020, Transition::Blue).rate / 0.020;
  CHECK(std::abs(r20 - r5) / r5 < 0.02);
}

TEST_CASE("a window that misses the transition reports no anticrossing") {
  const DeviceParams p;
  AnticrossingOptions opts;
  opts.window_halfwidth = 0.004;
  opts.coarse_points = 41;
  opts.center = analytic_weak_drive_frequencies(p).blue + 0.020;
  CHECK_THROWS_AS(cas_rate_numeric(p, 0.010, Transition::Blue, opts), NoAnticrossing);
}

TEST_CASE("scan direction does not move the minimum") {
  const DeviceParams p;
  AnticrossingOptions fwd;
  const AnticrossingResult a = cas_rate_numeric(p, 0.030, Transition::Blue, fwd);
  // Offsetting the window center asymmetrically probes the refinement from
  // the other side of the minimum.
  AnticrossingOptions off;
  off.center = a.omega_resonance + 0.007;
  off.window_halfwidth = 0.020;
  const AnticrossingResult b = cas_rate_numeric(p, 0.030, Transition::Blue, off);
  CHECK(std::abs(a.omega_resonance - b.omega_resonance) < 5e-6);
  CHECK(a.rate == doctest::Approx(b.rate).epsilon(1e-6));
}

TEST_CASE("stark shift is quadratic in the drive and vanishes at zero amplitude") {
  const DeviceParams p;
  DriveParams d;
  d.omega_d = 6.43;
  d.amp = 0.0;
  const AcStarkShift none = ac_stark_shift(p, d);
  CHECK(none.shift == 0.0);
  const WeakDriveFrequencies w = analytic_weak_drive_frequencies(p);
  CHECK(none.blue == doctest::Approx(w.blue).epsilon(1e-15));

  d.amp = 0.036;
  const AcStarkShift half = ac_stark_shift(p, d);
  d.amp = 0.072;
  const AcStarkShift full = ac_stark_shift(p, d);
  CHECK(full.shift == doctest::Approx(4.0 * half.shift).epsilon(1e-12));
}

TEST_CASE("stark-shifted frequency tracks the numeric resonance") {
  const DeviceParams p;
  const AnticrossingResult r = cas_rate_numeric(p, 0.072, Transition::Blue);
  DriveParams d;
  d.omega_d = r.omega_resonance;
  d.amp = 0.072;
  const AcStarkShift stark = ac_stark_shift(p, d);
  CHECK(std::abs(stark.blue - r.omega_resonance) < 0.010);
}

TEST_CASE("tunable zz reduces to the static value without drive") {
  const DeviceParams p;
  DriveParams d;
  d.omega_d = 6.47;  // off resonance
  d.amp = 0.0;
  const ZzReport analytic = tunable_zz(p, d, ZzMethod::Analytic);
  const ZzReport static_zz = zz_strength(p, true);
  CHECK(analytic.xi_zz == doctest::Approx(static_zz.xi_zz).epsilon(1e-9));
  const ZzReport numeric = tunable_zz(p, d, ZzMethod::Driven);
  CHECK(numeric.xi_zz == doctest::Approx(static_zz.xi_zz).epsilon(1e-6));
}

TEST_CASE("driven zz crosses zero below the transition and flips sign across it") {
  const DeviceParams p;
  const double amp = 0.0073;

  const auto xi_at = [&](double delta) {
    DriveParams d;
    d.amp = amp;
    d.omega_d = 6.45;
    const AcStarkShift stark = ac_stark_shift(p, d);
    d.omega_d = stark.blue + delta;
    return tunable_zz(p, d, ZzMethod::Driven).xi_zz;
  };

  // A sign change exists on the negative-detuning branch.
  bool crossed = false;
  double prev = xi_at(-0.012);
  for (double delta = -0.011; delta < -0.0008; delta += 0.001) {
    const double cur = xi_at(delta);
    if (prev < 0.0 && cur > 0.0) crossed = true;
    prev = cur;
  }
  CHECK(crossed);

  // The drive-induced part flips sign across the resonance.
  const double below = xi_at(-0.0012);
  const double above = xi_at(+0.0012);
  const double xi0 = zz_strength(p, true).xi_zz;
  CHECK((below - xi0) > 0.0);
  CHECK((above - xi0) < 0.0);
}

TEST_CASE("dispersive form tracks the quasi-energy curve far from resonance") {
  // At ten linewidth-scales below the transition the single-pole form and
  // the quasi-energy numerics agree; closer in, drive-induced background
  // shifts beyond the single-pole model appear (checked at its true size).
  const DeviceParams p;
  DriveParams d;
  d.amp = 0.0073;
  d.omega_d = 6.44;
  const AcStarkShift stark = ac_stark_shift(p, d);
  d.omega_d = stark.blue - 0.010;
  const double ana = tunable_zz(p, d, ZzMethod::Analytic).xi_zz;
  const double num = tunable_zz(p, d, ZzMethod::Driven).xi_zz;
  CHECK(std::abs(ana - num) / std::abs(num) < 0.20);
}

TEST_CASE("design map efficiency is independent of the direct coupling") {
  SweepSpec spec;
  spec.x_points = 6;
  spec.y_points = 5;
  spec.x_min = 1.5;
  spec.x_max = 4.0;
  spec.y_min = 0.02;
  spec.y_max = 0.12;

  spec.include_g12 = false;
  const SweepGrid a = design_map(spec);
  spec.include_g12 = true;
  const SweepGrid b = design_map(spec);

  REQUIRE(a.eta.size() == b.eta.size());
  for (Eigen::Index i = 0; i < a.eta.size(); ++i) {
    CHECK(a.eta(i) == b.eta(i));  // bitwise
  }
  // The direct coupling suppresses the residual interaction somewhere.
  int low_without = 0, low_with = 0;
  for (Eigen::Index i = 0; i < a.xi_zz.size(); ++i) {
    if (std::abs(a.xi_zz(i)) < 100e-6) ++low_without;
    if (std::abs(b.xi_zz(i)) < 100e-6) ++low_with;
  }
  CHECK(low_with > low_without);
}

TEST_CASE("zero-coupling column reduces to the direct-coupling value") {
  SweepSpec spec;
  spec.x_points = 3;
  spec.y_points = 2;
  spec.x_min = 2.0;
  spec.x_max = 3.0;
  spec.y_min = 0.0;  // first row has no transverse coupling at all
  spec.y_max = 0.08;
  spec.include_g12 = true;
  const SweepGrid grid = design_map(spec);
  for (int ix = 0; ix < spec.x_points; ++ix) {
    CHECK(grid.eta(0, ix) == 0.0);
    const DeviceParams p = sweep_point_device(spec, grid.x_axis(ix), 0.0);
    const double expected = zz_strength(p, true).xi_zz;
    CHECK(grid.xi_zz(0, ix) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("cross-resonance map uses the effective-coupling efficiency") {
  SweepSpec spec;
  spec.mode = SweepMode::CrossResonance;
  spec.alpha = {-0.30, -0.30, 0.0};
  spec.x_points = 4;
  spec.y_points = 3;
  spec.x_min = 1.5;
  spec.x_max = 3.5;
  spec.y_min = 0.02;
  spec.y_max = 0.10;
  spec.include_g12 = false;
  const SweepGrid a = design_map(spec);
  spec.include_g12 = true;
  const SweepGrid b = design_map(spec);
  // Unlike the swap efficiency, the cross-resonance efficiency shifts with
  // the direct coupling.
  bool changed = false;
  for (Eigen::Index i = 0; i < a.eta.size(); ++i) {
    if (a.eta(i) != b.eta(i)) changed = true;
  }
  CHECK(changed);
}

TEST_CASE("design map grid points match the reconstruction of each device") {
  SweepSpec spec;
  const DeviceParams p = sweep_point_device(spec, 3.0, 0.1);
  CHECK(p.omega[1] == doctest::Approx(spec.omega_q2));
  CHECK(p.omega[0] - p.omega[1] ==
        doctest::Approx(3.0 * 0.5 * std::abs(spec.alpha[0] + spec.alpha[1])));
  CHECK(p.omega[2] - p.omega[0] == doctest::Approx(spec.coupler_offset));
  const Detunings d = detunings(p);
  CHECK(p.g1c == doctest::Approx(0.1 * std::abs(d.delta_1c)));
  CHECK(p.g2c == doctest::Approx(0.1 * std::abs(d.delta_2c)));
}
