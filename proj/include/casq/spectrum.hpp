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

#include <map>
#include <optional>
#include <vector>

#include "casq/device.hpp"
#include "casq/hilbert.hpp"
#include "casq/types.hpp"

namespace casq {

/// Eigendecomposition with eigenstates tagged to bare labels by maximum
/// squared overlap. Eigenvalues are angular (rad/ns), sorted ascending.
struct LabeledSpectrum {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;  // columns
  std::map<int, int> label_index_of;  // basis_index(label) -> eigenindex

  int eigen_index(const ModeDims& dims, const BareLabel& label) const;
  double energy(const ModeDims& dims, const BareLabel& label) const;  // rad/ns
  double energy_ghz(const ModeDims& dims, const BareLabel& label) const;
};

/// Full dense eigendecomposition of a Hermitian operator plus greedy
/// maximum-overlap label assignment. Conflicts are resolved by descending
/// overlap; unresolvable ties or best overlap^2 < 0.5 raise LabelAmbiguous.
LabeledSpectrum diagonalize_and_label(const OperatorMatrix& h,
                                      const std::vector<BareLabel>& labels);

enum class ZzMethod { Diagonalization, Analytic, Driven };

/// ZZ interaction report. All frequencies in GHz, signed.
struct ZzReport {
  double xi_zz = 0.0;          // GHz
  double xi_0_analytic = 0.0;  // GHz, second-order closed form
  double g_eff = 0.0;          // GHz, effective data-data transverse coupling
  ZzMethod method = ZzMethod::Diagonalization;
};

/// Static ZZ strength from diagonalization with the coupler in its ground
/// state: xi_zz = [E(110) - E(100) - E(010) + E(000)] / 2pi.
ZzReport zz_strength(const DeviceParams& p, bool include_g12);

/// Second-order closed form:
///   g_eff = (g1c g2c / 2)(1/Delta_1c + 1/Delta_2c) + g12,
///   xi_0 = 2 g_eff^2 (alpha_1 + alpha_2) / [(Delta_12 + alpha_1)(alpha_2 - Delta_12)].
struct StaticZzAnalytic {
  double xi_0;   // GHz
  double g_eff;  // GHz
};
StaticZzAnalytic static_zz_analytic(const DeviceParams& p);

struct AnticrossingOptions {
  double window_halfwidth = 0.030;  // GHz around the transition estimate
  int coarse_points = 201;
  double refine_tol = 1e-6;  // GHz resolution of the resonance location
  bool include_g12 = true;
  // Scan center; when unset, the Stark-shifted transition estimate is used.
  std::optional<double> center = std::nullopt;
};

struct AnticrossingResult {
  double rate = 0.0;             // GHz, minimum splitting
  double omega_resonance = 0.0;  // GHz, drive frequency at the minimum
};

/// Numeric oscillation rate: sweeps the drive frequency, diagonalizes the
/// rotating-frame Hamiltonian at each point, tracks the pair of branches
/// with the largest combined weight on the two transition states, and
/// refines the minimum splitting by golden-section search.
/// Throws NoAnticrossing if the splitting is monotone over the window.
AnticrossingResult cas_rate_numeric(const DeviceParams& p, double amp, Transition transition,
                                    const AnticrossingOptions& opts = {});

/// ac Stark shift of the coupler and shifted transition frequencies:
///   shift = alpha_c amp^2 / [2 delta_c (delta_c + alpha_c)],
/// evaluated at the drive frequency of d. All in GHz.
struct AcStarkShift {
  double shift;  // GHz
  double blue;   // GHz, shifted blue transition frequency
  double red;    // GHz, shifted red transition frequency
};
AcStarkShift ac_stark_shift(const DeviceParams& p, const DriveParams& d);

/// Drive-tunable ZZ strength.
/// Analytic: xi_zz = xi_0 - Omega_b^2 / (8 delta), delta = omega_d minus the
/// ac-Stark-shifted blue transition frequency; xi_0 is the static value from
/// diagonalization (the closed-form estimate is reported separately).
/// Numeric: quasi-energy combination of the rotating-frame Hamiltonian.
ZzReport tunable_zz(const DeviceParams& p, const DriveParams& d, ZzMethod method);

enum class SweepMode { CasBlue, CrossResonance };

/// Design-space sweep specification. The x axis is Delta_12/|alpha_mean|,
/// the y axis is |g_ic/Delta_ic| applied to both data transmons.
struct SweepSpec {
  SweepMode mode = SweepMode::CasBlue;
  bool include_g12 = false;
  double g12 = 0.0018;  // GHz, used when include_g12
  int x_points = 40;
  int y_points = 40;
  double x_min = 0.5;
  double x_max = 5.0;
  double y_min = 0.005;
  double y_max = 0.15;
  // Fixed background: coupler above Q1 by coupler_offset, Q2 fixed.
  double omega_q2 = 5.0;        // GHz
  double coupler_offset = 0.6;  // GHz, omega_c - omega_1
  std::array<double, 3> alpha{-0.20, -0.20, -0.45};  // GHz
  ModeDims dims{};
};

/// Per-cell status flags for SweepGrid.
enum : int {
  kCellOk = 0,
  kCellFailed = 1,         // labeling or denominator failure, value missing
  kCellBeyondDispersive = 2,  // |g/Delta| > 0.3, value computed but flagged
};

struct SweepGrid {
  SweepSpec spec;
  RealVector x_axis;   // Delta_12 / |alpha_mean|
  RealVector y_axis;   // g_ic / Delta_ic
  RealMatrix xi_zz;    // GHz, rows = y, cols = x
  RealMatrix eta;      // dimensionless drive efficiency
  Eigen::MatrixXi flags;
};

/// Residual-ZZ / drive-efficiency map over the design space. Cell failures
/// are recorded in flags, not fatal.
SweepGrid design_map(const SweepSpec& spec, int jobs = 1);

/// Device parameters at one sweep point (exposed for tests and the CLI).
DeviceParams sweep_point_device(const SweepSpec& spec, double x, double y);

}  // namespace casq
