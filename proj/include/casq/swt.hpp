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

#include "casq/device.hpp"
#include "casq/hilbert.hpp"
#include "casq/types.hpp"

namespace casq {

/// Second-order Schrieffer-Wolff decomposition of H = H0 + O1.
///
/// H0 is diagonal in the bare basis, O1 is the off-diagonal perturbation.
/// The anti-Hermitian generators satisfy
///   [H0, S1] + O1 = 0,   [H0, S2] + O2 = 0,
/// where D2 and O2 are the diagonal and off-diagonal parts of [O1, S1]/2.
/// The transformation that block-diagonalizes H with these conventions is
/// A -> exp(-S) A exp(S); it yields H' = H0 + D2 up to second order.
struct SwDecomposition {
  OperatorMatrix h0;
  OperatorMatrix o1;
  OperatorMatrix s1;
  OperatorMatrix d2;
  OperatorMatrix o2;
  OperatorMatrix s2;
};

/// Drive-induced oscillation frequencies of the blue and red transitions,
/// in GHz. Signs are carried; magnitudes correspond to measured rates.
struct CasRates {
  double blue;  // GHz, signed
  double red;   // GHz, signed
};

/// Transition frequencies in the weak drive limit, in GHz.
struct WeakDriveFrequencies {
  double blue;  // GHz
  double red;   // GHz
};

/// Minimum gap (angular rad/ns) between bare levels connected by O1, below
/// which the resolvent is treated as degenerate. 1 kHz ordinary frequency.
inline constexpr double kDegeneracyGap = two_pi * 1e-6;

/// Generator of the first-order transformation: S1_mn = O1_mn/(E_n - E_m)
/// off the diagonal, so that [H0, S1] + O1 = 0.
/// Throws DegenerateConnectedLevels if O1 connects bare levels closer than
/// the gap threshold.
OperatorMatrix solve_generator_order1(const OperatorMatrix& h0, const OperatorMatrix& o1,
                                      double gap_threshold = kDegeneracyGap);

struct SecondOrderParts {
  OperatorMatrix d2;
  OperatorMatrix o2;
  OperatorMatrix s2;
};

/// Splits [O1, S1]/2 into diagonal (D2) and off-diagonal (O2) parts and
/// solves [H0, S2] + O2 = 0 by the same resolvent.
SecondOrderParts solve_generator_order2(const OperatorMatrix& h0, const OperatorMatrix& s1,
                                        const OperatorMatrix& o1,
                                        double gap_threshold = kDegeneracyGap);

/// Full decomposition for a device: H0 = bare diagonal including self-Kerr,
/// O1 = transverse g_ic coupling (the direct g12 coupling is not part of
/// the perturbative treatment).
SwDecomposition sw_decompose(const DeviceParams& p);

/// H' = H0 + D2, the diagonalized Hamiltonian valid to second order.
OperatorMatrix effective_static_hamiltonian(const OperatorMatrix& h0, const OperatorMatrix& d2);

/// Drive operator expanded to second order in the coupling:
///   H'_d = Hd - [S1 + S2, Hd] + [S1, [S1, Hd]]/2,
/// i.e. exp(-S) Hd exp(S) truncated at second order, consistent with the
/// generator conditions above. Hd is the rotating-frame drive
/// (amp/2)(adag_c + a_c) in angular units.
OperatorMatrix effective_drive(const OperatorMatrix& hd, const OperatorMatrix& s1,
                               const OperatorMatrix& s2);

/// Signed transition matrix element read in the bare basis:
/// blue 2<010|H'_d|101>, red 2<100|H'_d|011>, reported in GHz.
/// The measured oscillation frequency is the magnitude.
double cas_rate_from_matrix_element(const OperatorMatrix& effective_drive_op,
                                    Transition transition);

/// Closed-form rates: Omega_b = 2 g1c g2c alpha_c amp /
/// [Delta12 (omega_c - omega_1 + alpha_c)(omega_c - omega_2)] and the red
/// counterpart with opposite sign and swapped denominators. amp in GHz.
CasRates analytic_cas_rates(const DeviceParams& p, double amp);

/// Weak-drive transition frequencies from the second-order level shifts.
WeakDriveFrequencies analytic_weak_drive_frequencies(const DeviceParams& p);

}  // namespace casq
