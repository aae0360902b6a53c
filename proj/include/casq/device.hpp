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

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "casq/hilbert.hpp"
#include "casq/pulse.hpp"
#include "casq/types.hpp"

namespace casq {

/// Static parameters of the data-coupler-data transmon chain.
///
/// All frequency-like fields are ordinary frequencies in GHz
/// (angular frequency / 2pi); conversion to angular units happens only
/// inside the Hamiltonian builders.
struct DeviceParams {
  std::array<double, 3> omega{5.641, 5.507, 6.317};   // GHz, (Q1, Q2, Qc)
  std::array<double, 3> alpha{-0.300, -0.303, -0.381};  // GHz
  double g1c = 0.040;   // GHz, Q1-coupler transverse coupling
  double g2c = 0.031;   // GHz, Q2-coupler transverse coupling
  double g12 = 0.0018;  // GHz, direct data-data coupling
  ModeDims dims{};

  double omega_q1() const { return omega[0]; }
  double omega_q2() const { return omega[1]; }
  double omega_qc() const { return omega[2]; }
  double alpha_q1() const { return alpha[0]; }
  double alpha_q2() const { return alpha[1]; }
  double alpha_qc() const { return alpha[2]; }

  /// Checks hard invariants (throws) and returns soft warnings.
  std::vector<std::string> validate() const;
};

/// Coupler drive: frequency, amplitude and envelope.
struct DriveParams {
  double omega_d = 6.4207;  // GHz
  double amp = 0.072;       // GHz, peak amplitude of the drive
  std::optional<PulseShape> envelope;  // nullopt = continuous drive

  void validate() const;
};

/// Detunings derived from device and drive parameters, in GHz.
struct Detunings {
  double delta_12;  // omega1 - omega2
  double delta_1c;  // omega1 - omegac
  double delta_2c;  // omega2 - omegac
  double delta_1;   // omega1 - omegad
  double delta_2;   // omega2 - omegad
  double delta_c;   // omegac - omegad
};

Detunings detunings(const DeviceParams& p, double omega_d = 0.0);

/// Static Hamiltonian in angular units (rad/ns):
///   sum_i omega_i n_i + (alpha_i/2) adag adag a a
///   + g_ic (adag_i a_c + h.c.)  [+ g12 (adag_1 a_2 + h.c.)].
OperatorMatrix build_static_hamiltonian(const DeviceParams& p, bool include_g12);

/// Coupler quadrature (adag_c + a_c) embedded in the product space.
/// The lab-frame drive term is amp * cos(omega_d t) times this operator.
OperatorMatrix build_drive_operator(const DeviceParams& p);

/// Time-independent Hamiltonian in the frame rotating at the drive
/// frequency, with the rotating-wave approximation applied to the drive:
///   sum_i delta_i n_i + Kerr + couplings [+ g12] + (amp/2)(adag_c + a_c).
OperatorMatrix build_rotating_hamiltonian(const DeviceParams& p, const DriveParams& d,
                                          bool include_g12 = true);

/// Diagonal part of the static Hamiltonian (frequencies plus self-Kerr),
/// used as the unperturbed operator of the perturbative treatment.
OperatorMatrix build_bare_diagonal(const DeviceParams& p);

/// Transverse coupling part g_ic (adag_i a_c + h.c.), the off-diagonal
/// perturbation. Does not include the direct g12 term.
OperatorMatrix build_coupling(const DeviceParams& p);

}  // namespace casq
