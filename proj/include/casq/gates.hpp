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

#include <optional>
#include <utility>
#include <vector>

#include "casq/device.hpp"
#include "casq/dynamics.hpp"
#include "casq/hilbert.hpp"
#include "casq/types.hpp"

namespace casq {

/// Ideal instantaneous rotation of the 0-1 subspace of one mode about the
/// equatorial axis at `axis_angle`, identity on higher levels.
ComplexMatrix qubit_rotation(const ModeDims& dims, Mode mode, double axis_angle, double angle);

/// Ideal CZ on the computational states |q1 q2 0>: phase -1 on |110>,
/// identity elsewhere.
ComplexMatrix cz_unitary(const ModeDims& dims);

inline double wrap_2pi(double x) {
  const double w = std::fmod(x, two_pi);
  return w < 0.0 ? w + two_pi : w;
}

inline double wrap_pi(double x) {
  const double w = wrap_2pi(x);
  return w > std::numbers::pi ? w - two_pi : w;
}

/// Candidate CAS drive for the controlled-phase gate.
struct CzDrive {
  double omega_d = 0.0;  // GHz
  double amp = 0.0;      // GHz
  double plateau = 0.0;  // ns
};

struct JazzOptions {
  int phi_points = 24;
  double sigma_ns = 10.0;
  OdeOptions ode{};
  double leakage_threshold = 0.05;
};

struct JazzResult {
  double controlled_phase = 0.0;        // rad, wrapped to [0, 2pi)
  double phase_control_excited = 0.0;   // rad, readout with Q1 prepared in |1>
  double coupler_leakage = 0.0;         // population outside nc = 0 after the echo
  bool leakage_flag = false;
  double fit_residual = 0.0;
};

/// Echo sequence of the controlled-phase measurement: pi/2 on Q2, CAS
/// pulse, pi on both data transmons, CAS pulse, measurement pi/2 on Q2 at
/// swept angle phi. Single-qubit rotations are ideal and instantaneous.
/// The controlled phase is the phase shift of the cosine fitted to the Q2
/// excited-state signal versus phi.
JazzResult simulate_jazz(const DeviceParams& p, const CzDrive& drive,
                         const std::vector<double>& phi_grid, const JazzOptions& opts = {});

struct CzCalibration {
  double omega_d = 0.0;   // GHz
  double plateau = 0.0;   // ns
  double amp = 0.0;       // GHz
  double theta1 = 0.0;    // rad, local phase of Q1 in its dressed frame
  double theta2 = 0.0;    // rad, local phase of Q2 in its dressed frame
  double theta1_raw = 0.0;  // rad, rotating-frame diagonal phases used by
  double theta2_raw = 0.0;  // the virtual-Z correction of the channel
  double predicted_controlled_phase = 0.0;  // rad
  double objective = 0.0;  // |110> population of the echo sequence at phi=0
};

struct CalibrationOptions {
  double sigma_ns = 10.0;
  OdeOptions ode{1e-9, 1e-12};
  double step_omega = 5e-4;   // GHz, initial pattern-search step
  double step_plateau = 8.0;  // ns
  double stop_omega = 2e-7;   // GHz
  double stop_plateau = 5e-3;  // ns
  int max_evals = 600;
  bool include_g12 = true;
};

/// Calibrates the resonant round-trip gate: starts from the numeric
/// anticrossing and a full-cycle plateau estimate, then maximizes the
/// phi = 0 population of |110> in the echo sequence by pattern search over
/// (drive frequency, plateau). Local phases are read from the diagonal of
/// the pulse propagator on the computational states.
CzCalibration calibrate_cz(const DeviceParams& p, double amp,
                           const CalibrationOptions& opts = {});

enum class ChannelScope { Computational, Full };
enum class ChannelMethod { Auto, LindbladRk, WeakDissipation };

struct ChannelOptions {
  ChannelScope scope = ChannelScope::Computational;
  ChannelMethod method = ChannelMethod::Auto;
  T2Choice t2_choice = T2Choice::Ramsey;
  double sigma_ns = 10.0;
  OdeOptions ode{1e-8, 1e-12};
  WeakDissipationOptions weak{};
};

/// Quantum channel of the calibrated pulse with the virtual-Z correction
/// composed in, stored as images of the basis matrix units |i><j|
/// (equivalently: columns i + D*j of the column-stacked superoperator).
struct ChannelAnalysis {
  ModeDims dims;
  int d = 4;  // dimension of the computational subspace
  std::vector<std::pair<int, int>> unit_pairs;
  std::vector<ComplexMatrix> images;
  std::array<int, 4> comp_indices{};  // flat indices of |00 0>,|01 0>,|10 0>,|11 0>
  double trace_residual = 0.0;        // max |Tr E(|i><i|) - 1| over diagonal units
  bool unitary_source = false;
};

/// Builds the channel by propagating matrix units through the calibrated
/// pulse: Schroedinger propagator conjugation without coherence parameters,
/// Lindblad evolution with them. Auto picks the weak-dissipation method.
ChannelAnalysis channel_superoperator(const DeviceParams& p, const CzCalibration& cal,
                                      const std::optional<CoherenceParams>& coherence,
                                      const ChannelOptions& opts = {});

/// Channel of an explicit unitary, for tests and reference points.
ChannelAnalysis channel_from_unitary(const ComplexMatrix& u, const ModeDims& dims,
                                     ChannelScope scope = ChannelScope::Computational);

/// Composes a virtual-Z phase correction exp(-i(t1 n1 + t2 n2)) after the
/// channel.
void apply_phase_correction(ChannelAnalysis& analysis, double theta1, double theta2);

/// Dense column-stacked superoperator of the stored columns. For a Full
/// scope this is the complete D^2 x D^2 matrix.
ComplexMatrix superoperator_matrix(const ChannelAnalysis& analysis);

struct FidelityResult {
  double fbar = 0.0;
  double leakage = 0.0;
};

/// Average gate fidelity of the composition ideal_unitary o channel via the
/// projector trace formula with d = 4, plus the leakage
/// 1 - Tr[P1 E(P1/d)].
FidelityResult average_gate_fidelity(const ChannelAnalysis& analysis,
                                     const ComplexMatrix& ideal_unitary);

/// Same with the ideal CZ as the reference gate.
FidelityResult average_gate_fidelity(const ChannelAnalysis& analysis);

}  // namespace casq
