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
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "casq/device.hpp"
#include "casq/hilbert.hpp"
#include "casq/ode.hpp"
#include "casq/pulse.hpp"
#include "casq/types.hpp"

namespace casq {

/// Coherence times per transmon, in microseconds (order Q1, Q2, Qc).
struct CoherenceParams {
  std::array<double, 3> t1{95.0, 108.0, 15.0};
  std::array<double, 3> t2_ramsey{76.0, 81.0, 15.0};
  std::array<double, 3> t2_echo{88.0, 166.0, 18.0};

  void validate() const;
};

enum class T2Choice { Ramsey, Echo };

/// Lindblad collapse operators with rates folded in (units 1/sqrt(ns)):
/// relaxation sqrt(1/T1) a_i and pure dephasing sqrt(2 Gamma_phi) n_i with
/// Gamma_phi = 1/T2 - 1/(2 T1). Throws NegativeDephasing if Gamma_phi < 0.
std::vector<OperatorMatrix> collapse_operators(const DeviceParams& p, const CoherenceParams& c,
                                               T2Choice t2_choice);

enum class Frame { Lab, Rotating };

struct Trajectory {
  std::vector<double> times;                 // ns
  std::vector<ComplexVector> states;         // pure-state path
  std::vector<ComplexMatrix> densities;      // density-matrix path
  std::map<std::string, std::vector<double>> observables;  // label -> population
};

/// Population of one bare basis state.
double population(const ComplexVector& psi, const ModeDims& dims, const BareLabel& label);
double population(const ComplexMatrix& rho, const ModeDims& dims, const BareLabel& label);

/// Total population of the n-th excited manifold of one mode.
double mode_population(const ComplexVector& psi, const ModeDims& dims, Mode mode, int n);
double mode_population(const ComplexMatrix& rho, const ModeDims& dims, Mode mode, int n);

/// Propagates the time-dependent Schroedinger equation across t_grid and
/// samples the state at every grid time. The drive follows the envelope of
/// d (continuous drive at fixed amplitude if no envelope is set). In the
/// lab frame the full cos(omega_d t) drive is kept; in the rotating frame
/// the drive is (amp(t)/2)(adag_c + a_c) under the RWA.
/// Populations of `tracked` labels are recorded as observables.
Trajectory evolve_schrodinger(const DeviceParams& p, const DriveParams& d,
                              const ComplexVector& psi0, const std::vector<double>& t_grid,
                              Frame frame, const std::vector<BareLabel>& tracked = {},
                              const OdeOptions& opts = {}, bool include_g12 = true);

/// Lindblad master equation propagation (same drive handling as above).
Trajectory evolve_lindblad(const DeviceParams& p, const DriveParams& d,
                           const ComplexMatrix& rho0, const std::vector<double>& t_grid,
                           const std::vector<OperatorMatrix>& collapse,
                           Frame frame = Frame::Rotating,
                           const std::vector<BareLabel>& tracked = {},
                           const OdeOptions& opts = {}, bool include_g12 = true);

/// Rotating-frame propagation of a flat-top pulse split into stages: the
/// Gaussian edges are integrated adaptively, the constant plateau is applied
/// exactly through the eigendecomposition of the plateau Hamiltonian.
/// Stage operators do not depend on the plateau length, so one instance
/// serves a whole pulse-duration scan.
class PulsePropagator {
 public:
  PulsePropagator(const DeviceParams& p, double omega_d, double amp, double sigma_ns = 10.0,
                  const OdeOptions& opts = {}, bool include_g12 = true);

  ComplexVector apply_rising(const ComplexVector& psi) const;
  ComplexVector apply_plateau(const ComplexVector& psi, double plateau_ns) const;
  ComplexVector apply_falling(const ComplexVector& psi) const;

  /// Full pulse: rising edge, plateau of plateau_ns, falling edge.
  ComplexVector propagate(const ComplexVector& psi0, double plateau_ns) const;

  /// Unitary of the full pulse (edges integrated as matrix ODEs, cached).
  ComplexMatrix propagator(double plateau_ns) const;

  double edge_duration() const { return 2.0 * sigma_; }
  double total_duration(double plateau_ns) const { return 4.0 * sigma_ + plateau_ns; }
  const ComplexMatrix& plateau_hamiltonian() const { return h_plateau_; }
  const RealVector& plateau_eigenvalues() const { return plateau_evals_; }
  const ComplexMatrix& plateau_eigenvectors() const { return plateau_evecs_; }
  const ComplexMatrix& rising_propagator() const;
  const ComplexMatrix& falling_propagator() const;
  const DeviceParams& device() const { return params_; }
  double drive_frequency() const { return omega_d_; }
  double amplitude() const { return amp_; }

 private:
  void build_edge_propagators() const;
  ComplexVector apply_edge(const ComplexVector& psi, bool rising) const;

  DeviceParams params_;
  double omega_d_;
  double amp_;
  double sigma_;
  OdeOptions opts_;
  bool include_g12_;
  ComplexMatrix h_base_;     // rotating frame, no drive
  ComplexMatrix x_op_;       // adag_c + a_c
  ComplexMatrix h_plateau_;  // h_base + pi*amp*x
  RealVector plateau_evals_;
  ComplexMatrix plateau_evecs_;
  mutable ComplexMatrix edge_rise_u_;  // lazily built matrix propagators
  mutable ComplexMatrix edge_fall_u_;
};

struct ChevronResult {
  RealVector delta;      // GHz, drive detuning from the numeric resonance
  RealVector tau;        // ns, plateau duration
  RealMatrix population; // rows = delta, cols = tau
  double omega_resonance = 0.0;  // GHz
  double rate_numeric = 0.0;     // GHz, anticrossing splitting
};

struct ChevronOptions {
  double sigma_ns = 10.0;
  int jobs = 1;
  OdeOptions ode{};
  bool include_g12 = true;
};

/// Population-transfer map of a CAS transition: for each detuning the pulse
/// is propagated from the prepared state (|010> blue, |100> red) and the
/// excited-state population of the swapped data transmon is recorded after
/// the pulse for every plateau duration.
ChevronResult chevron_scan(const DeviceParams& p, double amp, const std::vector<double>& delta,
                           const std::vector<double>& tau, Transition transition,
                           const ChevronOptions& opts = {});

struct OscillationFit {
  double frequency = 0.0;  // same inverse units as the abscissa
  double amplitude = 0.0;
  double phase = 0.0;      // radians
  double offset = 0.0;
  double residual = 0.0;   // rms of the fit residual
  bool low_confidence = false;  // fewer than 3 oscillation periods
};

/// Least-squares fit of y ~ A cos(2 pi f x + phi) + C. The frequency is
/// located by a dense scan with the linear parameters solved exactly per
/// trial frequency, then refined parabolically.
OscillationFit fit_oscillation(const std::vector<double>& x, const std::vector<double>& y);

/// Images of the matrix units |i><j| under the Lindblad channel of one
/// flat-top pulse, by direct master-equation integration. Unit pairs are
/// flat basis indices (i, j); each image is a D x D matrix.
std::vector<ComplexMatrix> propagate_units_lindblad_rk(
    const PulsePropagator& prop, double plateau_ns,
    const std::vector<OperatorMatrix>& collapse,
    const std::vector<std::pair<int, int>>& units, const OdeOptions& opts = {});

struct WeakDissipationOptions {
  // Interaction-picture frequency mismatches beyond this cutoff (rad/ns)
  // are dropped from the time-averaged dissipator; their contribution is
  // suppressed as 2/(tau * cutoff) relative to the resonant terms.
  double omega_cutoff = 1.0;
  // Relative amplitude below which dissipator kernel terms are dropped.
  double amplitude_cutoff = 1e-7;
};

/// Same channel as above in the weak-dissipation approximation: the
/// coherent propagation is exact (edge propagators plus eigenbasis plateau)
/// and the collapse channels enter through the time-averaged dissipator of
/// the plateau interaction picture (first Magnus order), with the short
/// edges dissipating in place. Trace preservation is exact by construction;
/// accuracy is second order in the per-channel decay per gate.
std::vector<ComplexMatrix> propagate_units_weak_dissipation(
    const PulsePropagator& prop, double plateau_ns,
    const std::vector<OperatorMatrix>& collapse,
    const std::vector<std::pair<int, int>>& units, const WeakDissipationOptions& opts = {});

}  // namespace casq
