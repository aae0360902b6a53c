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

#include "casq/device.hpp"

#include <cmath>

namespace casq {

std::vector<std::string> DeviceParams::validate() const {
  dims.validate();
  std::vector<std::string> warnings;
  const Detunings d = detunings(*this);
  if (d.delta_1c == 0.0) throw Error("DeviceParams: omega1 == omegac, dispersive ratio undefined");
  if (d.delta_2c == 0.0) throw Error("DeviceParams: omega2 == omegac, dispersive ratio undefined");
  for (int i = 0; i < 3; ++i) {
    if (alpha[static_cast<std::size_t>(i)] > 0.0) {
      warnings.push_back("anharmonicity of mode " + std::to_string(i) +
                         " is positive; transmons have negative anharmonicity");
    }
  }
  const double r1 = std::abs(g1c / d.delta_1c);
  const double r2 = std::abs(g2c / d.delta_2c);
  if (r1 > 0.3 || r2 > 0.3) {
    warnings.push_back("|g/Delta| exceeds 0.3; perturbative results are unreliable");
  }
  return warnings;
}

void DriveParams::validate() const {
  if (amp < 0.0) throw Error("DriveParams: amp must be >= 0");
  if (envelope) envelope->validate();
}

Detunings detunings(const DeviceParams& p, double omega_d) {
  Detunings d{};
  d.delta_12 = p.omega[0] - p.omega[1];
  d.delta_1c = p.omega[0] - p.omega[2];
  d.delta_2c = p.omega[1] - p.omega[2];
  d.delta_1 = p.omega[0] - omega_d;
  d.delta_2 = p.omega[1] - omega_d;
  d.delta_c = p.omega[2] - omega_d;
  return d;
}

namespace {

// Shared body of the static and rotating builders: mode frequencies are
// passed in ordinary GHz and converted to angular units here.
ComplexMatrix assemble(const DeviceParams& p, const std::array<double, 3>& freqs,
                       bool include_g12, double drive_half_amp) {
  const ModeDims& dims = p.dims;
  ComplexMatrix h = ComplexMatrix::Zero(dims.dim(), dims.dim());

  for (int m = 0; m < 3; ++m) {
    const Mode mode = static_cast<Mode>(m);
    const ComplexMatrix n = site_operator(dims, mode, OperatorKind::Number).data;
    // n(n-1) is the normal-ordered quartic adag adag a a on the diagonal.
    h += to_angular(freqs[static_cast<std::size_t>(m)]) * n;
    h += 0.5 * to_angular(p.alpha[static_cast<std::size_t>(m)]) *
         (n * n - n).eval();
  }

  const ComplexMatrix a1 = site_operator(dims, Mode::Q1, OperatorKind::Lower).data;
  const ComplexMatrix a2 = site_operator(dims, Mode::Q2, OperatorKind::Lower).data;
  const ComplexMatrix ac = site_operator(dims, Mode::Qc, OperatorKind::Lower).data;

  h += to_angular(p.g1c) * (a1.adjoint() * ac + ac.adjoint() * a1);
  h += to_angular(p.g2c) * (a2.adjoint() * ac + ac.adjoint() * a2);
  if (include_g12) {
    h += to_angular(p.g12) * (a1.adjoint() * a2 + a2.adjoint() * a1);
  }
  if (drive_half_amp != 0.0) {
    h += to_angular(drive_half_amp) * (ac.adjoint() + ac);
  }
  return h;
}

}  // namespace

OperatorMatrix build_static_hamiltonian(const DeviceParams& p, bool include_g12) {
  return OperatorMatrix(p.dims, assemble(p, p.omega, include_g12, 0.0));
}

OperatorMatrix build_drive_operator(const DeviceParams& p) {
  const ComplexMatrix ac = site_operator(p.dims, Mode::Qc, OperatorKind::Lower).data;
  return OperatorMatrix(p.dims, ComplexMatrix(ac.adjoint() + ac));
}

OperatorMatrix build_rotating_hamiltonian(const DeviceParams& p, const DriveParams& d,
                                          bool include_g12) {
  const std::array<double, 3> deltas{p.omega[0] - d.omega_d, p.omega[1] - d.omega_d,
                                     p.omega[2] - d.omega_d};
  return OperatorMatrix(p.dims, assemble(p, deltas, include_g12, 0.5 * d.amp));
}

OperatorMatrix build_bare_diagonal(const DeviceParams& p) {
  const ModeDims& dims = p.dims;
  ComplexMatrix h = ComplexMatrix::Zero(dims.dim(), dims.dim());
  for (int m = 0; m < 3; ++m) {
    const ComplexMatrix n = site_operator(dims, static_cast<Mode>(m), OperatorKind::Number).data;
    h += to_angular(p.omega[static_cast<std::size_t>(m)]) * n;
    h += 0.5 * to_angular(p.alpha[static_cast<std::size_t>(m)]) * (n * n - n).eval();
  }
  return OperatorMatrix(dims, std::move(h));
}

OperatorMatrix build_coupling(const DeviceParams& p) {
  const ModeDims& dims = p.dims;
  const ComplexMatrix a1 = site_operator(dims, Mode::Q1, OperatorKind::Lower).data;
  const ComplexMatrix a2 = site_operator(dims, Mode::Q2, OperatorKind::Lower).data;
  const ComplexMatrix ac = site_operator(dims, Mode::Qc, OperatorKind::Lower).data;
  ComplexMatrix h = to_angular(p.g1c) * (a1.adjoint() * ac + ac.adjoint() * a1);
  h += to_angular(p.g2c) * (a2.adjoint() * ac + ac.adjoint() * a2);
  return OperatorMatrix(dims, std::move(h));
}

}  // namespace casq
