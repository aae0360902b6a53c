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

#include <algorithm>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "casq/device.hpp"
#include "casq/spectrum.hpp"

using namespace casq;

namespace {

DeviceParams decoupled_device() {
  DeviceParams p;
  p.dims = ModeDims(2, 2, 2);
  p.g1c = 0.0;
  p.g2c = 0.0;
  p.g12 = 0.0;
  return p;
}

}  // namespace

TEST_CASE("decoupled spectrum is the set of single-mode energy sums") {
  const DeviceParams p = decoupled_device();
  const OperatorMatrix h = build_static_hamiltonian(p, true);

  std::vector<double> expected;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        expected.push_back(to_angular(i * p.omega[0] + j * p.omega[1] + k * p.omega[2]));
      }
    }
  }
  std::sort(expected.begin(), expected.end());

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.data);
  for (int i = 0; i < 8; ++i) {
    CHECK(solver.eigenvalues()(i) ==
          doctest::Approx(expected[static_cast<std::size_t>(i)]).epsilon(1e-13));
  }
}

TEST_CASE("dressed qubit energy matches the dispersive estimate") {
  const DeviceParams p;  // defaults carry the reference device values
  const OperatorMatrix h = build_static_hamiltonian(p, true);
  const LabeledSpectrum s = diagonalize_and_label(h, {BareLabel(1, 0, 0), BareLabel(0, 0, 0)});
  const double e100 = s.energy_ghz(p.dims, BareLabel(1, 0, 0));
  const Detunings d = detunings(p);
  const double dispersive = p.omega[0] + p.g1c * p.g1c / d.delta_1c;
  CHECK(std::abs(e100 - dispersive) < 3e-3);
}

TEST_CASE("hamiltonian builders produce exactly Hermitian matrices") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> freq(4.0, 7.0);
  std::uniform_real_distribution<double> coupling(0.0, 0.1);
  for (int trial = 0; trial < 5; ++trial) {
    DeviceParams p;
    p.omega = {freq(rng), freq(rng), freq(rng)};
    p.alpha = {-coupling(rng), -coupling(rng), -coupling(rng)};
    p.g1c = coupling(rng);
    p.g2c = coupling(rng);
    p.g12 = coupling(rng) * 0.1;
    const OperatorMatrix h = build_static_hamiltonian(p, true);
    CHECK((h.data - h.data.adjoint()).norm() <= 1e-12 * h.data.norm());
    DriveParams d;
    d.omega_d = freq(rng);
    d.amp = coupling(rng);
    const OperatorMatrix hr = build_rotating_hamiltonian(p, d);
    CHECK((hr.data - hr.data.adjoint()).norm() <= 1e-12 * std::max(hr.data.norm(), 1.0));
  }
}

TEST_CASE("drive operator is the coupler quadrature") {
  DeviceParams p;
  p.dims = ModeDims(2, 2, 2);
  const OperatorMatrix op = build_drive_operator(p);
  CHECK(op.is_hermitian());

  // On two levels the coupler slot carries a Pauli-X block.
  const ComplexMatrix expected =
      site_operator(p.dims, Mode::Qc, OperatorKind::Lower).data +
      site_operator(p.dims, Mode::Qc, OperatorKind::Raise).data;
  CHECK((op.data - expected).norm() == 0.0);

  DeviceParams p4;
  const OperatorMatrix op4 = build_drive_operator(p4);
  const int row = basis_index(p4.dims, BareLabel(0, 1, 0));
  const int col = basis_index(p4.dims, BareLabel(0, 1, 1));
  CHECK(op4.data(row, col) == Complex(1.0, 0.0));
}

TEST_CASE("rotating frame at zero drive frequency reduces to the static frame") {
  const DeviceParams p;
  DriveParams d;
  d.omega_d = 0.0;
  d.amp = 0.0;
  const OperatorMatrix hr = build_rotating_hamiltonian(p, d);
  const OperatorMatrix h = build_static_hamiltonian(p, true);
  CHECK((hr.data - h.data).norm() == 0.0);
}

TEST_CASE("decoupled rotating spectrum shifts by the frame frequency per excitation") {
  DeviceParams p = decoupled_device();
  p.alpha = {0.0, 0.0, 0.0};
  DriveParams d;
  d.omega_d = 1.5;
  d.amp = 0.0;
  const OperatorMatrix hr = build_rotating_hamiltonian(p, d);
  // With no couplings the rotating Hamiltonian is diagonal.
  for (int idx = 0; idx < p.dims.dim(); ++idx) {
    const BareLabel label = basis_label(p.dims, idx);
    const int total = label[0] + label[1] + label[2];
    const double expected =
        to_angular(label[0] * p.omega[0] + label[1] * p.omega[1] + label[2] * p.omega[2] -
                   total * d.omega_d);
    CHECK(hr.data(idx, idx).real() == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("static hamiltonian conserves total excitation number") {
  const DeviceParams p;
  const OperatorMatrix h = build_static_hamiltonian(p, true);
  const OperatorMatrix n = total_number_operator(p.dims);
  CHECK((h.data * n.data - n.data * h.data).norm() < 1e-10);

  DriveParams d;
  d.omega_d = 6.4;
  d.amp = 0.0;
  const OperatorMatrix hr = build_rotating_hamiltonian(p, d);
  CHECK((hr.data * n.data - n.data * hr.data).norm() < 1e-10);
}

TEST_CASE("ground state energy is exactly zero") {
  const DeviceParams p;
  const OperatorMatrix h = build_static_hamiltonian(p, true);
  const int idx = basis_index(p.dims, BareLabel(0, 0, 0));
  CHECK(h.data(idx, idx) == Complex(0.0, 0.0));
  CHECK(h.data.col(idx).norm() == 0.0);
}

TEST_CASE("validation warns on positive anharmonicity and rejects zero detuning") {
  DeviceParams p;
  p.alpha[0] = +0.1;
  const auto warnings = p.validate();
  CHECK(!warnings.empty());

  DeviceParams bad;
  bad.omega[0] = bad.omega[2];
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("detunings are consistent with the parameters") {
  const DeviceParams p;
  const Detunings d = detunings(p, 6.4207);
  CHECK(d.delta_12 == doctest::Approx(p.omega[0] - p.omega[1]));
  CHECK(d.delta_1c == doctest::Approx(p.omega[0] - p.omega[2]));
  CHECK(d.delta_2c == doctest::Approx(p.omega[1] - p.omega[2]));
  CHECK(d.delta_c == doctest::Approx(p.omega[2] - 6.4207));
}
