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

#include "casq/swt.hpp"

#include <cmath>
#include <string>

namespace casq {

namespace {

void require_diagonal(const OperatorMatrix& h0) {
  const ComplexMatrix& m = h0.data;
  ComplexMatrix off = m;
  off.diagonal().setZero();
  const double scale = std::max(m.norm(), 1.0);
  if (off.norm() > 1e-12 * scale) {
    throw Error("solve_generator: H0 must be diagonal in the bare basis");
  }
}

OperatorMatrix resolvent_generator(const OperatorMatrix& h0, const OperatorMatrix& off,
                                   double gap_threshold) {
  const Eigen::Index n = h0.data.rows();
  const RealVector energies = h0.data.diagonal().real();
  ComplexMatrix s = ComplexMatrix::Zero(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index k = 0; k < n; ++k) {
      if (m == k) continue;
      const Complex elem = off.data(m, k);
      if (std::abs(elem) < 1e-15) continue;
      const double gap = energies(k) - energies(m);
      if (std::abs(gap) < gap_threshold) {
        throw DegenerateConnectedLevels(
            "perturbation connects near-degenerate bare levels " + std::to_string(m) + " and " +
                std::to_string(k) + " (gap " + std::to_string(to_ghz(gap)) + " GHz)",
            static_cast<int>(m), static_cast<int>(k));
      }
      s(m, k) = elem / gap;
    }
  }
  return OperatorMatrix(h0.dims, std::move(s));
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

}  // namespace

OperatorMatrix solve_generator_order1(const OperatorMatrix& h0, const OperatorMatrix& o1,
                                      double gap_threshold) {
  require_diagonal(h0);
  return resolvent_generator(h0, o1, gap_threshold);
}

SecondOrderParts solve_generator_order2(const OperatorMatrix& h0, const OperatorMatrix& s1,
                                        const OperatorMatrix& o1, double gap_threshold) {
  const ComplexMatrix c = 0.5 * commutator(o1.data, s1.data);
  ComplexMatrix d2 = ComplexMatrix::Zero(c.rows(), c.cols());
  d2.diagonal() = c.diagonal();
  ComplexMatrix o2 = c;
  o2.diagonal().setZero();

  SecondOrderParts parts;
  parts.d2 = OperatorMatrix(h0.dims, std::move(d2));
  parts.o2 = OperatorMatrix(h0.dims, std::move(o2));
  parts.s2 = resolvent_generator(h0, parts.o2, gap_threshold);
  return parts;
}

SwDecomposition sw_decompose(const DeviceParams& p) {
  SwDecomposition sw;
  sw.h0 = build_bare_diagonal(p);
  sw.o1 = build_coupling(p);
  sw.s1 = solve_generator_order1(sw.h0, sw.o1);
  SecondOrderParts parts = solve_generator_order2(sw.h0, sw.s1, sw.o1);
  sw.d2 = std::move(parts.d2);
  sw.o2 = std::move(parts.o2);
  sw.s2 = std::move(parts.s2);
  return sw;
}

OperatorMatrix effective_static_hamiltonian(const OperatorMatrix& h0,
                                            const OperatorMatrix& d2) {
  return OperatorMatrix(h0.dims, ComplexMatrix(h0.data + d2.data));
}

OperatorMatrix effective_drive(const OperatorMatrix& hd, const OperatorMatrix& s1,
                               const OperatorMatrix& s2) {
  const ComplexMatrix s = s1.data + s2.data;
  ComplexMatrix out = hd.data - commutator(s, hd.data) +
                      0.5 * commutator(s1.data, commutator(s1.data, hd.data));
  return OperatorMatrix(hd.dims, std::move(out));
}

double cas_rate_from_matrix_element(const OperatorMatrix& effective_drive_op,
                                    Transition transition) {
  const ModeDims& dims = effective_drive_op.dims;
  const BareLabel from = transition == Transition::Blue ? BareLabel(0, 1, 0) : BareLabel(1, 0, 0);
  const BareLabel to = transition == Transition::Blue ? BareLabel(1, 0, 1) : BareLabel(0, 1, 1);
  const Complex elem =
      effective_drive_op.data(basis_index(dims, from), basis_index(dims, to));
  return to_ghz(2.0 * elem.real());
}

CasRates analytic_cas_rates(const DeviceParams& p, double amp) {
  const Detunings d = detunings(p);
  const double den_b1 = p.omega[2] - p.omega[0] + p.alpha[2];
  const double den_b2 = p.omega[2] - p.omega[1];
  const double den_r1 = p.omega[2] - p.omega[1] + p.alpha[2];
  const double den_r2 = p.omega[2] - p.omega[0];
  if (std::abs(d.delta_12) < kSingularTol) throw SingularDenominator("Delta_12");
  if (std::abs(den_b1) < kSingularTol) throw SingularDenominator("omega_c - omega_1 + alpha_c");
  if (std::abs(den_b2) < kSingularTol) throw SingularDenominator("omega_c - omega_2");
  if (std::abs(den_r1) < kSingularTol) throw SingularDenominator("omega_c - omega_2 + alpha_c");
  if (std::abs(den_r2) < kSingularTol) throw SingularDenominator("omega_c - omega_1");

  const double num = 2.0 * p.g1c * p.g2c * p.alpha[2] * amp;
  CasRates rates;
  rates.blue = num / (d.delta_12 * den_b1 * den_b2);
  rates.red = -num / (d.delta_12 * den_r1 * den_r2);
  return rates;
}

WeakDriveFrequencies analytic_weak_drive_frequencies(const DeviceParams& p) {
  const Detunings d = detunings(p);
  const double den_b1 = d.delta_1c - p.alpha[2];
  const double den_b2 = d.delta_1c + p.alpha[0];
  const double den_r1 = d.delta_2c - p.alpha[2];
  const double den_r2 = d.delta_2c + p.alpha[1];
  if (std::abs(den_b1) < kSingularTol) throw SingularDenominator("Delta_1c - alpha_c");
  if (std::abs(den_b2) < kSingularTol) throw SingularDenominator("Delta_1c + alpha_1");
  if (std::abs(den_r1) < kSingularTol) throw SingularDenominator("Delta_2c - alpha_c");
  if (std::abs(den_r2) < kSingularTol) throw SingularDenominator("Delta_2c + alpha_2");
  if (std::abs(d.delta_1c) < kSingularTol) throw SingularDenominator("Delta_1c");
  if (std::abs(d.delta_2c) < kSingularTol) throw SingularDenominator("Delta_2c");

  WeakDriveFrequencies w;
  w.blue = p.omega[2] + d.delta_12 +
           2.0 * p.g1c * p.g1c * (p.alpha[0] + p.alpha[2]) / (den_b1 * den_b2) -
           2.0 * p.g2c * p.g2c / d.delta_2c;
  w.red = p.omega[2] - d.delta_12 +
          2.0 * p.g2c * p.g2c * (p.alpha[1] + p.alpha[2]) / (den_r1 * den_r2) -
          2.0 * p.g1c * p.g1c / d.delta_1c;
  return w;
}

}  // namespace casq
