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

#include "casq/hilbert.hpp"

#include <cmath>
#include <sstream>

namespace casq {

void ModeDims::validate() const {
  for (int m = 0; m < 3; ++m) {
    if (levels[static_cast<std::size_t>(m)] < 2) {
      throw Error("ModeDims: every mode needs at least 2 levels, mode " +
                  std::to_string(m) + " has " +
                  std::to_string(levels[static_cast<std::size_t>(m)]));
    }
  }
}

std::string BareLabel::str() const {
  std::ostringstream os;
  os << "|" << occ[0] << occ[1] << occ[2] << ">";
  return os.str();
}

OperatorMatrix::OperatorMatrix(ModeDims d, ComplexMatrix m) : dims(d), data(std::move(m)) {
  if (data.rows() != data.cols() || data.rows() != dims.dim()) {
    throw Error("OperatorMatrix: matrix shape inconsistent with mode dims");
  }
}

bool OperatorMatrix::is_hermitian(double rel_tol) const {
  const double scale = data.norm();
  if (scale == 0.0) return true;
  return (data - data.adjoint()).norm() <= rel_tol * scale;
}

namespace {

ComplexMatrix single_mode_operator(int levels, OperatorKind kind) {
  ComplexMatrix op = ComplexMatrix::Zero(levels, levels);
  for (int n = 1; n < levels; ++n) {
    const double amp = std::sqrt(static_cast<double>(n));
    switch (kind) {
      case OperatorKind::Lower:
        op(n - 1, n) = amp;
        break;
      case OperatorKind::Raise:
        op(n, n - 1) = amp;
        break;
      case OperatorKind::Number:
        op(n, n) = static_cast<double>(n);
        break;
    }
  }
  return op;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

OperatorMatrix site_operator(const ModeDims& dims, Mode mode, OperatorKind kind) {
  dims.validate();
  const int m = static_cast<int>(mode);
  if (m < 0 || m > 2) throw Error("site_operator: invalid mode index");

  ComplexMatrix acc = ComplexMatrix::Identity(1, 1);
  for (int s = 0; s < 3; ++s) {
    const int d = dims.levels[static_cast<std::size_t>(s)];
    if (s == m) {
      acc = kron(acc, single_mode_operator(d, kind));
    } else {
      acc = kron(acc, ComplexMatrix::Identity(d, d));
    }
  }
  return OperatorMatrix(dims, std::move(acc));
}

int basis_index(const ModeDims& dims, const BareLabel& label) {
  for (int m = 0; m < 3; ++m) {
    const int n = label.occ[static_cast<std::size_t>(m)];
    if (n < 0 || n >= dims.levels[static_cast<std::size_t>(m)]) {
      throw Error("basis_index: label " + label.str() + " out of range for mode " +
                  std::to_string(m));
    }
  }
  return label.occ[0] * (dims.levels[1] * dims.levels[2]) + label.occ[1] * dims.levels[2] +
         label.occ[2];
}

BareLabel basis_label(const ModeDims& dims, int index) {
  if (index < 0 || index >= dims.dim()) throw Error("basis_label: index out of range");
  const int dc = dims.levels[2];
  const int d2 = dims.levels[1];
  return BareLabel(index / (d2 * dc), (index / dc) % d2, index % dc);
}

ComplexVector basis_state(const ModeDims& dims, const BareLabel& label) {
  ComplexVector v = ComplexVector::Zero(dims.dim());
  v(basis_index(dims, label)) = 1.0;
  return v;
}

OperatorMatrix total_number_operator(const ModeDims& dims) {
  ComplexMatrix n = site_operator(dims, Mode::Q1, OperatorKind::Number).data;
  n += site_operator(dims, Mode::Q2, OperatorKind::Number).data;
  n += site_operator(dims, Mode::Qc, OperatorKind::Number).data;
  return OperatorMatrix(dims, std::move(n));
}

std::vector<BareLabel> all_labels(const ModeDims& dims) {
  std::vector<BareLabel> labels;
  labels.reserve(static_cast<std::size_t>(dims.dim()));
  for (int idx = 0; idx < dims.dim(); ++idx) labels.push_back(basis_label(dims, idx));
  return labels;
}

}  // namespace casq
