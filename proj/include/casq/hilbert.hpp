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
#include <string>
#include <vector>

#include "casq/types.hpp"

namespace casq {

/// Truncation levels of the three bosonic modes, ordered (Q1, Q2, Qc).
/// Basis states are packed row-major: index = i*(d2*dc) + j*dc + k.
struct ModeDims {
  std::array<int, 3> levels{4, 4, 4};

  ModeDims() = default;
  ModeDims(int d1, int d2, int dc) : levels{d1, d2, dc} { validate(); }

  int dim() const { return levels[0] * levels[1] * levels[2]; }
  int level_count(Mode m) const { return levels[static_cast<int>(m)]; }
  void validate() const;

  bool operator==(const ModeDims&) const = default;
};

/// Occupation-number label (i, j, k) for a bare product state |ijk>.
struct BareLabel {
  std::array<int, 3> occ{0, 0, 0};

  BareLabel() = default;
  BareLabel(int i, int j, int k) : occ{i, j, k} {}

  int operator[](int m) const { return occ[static_cast<std::size_t>(m)]; }
  bool operator==(const BareLabel&) const = default;

  std::string str() const;
};

/// Dense operator on the tensor-product space, tagged with its mode dims.
struct OperatorMatrix {
  ModeDims dims;
  ComplexMatrix data;

  OperatorMatrix() = default;
  OperatorMatrix(ModeDims d, ComplexMatrix m);

  int dim() const { return dims.dim(); }
  bool is_hermitian(double rel_tol = 1e-12) const;
};

enum class OperatorKind { Lower, Raise, Number };

/// Single-mode truncated ladder/number operator embedded in the product
/// space: identity on the other modes, <n-1|a|n> = sqrt(n) on the target.
OperatorMatrix site_operator(const ModeDims& dims, Mode mode, OperatorKind kind);

/// Row-major flat index of a bare label.
int basis_index(const ModeDims& dims, const BareLabel& label);

/// Bare label of a flat index (inverse of basis_index).
BareLabel basis_label(const ModeDims& dims, int index);

/// Unit vector with a single 1 at basis_index(dims, label).
ComplexVector basis_state(const ModeDims& dims, const BareLabel& label);

/// Total excitation number operator, sum of the per-mode number operators.
OperatorMatrix total_number_operator(const ModeDims& dims);

std::vector<BareLabel> all_labels(const ModeDims& dims);

}  // namespace casq
