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

#include "casq/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "casq/parallel.hpp"
#include "casq/swt.hpp"

namespace casq {

int LabeledSpectrum::eigen_index(const ModeDims& dims, const BareLabel& label) const {
  const auto it = label_index_of.find(basis_index(dims, label));
  if (it == label_index_of.end()) {
    throw Error("LabeledSpectrum: label " + label.str() + " was not requested");
  }
  return it->second;
}

double LabeledSpectrum::energy(const ModeDims& dims, const BareLabel& label) const {
  return eigenvalues(eigen_index(dims, label));
}

double LabeledSpectrum::energy_ghz(const ModeDims& dims, const BareLabel& label) const {
  return to_ghz(energy(dims, label));
}

LabeledSpectrum diagonalize_and_label(const OperatorMatrix& h,
                                      const std::vector<BareLabel>& labels) {
  if (!h.is_hermitian(1e-10)) throw Error("diagonalize_and_label: operator is not Hermitian");

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.data);
  if (solver.info() != Eigen::Success) throw Error("diagonalize_and_label: eigensolver failed");

  LabeledSpectrum out;
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();

  const int dim = static_cast<int>(out.eigenvalues.size());
  const int n_labels = static_cast<int>(labels.size());
  constexpr double kTieTol = 1e-9;

  // overlap(l, k) = |<bare_l | eig_k>|^2
  RealMatrix overlap(n_labels, dim);
  for (int l = 0; l < n_labels; ++l) {
    const int row = basis_index(h.dims, labels[static_cast<std::size_t>(l)]);
    overlap.row(l) = out.eigenvectors.row(row).cwiseAbs2();
  }

  std::vector<bool> label_done(static_cast<std::size_t>(n_labels), false);
  std::vector<bool> eig_taken(static_cast<std::size_t>(dim), false);

  for (int round = 0; round < n_labels; ++round) {
    // Globally best remaining (label, eigenvector) pair.
    double best = -1.0;
    int best_l = -1, best_k = -1;
    for (int l = 0; l < n_labels; ++l) {
      if (label_done[static_cast<std::size_t>(l)]) continue;
      for (int k = 0; k < dim; ++k) {
        if (eig_taken[static_cast<std::size_t>(k)]) continue;
        if (overlap(l, k) > best) {
          best = overlap(l, k);
          best_l = l;
          best_k = k;
        }
      }
    }
    const std::string label_str = labels[static_cast<std::size_t>(best_l)].str();
    if (best < 0.5) {
      // Second-best candidate for the same label, for the error report.
      double second = -1.0;
      int second_k = -1;
      for (int k = 0; k < dim; ++k) {
        if (k == best_k || eig_taken[static_cast<std::size_t>(k)]) continue;
        if (overlap(best_l, k) > second) {
          second = overlap(best_l, k);
          second_k = k;
        }
      }
      throw LabelAmbiguous("label " + label_str + " has maximum overlap^2 " +
                               std::to_string(best) + " < 0.5",
                           best_k, second_k);
    }
    // A tie with a conflicting claim (same label or same eigenvector) means
    // near-resonant mixing the assignment cannot resolve.
    for (int l = 0; l < n_labels; ++l) {
      if (label_done[static_cast<std::size_t>(l)]) continue;
      for (int k = 0; k < dim; ++k) {
        if (eig_taken[static_cast<std::size_t>(k)]) continue;
        if (l == best_l && k == best_k) continue;
        const bool conflicts = (l == best_l) != (k == best_k);
        if (conflicts && std::abs(overlap(l, k) - best) < kTieTol) {
          throw LabelAmbiguous("label " + label_str + " ties between eigenvectors " +
                                   std::to_string(best_k) + " and " + std::to_string(k),
                               best_k, k);
        }
      }
    }
    label_done[static_cast<std::size_t>(best_l)] = true;
    eig_taken[static_cast<std::size_t>(best_k)] = true;
    out.label_index_of[basis_index(h.dims, labels[static_cast<std::size_t>(best_l)])] = best_k;
  }
  return out;
}

namespace {

const std::vector<BareLabel>& computational_labels() {
  static const std::vector<BareLabel> labels{BareLabel(0, 0, 0), BareLabel(1, 0, 0),
                                             BareLabel(0, 1, 0), BareLabel(1, 1, 0)};
  return labels;
}

double zz_combination_ghz(const LabeledSpectrum& s, const ModeDims& dims) {
  return s.energy_ghz(dims, BareLabel(1, 1, 0)) - s.energy_ghz(dims, BareLabel(1, 0, 0)) -
         s.energy_ghz(dims, BareLabel(0, 1, 0)) + s.energy_ghz(dims, BareLabel(0, 0, 0));
}

}  // namespace

ZzReport zz_strength(const DeviceParams& p, bool include_g12) {
  const OperatorMatrix h = build_static_hamiltonian(p, include_g12);
  const LabeledSpectrum s = diagonalize_and_label(h, computational_labels());

  ZzReport report;
  report.method = ZzMethod::Diagonalization;
  report.xi_zz = zz_combination_ghz(s, p.dims);
  try {
    const StaticZzAnalytic a = static_zz_analytic(p);
    report.xi_0_analytic = a.xi_0;
    report.g_eff = a.g_eff;
  } catch (const SingularDenominator&) {
    report.xi_0_analytic = std::numeric_limits<double>::quiet_NaN();
    report.g_eff = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

StaticZzAnalytic static_zz_analytic(const DeviceParams& p) {
  const Detunings d = detunings(p);
  if (std::abs(d.delta_1c) < kSingularTol) throw SingularDenominator("Delta_1c");
  if (std::abs(d.delta_2c) < kSingularTol) throw SingularDenominator("Delta_2c");
  const double den1 = d.delta_12 + p.alpha[0];
  const double den2 = p.alpha[1] - d.delta_12;
  if (std::abs(den1) < kSingularTol) throw SingularDenominator("Delta_12 + alpha_1");
  if (std::abs(den2) < kSingularTol) throw SingularDenominator("alpha_2 - Delta_12");

  StaticZzAnalytic out;
  out.g_eff = 0.5 * p.g1c * p.g2c * (1.0 / d.delta_1c + 1.0 / d.delta_2c) + p.g12;
  out.xi_0 = 2.0 * out.g_eff * out.g_eff * (p.alpha[0] + p.alpha[1]) / (den1 * den2);
  return out;
}

namespace {

struct BranchPair {
  int index_a;
  int index_b;
};

// The two eigenvectors with the largest combined weight on the transition
// pair; robust through the anticrossing where individual labels mix 50/50.
BranchPair transition_branches(const ComplexMatrix& vectors, int row_a, int row_b) {
  const Eigen::Index dim = vectors.cols();
  int best = -1, second = -1;
  double best_w = -1.0, second_w = -1.0;
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double w = std::norm(vectors(row_a, k)) + std::norm(vectors(row_b, k));
    if (w > best_w) {
      second_w = best_w;
      second = best;
      best_w = w;
      best = static_cast<int>(k);
    } else if (w > second_w) {
      second_w = w;
      second = static_cast<int>(k);
    }
  }
  return BranchPair{best, second};
}

double branch_splitting(const DeviceParams& p, double amp, double omega_d, bool include_g12,
                        int row_a, int row_b) {
  DriveParams d;
  d.omega_d = omega_d;
  d.amp = amp;
  const OperatorMatrix h = build_rotating_hamiltonian(p, d, include_g12);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.data);
  if (solver.info() != Eigen::Success) throw Error("cas_rate_numeric: eigensolver failed");
  const BranchPair pair = transition_branches(solver.eigenvectors(), row_a, row_b);
  return std::abs(solver.eigenvalues()(pair.index_a) - solver.eigenvalues()(pair.index_b));
}

}  // namespace

AnticrossingResult cas_rate_numeric(const DeviceParams& p, double amp, Transition transition,
                                    const AnticrossingOptions& opts) {
  if (amp <= 0.0) throw Error("cas_rate_numeric: drive amplitude must be > 0");

  const WeakDriveFrequencies weak = analytic_weak_drive_frequencies(p);
  const double omega_weak = transition == Transition::Blue ? weak.blue : weak.red;
  const BareLabel from = transition == Transition::Blue ? BareLabel(0, 1, 0) : BareLabel(1, 0, 0);
  const BareLabel to = transition == Transition::Blue ? BareLabel(1, 0, 1) : BareLabel(0, 1, 1);
  const int row_a = basis_index(p.dims, from);
  const int row_b = basis_index(p.dims, to);

  // Center the window on the Stark-shifted transition estimate; a few
  // fixed-point passes track the shift of the resonance with the drive.
  double center;
  if (opts.center) {
    center = *opts.center;
  } else {
    center = omega_weak;
    for (int it = 0; it < 3; ++it) {
      DriveParams d;
      d.omega_d = center;
      d.amp = amp;
      const AcStarkShift stark = ac_stark_shift(p, d);
      center = omega_weak + stark.shift;
    }
  }

  const int n = std::max(opts.coarse_points, 5);
  const double lo = center - opts.window_halfwidth;
  const double step = 2.0 * opts.window_halfwidth / (n - 1);

  std::vector<double> split(static_cast<std::size_t>(n));
  int best = 0;
  for (int i = 0; i < n; ++i) {
    split[static_cast<std::size_t>(i)] =
        branch_splitting(p, amp, lo + i * step, opts.include_g12, row_a, row_b);
    if (split[static_cast<std::size_t>(i)] < split[static_cast<std::size_t>(best)]) best = i;
  }
  if (best == 0 || best == n - 1) {
    throw NoAnticrossing("splitting is monotone over the scan window [" + std::to_string(lo) +
                         ", " + std::to_string(lo + (n - 1) * step) + "] GHz");
  }

  // Golden-section refinement of the bracketed minimum.
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo + (best - 1) * step;
  double b = lo + (best + 1) * step;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = branch_splitting(p, amp, x1, opts.include_g12, row_a, row_b);
  double f2 = branch_splitting(p, amp, x2, opts.include_g12, row_a, row_b);
  while (b - a > opts.refine_tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = branch_splitting(p, amp, x1, opts.include_g12, row_a, row_b);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = branch_splitting(p, amp, x2, opts.include_g12, row_a, row_b);
    }
  }
  const double omega_min = 0.5 * (a + b);
  AnticrossingResult result;
  result.omega_resonance = omega_min;
  result.rate = to_ghz(branch_splitting(p, amp, omega_min, opts.include_g12, row_a, row_b));
  return result;
}

AcStarkShift ac_stark_shift(const DeviceParams& p, const DriveParams& d) {
  const Detunings det = detunings(p, d.omega_d);
  if (std::abs(det.delta_c) < kSingularTol) throw SingularDenominator("delta_c");
  if (std::abs(det.delta_c + p.alpha[2]) < kSingularTol) throw SingularDenominator("delta_c + alpha_c");

  const WeakDriveFrequencies weak = analytic_weak_drive_frequencies(p);
  AcStarkShift out;
  out.shift = p.alpha[2] * d.amp * d.amp / (2.0 * det.delta_c * (det.delta_c + p.alpha[2]));
  out.blue = weak.blue + out.shift;
  out.red = weak.red + out.shift;
  return out;
}

ZzReport tunable_zz(const DeviceParams& p, const DriveParams& d, ZzMethod method) {
  ZzReport report;
  const StaticZzAnalytic a = static_zz_analytic(p);
  report.xi_0_analytic = a.xi_0;
  report.g_eff = a.g_eff;
  report.method = method;

  if (method == ZzMethod::Analytic) {
    // Dispersive form around the Stark-shifted blue transition. The static
    // offset is the diagonalization value, which the dispersive curve
    // approaches far from resonance.
    const AcStarkShift stark = ac_stark_shift(p, d);
    const double delta = d.omega_d - stark.blue;
    if (std::abs(delta) < kSingularTol) throw SingularDenominator("omega_d - omega_b");
    const double omega_b = analytic_cas_rates(p, d.amp).blue;
    const double xi_static = zz_strength(p, true).xi_zz;
    report.xi_zz = xi_static - omega_b * omega_b / (8.0 * delta);
    return report;
  }

  // Numeric path: quasi-energies of the time-independent rotating-frame
  // Hamiltonian. The frame contribution cancels in the combination.
  const OperatorMatrix h = build_rotating_hamiltonian(p, d, true);
  const LabeledSpectrum s = diagonalize_and_label(h, computational_labels());
  report.xi_zz = zz_combination_ghz(s, p.dims);
  report.method = ZzMethod::Driven;
  return report;
}

DeviceParams sweep_point_device(const SweepSpec& spec, double x, double y) {
  const double alpha_mean = 0.5 * std::abs(spec.alpha[0] + spec.alpha[1]);
  const double delta_12 = x * alpha_mean;

  DeviceParams p;
  p.dims = spec.dims;
  p.alpha = spec.alpha;
  p.omega[1] = spec.omega_q2;
  p.omega[0] = spec.omega_q2 + delta_12;
  p.omega[2] = p.omega[0] + spec.coupler_offset;
  const double delta_1c = p.omega[0] - p.omega[2];
  const double delta_2c = p.omega[1] - p.omega[2];
  p.g1c = y * std::abs(delta_1c);
  p.g2c = y * std::abs(delta_2c);
  p.g12 = spec.include_g12 ? spec.g12 : 0.0;
  return p;
}

SweepGrid design_map(const SweepSpec& spec, int jobs) {
  SweepGrid grid;
  grid.spec = spec;
  grid.x_axis = RealVector::LinSpaced(spec.x_points, spec.x_min, spec.x_max);
  grid.y_axis = RealVector::LinSpaced(spec.y_points, spec.y_min, spec.y_max);
  grid.xi_zz = RealMatrix::Constant(spec.y_points, spec.x_points,
                                    std::numeric_limits<double>::quiet_NaN());
  grid.eta = RealMatrix::Constant(spec.y_points, spec.x_points,
                                  std::numeric_limits<double>::quiet_NaN());
  grid.flags = Eigen::MatrixXi::Zero(spec.y_points, spec.x_points);

  const int n_cells = spec.x_points * spec.y_points;
  parallel_for(n_cells, jobs, [&](int cell) {
    const int ix = cell % spec.x_points;
    const int iy = cell / spec.x_points;
    const double x = grid.x_axis(ix);
    const double y = grid.y_axis(iy);
    try {
      const DeviceParams p = sweep_point_device(spec, x, y);
      grid.xi_zz(iy, ix) = zz_strength(p, spec.include_g12).xi_zz;
      if (spec.mode == SweepMode::CasBlue) {
        // Drive efficiency from the closed form; linear in the drive, so
        // unit amplitude gives the ratio directly. Contains no g12.
        grid.eta(iy, ix) = analytic_cas_rates(p, 1.0).blue;
      } else {
        const Detunings det = detunings(p);
        const double den = det.delta_12 * (det.delta_12 + p.alpha[0]);
        if (std::abs(den) < kSingularTol) throw SingularDenominator("Delta_12 (Delta_12 + alpha_1)");
        const double g_eff = static_zz_analytic(p).g_eff;
        grid.eta(iy, ix) = 2.0 * (2.0 * g_eff * p.alpha[0]) / den;
      }
      if (std::abs(y) > 0.3) grid.flags(iy, ix) = kCellBeyondDispersive;
    } catch (const Error&) {
      grid.flags(iy, ix) = kCellFailed;
    }
  });
  return grid;
}

}  // namespace casq
