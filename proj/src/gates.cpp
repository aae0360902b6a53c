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

#include "casq/gates.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

#include "casq/spectrum.hpp"

namespace casq {

ComplexMatrix qubit_rotation(const ModeDims& dims, Mode mode, double axis_angle, double angle) {
  const int levels = dims.level_count(mode);
  ComplexMatrix local = ComplexMatrix::Identity(levels, levels);
  const double c = std::cos(0.5 * angle);
  const Complex s = Complex(0.0, -1.0) * std::sin(0.5 * angle);
  local(0, 0) = c;
  local(1, 1) = c;
  local(0, 1) = s * std::exp(Complex(0.0, -axis_angle));
  local(1, 0) = s * std::exp(Complex(0.0, axis_angle));

  ComplexMatrix out = ComplexMatrix::Zero(dims.dim(), dims.dim());
  for (int row = 0; row < dims.dim(); ++row) {
    const BareLabel rl = basis_label(dims, row);
    for (int l = 0; l < levels; ++l) {
      BareLabel cl = rl;
      cl.occ[static_cast<std::size_t>(static_cast<int>(mode))] = l;
      const Complex elem = local(rl[static_cast<int>(mode)], l);
      if (elem != Complex(0.0, 0.0)) out(row, basis_index(dims, cl)) = elem;
    }
  }
  return out;
}

ComplexMatrix cz_unitary(const ModeDims& dims) {
  ComplexMatrix u = ComplexMatrix::Identity(dims.dim(), dims.dim());
  const int idx = basis_index(dims, BareLabel(1, 1, 0));
  u(idx, idx) = -1.0;
  return u;
}

namespace {

struct CosineFit {
  double phase;     // y ~ A cos(phi + phase) + C
  double amplitude;
  double residual;
};

// Single-frequency cosine fit in phi: exact linear least squares.
CosineFit fit_cosine(const std::vector<double>& phi, const std::vector<double>& y) {
  const auto n = static_cast<Eigen::Index>(phi.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = std::cos(phi[static_cast<std::size_t>(i)]);
    design(i, 1) = std::sin(phi[static_cast<std::size_t>(i)]);
    design(i, 2) = 1.0;
    rhs(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector3d c = design.colPivHouseholderQr().solve(rhs);
  if (!c.allFinite()) throw FitDiverged("cosine fit failed");
  CosineFit fit;
  fit.amplitude = std::hypot(c(0), c(1));
  fit.phase = std::atan2(-c(1), c(0));
  fit.residual = (design * c - rhs).norm() / std::sqrt(static_cast<double>(n));
  if (fit.amplitude < 1e-6) throw FitDiverged("cosine fit amplitude vanishes");
  return fit;
}

// One echo half: state after the CAS pulse.
ComplexVector jazz_state_after_echo(const DeviceParams& p, const PulsePropagator& prop,
                                    double plateau, int control) {
  const ModeDims& dims = p.dims;
  const ComplexMatrix ry_half = qubit_rotation(dims, Mode::Q2, 0.5 * std::numbers::pi,
                                               0.5 * std::numbers::pi);
  const ComplexMatrix pi_q1 = qubit_rotation(dims, Mode::Q1, 0.0, std::numbers::pi);
  const ComplexMatrix pi_q2 = qubit_rotation(dims, Mode::Q2, 0.0, std::numbers::pi);

  ComplexVector psi = basis_state(dims, BareLabel(control, 0, 0));
  psi = ry_half * psi;
  psi = prop.propagate(psi, plateau);
  psi = pi_q1 * (pi_q2 * psi);
  psi = prop.propagate(psi, plateau);
  return psi;
}

double q2_excited_population(const ComplexVector& psi, const ModeDims& dims) {
  return mode_population(psi, dims, Mode::Q2, 1);
}

}  // namespace

JazzResult simulate_jazz(const DeviceParams& p, const CzDrive& drive,
                         const std::vector<double>& phi_grid, const JazzOptions& opts) {
  if (phi_grid.size() < 4) throw Error("simulate_jazz: need at least 4 measurement angles");
  const PulsePropagator prop(p, drive.omega_d, drive.amp, opts.sigma_ns, opts.ode);

  JazzResult result;
  double phases[2] = {0.0, 0.0};
  for (int control = 0; control < 2; ++control) {
    const ComplexVector psi = jazz_state_after_echo(p, prop, drive.plateau, control);
    result.coupler_leakage = std::max(result.coupler_leakage,
                                      1.0 - mode_population(psi, p.dims, Mode::Qc, 0));

    std::vector<double> signal;
    signal.reserve(phi_grid.size());
    for (const double phi : phi_grid) {
      // phi = 0 maps to a -Y measurement rotation, so that a controlled
      // phase of pi puts Q2 in the excited state.
      const ComplexMatrix meas =
          qubit_rotation(p.dims, Mode::Q2, 1.5 * std::numbers::pi + phi, 0.5 * std::numbers::pi);
      signal.push_back(q2_excited_population(meas * psi, p.dims));
    }
    const CosineFit fit = fit_cosine(phi_grid, signal);
    phases[control] = wrap_2pi(-fit.phase - std::numbers::pi);
    result.fit_residual = std::max(result.fit_residual, fit.residual);
  }
  result.controlled_phase = phases[0];
  result.phase_control_excited = phases[1];
  result.leakage_flag = result.coupler_leakage > opts.leakage_threshold;
  return result;
}

namespace {

// phi = 0 population of |110> after the echo sequence; unity when the
// controlled phase is pi and the coupler returns to the ground state.
double jazz_objective(const DeviceParams& p, const PulsePropagator& prop, double plateau) {
  const ComplexVector psi = jazz_state_after_echo(p, prop, plateau, 0);
  const ComplexMatrix meas =
      qubit_rotation(p.dims, Mode::Q2, 1.5 * std::numbers::pi, 0.5 * std::numbers::pi);
  return population((meas * psi).eval(), p.dims, BareLabel(1, 1, 0));
}

}  // namespace

CzCalibration calibrate_cz(const DeviceParams& p, double amp, const CalibrationOptions& opts) {
  AnticrossingOptions ac;
  ac.include_g12 = opts.include_g12;
  const AnticrossingResult res = cas_rate_numeric(p, amp, Transition::Blue, ac);

  // Full-cycle plateau estimate: the Gaussian edges contribute their
  // integrated envelope to the rotation because the rate is linear in the
  // drive.
  const double edge_extra =
      2.0 * opts.sigma_ns * std::sqrt(0.5 * std::numbers::pi) * std::erf(std::sqrt(2.0));
  const double plateau0 = std::max(1.0 / res.rate - edge_extra, 4.0 * opts.sigma_ns);

  struct Point {
    double omega_d;
    double plateau;
  };
  Point x{res.omega_resonance, plateau0};

  std::map<long long, std::shared_ptr<PulsePropagator>> propagators;
  const auto objective = [&](const Point& pt) {
    const long long key = static_cast<long long>(std::llround(pt.omega_d * 1e12));
    auto it = propagators.find(key);
    if (it == propagators.end()) {
      it = propagators
               .emplace(key, std::make_shared<PulsePropagator>(p, pt.omega_d, amp, opts.sigma_ns,
                                                               opts.ode, opts.include_g12))
               .first;
    }
    return jazz_objective(p, *it->second, pt.plateau);
  };

  double best = objective(x);
  double step_w = opts.step_omega;
  double step_t = opts.step_plateau;
  int evals = 1;
  int since_improvement = 0;
  while (evals < opts.max_evals && (step_w > opts.stop_omega || step_t > opts.stop_plateau)) {
    const Point candidates[4] = {{x.omega_d + step_w, x.plateau},
                                 {x.omega_d - step_w, x.plateau},
                                 {x.omega_d, x.plateau + step_t},
                                 {x.omega_d, std::max(x.plateau - step_t, 0.0)}};
    double cand_best = best;
    int cand_idx = -1;
    for (int i = 0; i < 4; ++i) {
      const double f = objective(candidates[i]);
      ++evals;
      if (f > cand_best) {
        cand_best = f;
        cand_idx = i;
      }
    }
    if (cand_idx >= 0) {
      since_improvement = cand_best - best < 1e-6 ? since_improvement + 1 : 0;
      x = candidates[cand_idx];
      best = cand_best;
    } else {
      step_w *= 0.5;
      step_t *= 0.5;
      ++since_improvement;
    }
    if (since_improvement >= 50) {
      throw OptimizationStalled("pattern search made no significant progress over 50 iterations");
    }
  }
  if (best < 0.9) {
    throw OptimizationStalled("calibrated |110> population is only " + std::to_string(best));
  }

  CzCalibration cal;
  cal.omega_d = x.omega_d;
  cal.plateau = x.plateau;
  cal.amp = amp;
  cal.objective = best;

  // Diagonal of the pulse propagator on the computational states.
  const PulsePropagator prop(p, cal.omega_d, amp, opts.sigma_ns, opts.ode, opts.include_g12);
  Complex diag[4];
  const std::array<BareLabel, 4> comp{BareLabel(0, 0, 0), BareLabel(0, 1, 0), BareLabel(1, 0, 0),
                                      BareLabel(1, 1, 0)};
  for (int i = 0; i < 4; ++i) {
    const ComplexVector psi0 = basis_state(p.dims, comp[static_cast<std::size_t>(i)]);
    const ComplexVector psi = prop.propagate(psi0, cal.plateau);
    diag[i] = psi(basis_index(p.dims, comp[static_cast<std::size_t>(i)]));
  }
  cal.theta2_raw = std::arg(diag[1] / diag[0]);
  cal.theta1_raw = std::arg(diag[2] / diag[0]);
  cal.predicted_controlled_phase =
      wrap_2pi(std::arg(diag[3]) + std::arg(diag[0]) - std::arg(diag[1]) - std::arg(diag[2]));

  // Local phases referenced to the dressed qubit frames.
  const LabeledSpectrum s =
      diagonalize_and_label(build_static_hamiltonian(p, opts.include_g12),
                            {BareLabel(0, 0, 0), BareLabel(1, 0, 0), BareLabel(0, 1, 0)});
  const double nu1 =
      s.energy_ghz(p.dims, BareLabel(1, 0, 0)) - s.energy_ghz(p.dims, BareLabel(0, 0, 0));
  const double nu2 =
      s.energy_ghz(p.dims, BareLabel(0, 1, 0)) - s.energy_ghz(p.dims, BareLabel(0, 0, 0));
  const double total = prop.total_duration(cal.plateau);
  cal.theta1 = wrap_pi(cal.theta1_raw + two_pi * (nu1 - cal.omega_d) * total);
  cal.theta2 = wrap_pi(cal.theta2_raw + two_pi * (nu2 - cal.omega_d) * total);
  return cal;
}

namespace {

std::vector<std::pair<int, int>> scope_units(const ModeDims& dims,
                                             const std::array<int, 4>& comp, ChannelScope scope) {
  std::vector<std::pair<int, int>> units;
  if (scope == ChannelScope::Full) {
    for (int i = 0; i < dims.dim(); ++i) {
      for (int j = 0; j < dims.dim(); ++j) units.emplace_back(i, j);
    }
  } else {
    for (const int i : comp) {
      for (const int j : comp) units.emplace_back(i, j);
    }
  }
  return units;
}

std::array<int, 4> computational_indices(const ModeDims& dims) {
  return {basis_index(dims, BareLabel(0, 0, 0)), basis_index(dims, BareLabel(0, 1, 0)),
          basis_index(dims, BareLabel(1, 0, 0)), basis_index(dims, BareLabel(1, 1, 0))};
}

void fill_trace_residual(ChannelAnalysis& analysis) {
  analysis.trace_residual = 0.0;
  for (std::size_t u = 0; u < analysis.unit_pairs.size(); ++u) {
    if (analysis.unit_pairs[u].first != analysis.unit_pairs[u].second) continue;
    analysis.trace_residual = std::max(
        analysis.trace_residual, std::abs(analysis.images[u].trace() - Complex(1.0, 0.0)));
  }
}

}  // namespace

ChannelAnalysis channel_superoperator(const DeviceParams& p, const CzCalibration& cal,
                                      const std::optional<CoherenceParams>& coherence,
                                      const ChannelOptions& opts) {
  ChannelAnalysis analysis;
  analysis.dims = p.dims;
  analysis.comp_indices = computational_indices(p.dims);
  analysis.unit_pairs = scope_units(p.dims, analysis.comp_indices, opts.scope);

  const PulsePropagator prop(p, cal.omega_d, cal.amp, opts.sigma_ns, opts.ode);
  if (!coherence) {
    const ComplexMatrix u = prop.propagator(cal.plateau);
    analysis.unitary_source = true;
    analysis.images.reserve(analysis.unit_pairs.size());
    for (const auto& [i, j] : analysis.unit_pairs) {
      analysis.images.push_back((u.col(i) * u.col(j).adjoint()).eval());
    }
  } else {
    const std::vector<OperatorMatrix> collapse =
        collapse_operators(p, *coherence, opts.t2_choice);
    const ChannelMethod method =
        opts.method == ChannelMethod::Auto ? ChannelMethod::WeakDissipation : opts.method;
    analysis.images =
        method == ChannelMethod::WeakDissipation
            ? propagate_units_weak_dissipation(prop, cal.plateau, collapse, analysis.unit_pairs,
                                               opts.weak)
            : propagate_units_lindblad_rk(prop, cal.plateau, collapse, analysis.unit_pairs,
                                          opts.ode);
  }
  apply_phase_correction(analysis, cal.theta1_raw, cal.theta2_raw);
  fill_trace_residual(analysis);
  return analysis;
}

ChannelAnalysis channel_from_unitary(const ComplexMatrix& u, const ModeDims& dims,
                                     ChannelScope scope) {
  ChannelAnalysis analysis;
  analysis.dims = dims;
  analysis.comp_indices = computational_indices(dims);
  analysis.unit_pairs = scope_units(dims, analysis.comp_indices, scope);
  analysis.unitary_source = true;
  analysis.images.reserve(analysis.unit_pairs.size());
  for (const auto& [i, j] : analysis.unit_pairs) {
    analysis.images.push_back((u.col(i) * u.col(j).adjoint()).eval());
  }
  fill_trace_residual(analysis);
  return analysis;
}

void apply_phase_correction(ChannelAnalysis& analysis, double theta1, double theta2) {
  const ModeDims& dims = analysis.dims;
  ComplexVector phases(dims.dim());
  for (int idx = 0; idx < dims.dim(); ++idx) {
    const BareLabel label = basis_label(dims, idx);
    phases(idx) = std::exp(Complex(0.0, -(theta1 * label[0] + theta2 * label[1])));
  }
  for (ComplexMatrix& image : analysis.images) {
    image = (phases.asDiagonal() * image * phases.conjugate().asDiagonal()).eval();
  }
}

ComplexMatrix superoperator_matrix(const ChannelAnalysis& analysis) {
  const int dim = analysis.dims.dim();
  ComplexMatrix s = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim) * dim,
                                        static_cast<Eigen::Index>(dim) * dim);
  for (std::size_t u = 0; u < analysis.unit_pairs.size(); ++u) {
    const auto [i, j] = analysis.unit_pairs[u];
    s.col(i + static_cast<Eigen::Index>(dim) * j) =
        Eigen::Map<const ComplexVector>(analysis.images[u].data(),
                                        static_cast<Eigen::Index>(dim) * dim);
  }
  return s;
}

FidelityResult average_gate_fidelity(const ChannelAnalysis& analysis,
                                     const ComplexMatrix& ideal_unitary) {
  const int dim = analysis.dims.dim();
  if (ideal_unitary.rows() != dim) {
    throw Error("average_gate_fidelity: ideal unitary dimension mismatch");
  }
  const double d = static_cast<double>(analysis.d);

  // Lookup from unit pair to image.
  std::map<std::pair<int, int>, const ComplexMatrix*> image_of;
  for (std::size_t u = 0; u < analysis.unit_pairs.size(); ++u) {
    image_of[analysis.unit_pairs[u]] = &analysis.images[u];
  }

  Complex sum_super = 0.0;
  Complex sum_proj = 0.0;
  for (const int i : analysis.comp_indices) {
    for (const int j : analysis.comp_indices) {
      const auto it = image_of.find({i, j});
      if (it == image_of.end()) {
        throw Error("average_gate_fidelity: channel lacks computational matrix units");
      }
      const ComplexMatrix composed = ideal_unitary * (*it->second) * ideal_unitary.adjoint();
      sum_super += composed(i, j);
      if (i == j) {
        for (const int k : analysis.comp_indices) sum_proj += composed(k, k);
      }
    }
  }

  FidelityResult result;
  result.fbar = (sum_super.real() + sum_proj.real()) / (d * (d + 1.0));
  result.leakage = 1.0 - sum_proj.real() / d;
  return result;
}

FidelityResult average_gate_fidelity(const ChannelAnalysis& analysis) {
  return average_gate_fidelity(analysis, cz_unitary(analysis.dims));
}

}  // namespace casq
