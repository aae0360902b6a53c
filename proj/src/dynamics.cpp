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

#include "casq/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Sparse>

#include "casq/parallel.hpp"
#include "casq/spectrum.hpp"

namespace casq {

void CoherenceParams::validate() const {
  for (int i = 0; i < 3; ++i) {
    const auto m = static_cast<std::size_t>(i);
    if (t1[m] <= 0.0 || t2_ramsey[m] <= 0.0 || t2_echo[m] <= 0.0) {
      throw Error("CoherenceParams: coherence times must be positive");
    }
  }
}

std::vector<OperatorMatrix> collapse_operators(const DeviceParams& p, const CoherenceParams& c,
                                               T2Choice t2_choice) {
  c.validate();
  std::vector<OperatorMatrix> ops;
  for (int i = 0; i < 3; ++i) {
    const auto m = static_cast<std::size_t>(i);
    const double t1_ns = c.t1[m] * ns_per_us;
    const double t2_ns =
        (t2_choice == T2Choice::Ramsey ? c.t2_ramsey[m] : c.t2_echo[m]) * ns_per_us;
    const double gamma_phi = 1.0 / t2_ns - 0.5 / t1_ns;
    if (gamma_phi < -1e-15) {
      throw NegativeDephasing("transmon " + std::to_string(i) +
                              ": T2 exceeds 2 T1, pure-dephasing rate would be negative");
    }
    const Mode mode = static_cast<Mode>(i);
    OperatorMatrix relax = site_operator(p.dims, mode, OperatorKind::Lower);
    relax.data *= std::sqrt(1.0 / t1_ns);
    ops.push_back(std::move(relax));
    if (gamma_phi > 0.0) {
      OperatorMatrix dephase = site_operator(p.dims, mode, OperatorKind::Number);
      dephase.data *= std::sqrt(2.0 * gamma_phi);
      ops.push_back(std::move(dephase));
    }
  }
  return ops;
}

double population(const ComplexVector& psi, const ModeDims& dims, const BareLabel& label) {
  return std::norm(psi(basis_index(dims, label)));
}

double population(const ComplexMatrix& rho, const ModeDims& dims, const BareLabel& label) {
  const int i = basis_index(dims, label);
  return rho(i, i).real();
}

namespace {

template <typename StateLike, typename Getter>
double mode_population_impl(const ModeDims& dims, Mode mode, int n, const Getter& get) {
  double total = 0.0;
  for (int idx = 0; idx < dims.dim(); ++idx) {
    if (basis_label(dims, idx)[static_cast<int>(mode)] == n) total += get(idx);
  }
  return total;
}

}  // namespace

double mode_population(const ComplexVector& psi, const ModeDims& dims, Mode mode, int n) {
  return mode_population_impl<ComplexVector>(dims, mode, n,
                                             [&](int i) { return std::norm(psi(i)); });
}

double mode_population(const ComplexMatrix& rho, const ModeDims& dims, Mode mode, int n) {
  return mode_population_impl<ComplexMatrix>(dims, mode, n,
                                             [&](int i) { return rho(i, i).real(); });
}

namespace {

// Drive coefficient multiplying (adag_c + a_c), in angular units.
class DriveCoefficient {
 public:
  DriveCoefficient(const DriveParams& d, Frame frame) : drive_(d), frame_(frame) {}

  double operator()(double t) const {
    const double env = drive_.envelope ? envelope(*drive_.envelope, t) : drive_.amp;
    if (env == 0.0) return 0.0;
    if (frame_ == Frame::Rotating) return 0.5 * to_angular(env);
    return to_angular(env) * std::cos(to_angular(drive_.omega_d) * t);
  }

 private:
  DriveParams drive_;
  Frame frame_;
};

ComplexMatrix frame_base_hamiltonian(const DeviceParams& p, const DriveParams& d, Frame frame,
                                     bool include_g12) {
  if (frame == Frame::Lab) return build_static_hamiltonian(p, include_g12).data;
  DriveParams undriven = d;
  undriven.amp = 0.0;
  return build_rotating_hamiltonian(p, undriven, include_g12).data;
}

void record_observables(Trajectory& traj, const ModeDims& dims,
                        const std::vector<BareLabel>& tracked) {
  for (const BareLabel& label : tracked) {
    auto& series = traj.observables[label.str()];
    if (!traj.states.empty()) {
      series.push_back(population(traj.states.back(), dims, label));
    } else {
      series.push_back(population(traj.densities.back(), dims, label));
    }
  }
}

}  // namespace

Trajectory evolve_schrodinger(const DeviceParams& p, const DriveParams& d,
                              const ComplexVector& psi0, const std::vector<double>& t_grid,
                              Frame frame, const std::vector<BareLabel>& tracked,
                              const OdeOptions& opts, bool include_g12) {
  if (t_grid.empty()) throw Error("evolve_schrodinger: empty time grid");
  if (std::abs(psi0.norm() - 1.0) > 1e-9) throw Error("evolve_schrodinger: psi0 not normalized");

  const ComplexMatrix h_base = frame_base_hamiltonian(p, d, frame, include_g12);
  const ComplexMatrix x_op = build_drive_operator(p).data;
  const DriveCoefficient coeff(d, frame);

  std::function<void(double, const ComplexVector&, ComplexVector&)> rhs =
      [&](double t, const ComplexVector& psi, ComplexVector& out) {
        out.noalias() = h_base * psi;
        const double c = coeff(t);
        if (c != 0.0) out.noalias() += c * (x_op * psi);
        out *= Complex(0.0, -1.0);
      };

  Trajectory traj;
  ComplexVector psi = psi0;
  traj.times = t_grid;
  traj.states.push_back(psi);
  record_observables(traj, p.dims, tracked);
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    integrate_adaptive(rhs, t_grid[i - 1], t_grid[i], psi, opts);
    traj.states.push_back(psi);
    record_observables(traj, p.dims, tracked);
  }
  return traj;
}

Trajectory evolve_lindblad(const DeviceParams& p, const DriveParams& d, const ComplexMatrix& rho0,
                           const std::vector<double>& t_grid,
                           const std::vector<OperatorMatrix>& collapse, Frame frame,
                           const std::vector<BareLabel>& tracked, const OdeOptions& opts,
                           bool include_g12) {
  if (t_grid.empty()) throw Error("evolve_lindblad: empty time grid");
  if (std::abs(rho0.trace().real() - 1.0) > 1e-9 || std::abs(rho0.trace().imag()) > 1e-12) {
    throw Error("evolve_lindblad: rho0 must have unit trace");
  }

  const ComplexMatrix h_base = frame_base_hamiltonian(p, d, frame, include_g12);
  const ComplexMatrix x_op = build_drive_operator(p).data;
  const DriveCoefficient coeff(d, frame);

  ComplexMatrix ldl_sum = ComplexMatrix::Zero(h_base.rows(), h_base.cols());
  for (const OperatorMatrix& l : collapse) ldl_sum += l.data.adjoint() * l.data;
  // Non-Hermitian drift A = -i H - (1/2) sum L^dag L, so the coherent and
  // anticommutator terms become A rho + rho A^dag.
  const ComplexMatrix drift = Complex(0.0, -1.0) * h_base - 0.5 * ldl_sum;
  const ComplexMatrix drift_adj = drift.adjoint();

  ComplexMatrix drift_t = drift;
  ComplexMatrix drift_t_adj = drift_adj;
  std::function<void(double, const ComplexMatrix&, ComplexMatrix&)> rhs =
      [&, drift_t, drift_t_adj](double t, const ComplexMatrix& rho, ComplexMatrix& out) mutable {
        const double c = coeff(t);
        drift_t = drift + Complex(0.0, -c) * x_op;
        drift_t_adj = drift_adj + Complex(0.0, c) * x_op;
        out.noalias() = drift_t * rho;
        out.noalias() += rho * drift_t_adj;
        for (const OperatorMatrix& l : collapse) {
          out.noalias() += l.data * rho * l.data.adjoint();
        }
      };

  Trajectory traj;
  ComplexMatrix rho = rho0;
  traj.times = t_grid;
  traj.densities.push_back(rho);
  record_observables(traj, p.dims, tracked);
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    integrate_adaptive(rhs, t_grid[i - 1], t_grid[i], rho, opts);
    traj.densities.push_back(rho);
    record_observables(traj, p.dims, tracked);
  }
  return traj;
}

PulsePropagator::PulsePropagator(const DeviceParams& p, double omega_d, double amp,
                                 double sigma_ns, const OdeOptions& opts, bool include_g12)
    : params_(p),
      omega_d_(omega_d),
      amp_(amp),
      sigma_(sigma_ns),
      opts_(opts),
      include_g12_(include_g12) {
  DriveParams undriven;
  undriven.omega_d = omega_d;
  undriven.amp = 0.0;
  h_base_ = build_rotating_hamiltonian(p, undriven, include_g12).data;
  x_op_ = build_drive_operator(p).data;
  h_plateau_ = h_base_ + (0.5 * to_angular(amp)) * x_op_;

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h_plateau_);
  if (solver.info() != Eigen::Success) throw Error("PulsePropagator: eigensolver failed");
  plateau_evals_ = solver.eigenvalues();
  plateau_evecs_ = solver.eigenvectors();
}

ComplexVector PulsePropagator::apply_edge(const ComplexVector& psi, bool rising) const {
  const double edge = 2.0 * sigma_;
  // Rising edge: Gaussian centered at its end; falling edge: at its start.
  const double center = rising ? edge : 0.0;
  std::function<void(double, const ComplexVector&, ComplexVector&)> rhs =
      [&](double t, const ComplexVector& y, ComplexVector& out) {
        const double u = (t - center) / sigma_;
        const double c = 0.5 * to_angular(amp_) * std::exp(-0.5 * u * u);
        out.noalias() = h_base_ * y;
        out.noalias() += c * (x_op_ * y);
        out *= Complex(0.0, -1.0);
      };
  ComplexVector out = psi;
  integrate_adaptive(rhs, 0.0, edge, out, opts_);
  return out;
}

ComplexVector PulsePropagator::apply_rising(const ComplexVector& psi) const {
  return apply_edge(psi, true);
}

ComplexVector PulsePropagator::apply_falling(const ComplexVector& psi) const {
  return apply_edge(psi, false);
}

ComplexVector PulsePropagator::apply_plateau(const ComplexVector& psi, double plateau_ns) const {
  if (plateau_ns == 0.0) return psi;
  ComplexVector coords = plateau_evecs_.adjoint() * psi;
  for (Eigen::Index i = 0; i < coords.size(); ++i) {
    coords(i) *= std::exp(Complex(0.0, -plateau_evals_(i) * plateau_ns));
  }
  return plateau_evecs_ * coords;
}

ComplexVector PulsePropagator::propagate(const ComplexVector& psi0, double plateau_ns) const {
  return apply_falling(apply_plateau(apply_rising(psi0), plateau_ns));
}

void PulsePropagator::build_edge_propagators() const {
  if (edge_rise_u_.size() != 0) return;
  const Eigen::Index dim = h_base_.rows();
  ComplexMatrix ht(dim, dim);
  for (const bool rising : {true, false}) {
    const double edge = 2.0 * sigma_;
    const double center = rising ? edge : 0.0;
    std::function<void(double, const ComplexMatrix&, ComplexMatrix&)> rhs =
        [&](double t, const ComplexMatrix& u, ComplexMatrix& out) {
          const double s = (t - center) / sigma_;
          const double c = 0.5 * to_angular(amp_) * std::exp(-0.5 * s * s);
          ht = h_base_ + c * x_op_;
          out.noalias() = ht * u;
          out *= Complex(0.0, -1.0);
        };
    ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
    integrate_adaptive(rhs, 0.0, edge, u, opts_);
    // Polar projection removes the integrator's unitarity defect, so
    // channels built from these propagators preserve the trace exactly.
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> polar(u.adjoint() * u);
    const ComplexMatrix inv_sqrt =
        polar.eigenvectors() *
        polar.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
        polar.eigenvectors().adjoint();
    (rising ? edge_rise_u_ : edge_fall_u_) = u * inv_sqrt;
  }
}

const ComplexMatrix& PulsePropagator::rising_propagator() const {
  build_edge_propagators();
  return edge_rise_u_;
}

const ComplexMatrix& PulsePropagator::falling_propagator() const {
  build_edge_propagators();
  return edge_fall_u_;
}

ComplexMatrix PulsePropagator::propagator(double plateau_ns) const {
  build_edge_propagators();
  const Eigen::Index dim = h_base_.rows();
  ComplexVector phases(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    phases(i) = std::exp(Complex(0.0, -plateau_evals_(i) * plateau_ns));
  }
  return edge_fall_u_ *
         (plateau_evecs_ * phases.asDiagonal() * plateau_evecs_.adjoint()) * edge_rise_u_;
}

ChevronResult chevron_scan(const DeviceParams& p, double amp, const std::vector<double>& delta,
                           const std::vector<double>& tau, Transition transition,
                           const ChevronOptions& opts) {
  if (delta.empty() || tau.empty()) throw Error("chevron_scan: empty scan axes");

  AnticrossingOptions ac_opts;
  ac_opts.include_g12 = opts.include_g12;
  const AnticrossingResult res = cas_rate_numeric(p, amp, transition, ac_opts);

  const BareLabel initial =
      transition == Transition::Blue ? BareLabel(0, 1, 0) : BareLabel(1, 0, 0);
  const Mode swapped = transition == Transition::Blue ? Mode::Q2 : Mode::Q1;

  ChevronResult out;
  out.omega_resonance = res.omega_resonance;
  out.rate_numeric = res.rate;
  out.delta = Eigen::Map<const RealVector>(delta.data(), static_cast<Eigen::Index>(delta.size()));
  out.tau = Eigen::Map<const RealVector>(tau.data(), static_cast<Eigen::Index>(tau.size()));
  out.population.resize(static_cast<Eigen::Index>(delta.size()),
                        static_cast<Eigen::Index>(tau.size()));

  const ComplexVector psi0 = basis_state(p.dims, initial);
  parallel_for(static_cast<int>(delta.size()), opts.jobs, [&](int row) {
    const double omega_d = res.omega_resonance + delta[static_cast<std::size_t>(row)];
    const PulsePropagator prop(p, omega_d, amp, opts.sigma_ns, opts.ode, opts.include_g12);
    const ComplexVector after_rise = prop.apply_rising(psi0);
    for (std::size_t col = 0; col < tau.size(); ++col) {
      const ComplexVector psi =
          prop.apply_falling(prop.apply_plateau(after_rise, tau[col]));
      out.population(row, static_cast<Eigen::Index>(col)) =
          mode_population(psi, p.dims, swapped, 1);
    }
  });
  return out;
}

OscillationFit fit_oscillation(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 4) throw FitDiverged("fit_oscillation: need at least 4 samples");
  const double span = x.back() - x.front();
  if (span <= 0.0) throw FitDiverged("fit_oscillation: abscissa must be increasing");

  double dt_min = span;
  for (std::size_t i = 1; i < n; ++i) dt_min = std::min(dt_min, x[i] - x[i - 1]);
  if (dt_min <= 0.0) throw FitDiverged("fit_oscillation: abscissa must be strictly increasing");

  const double f_lo = 0.25 / span;
  const double f_hi = 0.5 / dt_min;

  Eigen::MatrixXd design(static_cast<Eigen::Index>(n), 3);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) rhs(static_cast<Eigen::Index>(i)) = y[i];

  const auto residual_at = [&](double f, Eigen::Vector3d* coeffs) {
    for (std::size_t i = 0; i < n; ++i) {
      const double arg = two_pi * f * x[i];
      design(static_cast<Eigen::Index>(i), 0) = std::cos(arg);
      design(static_cast<Eigen::Index>(i), 1) = std::sin(arg);
      design(static_cast<Eigen::Index>(i), 2) = 1.0;
    }
    const Eigen::Vector3d c = design.colPivHouseholderQr().solve(rhs);
    if (coeffs) *coeffs = c;
    return (design * c - rhs).norm();
  };

  const int grid = std::max(1200, static_cast<int>(8.0 * span * (f_hi - f_lo)));
  double best_f = f_lo;
  double best_r = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= grid; ++i) {
    const double f = f_lo + (f_hi - f_lo) * i / grid;
    const double r = residual_at(f, nullptr);
    if (r < best_r) {
      best_r = r;
      best_f = f;
    }
  }

  // Golden-section refinement around the best grid point.
  constexpr double kInvPhi = 0.6180339887498949;
  const double df = (f_hi - f_lo) / grid;
  double a = std::max(f_lo, best_f - df);
  double b = std::min(f_hi, best_f + df);
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double r1 = residual_at(x1, nullptr);
  double r2 = residual_at(x2, nullptr);
  while (b - a > 1e-9 * f_hi) {
    if (r1 < r2) {
      b = x2;
      x2 = x1;
      r2 = r1;
      x1 = b - kInvPhi * (b - a);
      r1 = residual_at(x1, nullptr);
    } else {
      a = x1;
      x1 = x2;
      r1 = r2;
      x2 = a + kInvPhi * (b - a);
      r2 = residual_at(x2, nullptr);
    }
  }

  Eigen::Vector3d coeffs;
  const double f_best = 0.5 * (a + b);
  const double r_best = residual_at(f_best, &coeffs);
  if (!std::isfinite(r_best) || !coeffs.allFinite()) {
    throw FitDiverged("fit_oscillation: least-squares solve failed");
  }

  OscillationFit fit;
  fit.frequency = f_best;
  fit.amplitude = std::hypot(coeffs(0), coeffs(1));
  fit.phase = std::atan2(-coeffs(1), coeffs(0));
  fit.offset = coeffs(2);
  fit.residual = r_best / std::sqrt(static_cast<double>(n));
  fit.low_confidence = span * f_best < 3.0;
  return fit;
}

std::vector<ComplexMatrix> propagate_units_lindblad_rk(
    const PulsePropagator& prop, double plateau_ns,
    const std::vector<OperatorMatrix>& collapse,
    const std::vector<std::pair<int, int>>& units, const OdeOptions& opts) {
  const DeviceParams& p = prop.device();
  const int dim = p.dims.dim();

  DriveParams d;
  d.omega_d = prop.drive_frequency();
  d.amp = prop.amplitude();
  d.envelope = PulseShape::flat_top(prop.amplitude(), plateau_ns, prop.edge_duration() / 2.0);

  const ComplexMatrix h_base = frame_base_hamiltonian(p, d, Frame::Rotating, true);
  const ComplexMatrix x_op = build_drive_operator(p).data;
  const DriveCoefficient coeff(d, Frame::Rotating);

  ComplexMatrix ldl_sum = ComplexMatrix::Zero(dim, dim);
  for (const OperatorMatrix& l : collapse) ldl_sum += l.data.adjoint() * l.data;
  const ComplexMatrix drift = Complex(0.0, -1.0) * h_base - 0.5 * ldl_sum;
  const ComplexMatrix drift_adj = drift.adjoint();

  ComplexMatrix drift_t = drift;
  ComplexMatrix drift_t_adj = drift_adj;
  std::function<void(double, const ComplexMatrix&, ComplexMatrix&)> rhs =
      [&, drift_t, drift_t_adj](double t, const ComplexMatrix& rho, ComplexMatrix& out) mutable {
        const double c = coeff(t);
        drift_t = drift + Complex(0.0, -c) * x_op;
        drift_t_adj = drift_adj + Complex(0.0, c) * x_op;
        out.noalias() = drift_t * rho;
        out.noalias() += rho * drift_t_adj;
        for (const OperatorMatrix& l : collapse) {
          out.noalias() += l.data * rho * l.data.adjoint();
        }
      };

  const double total = prop.total_duration(plateau_ns);
  std::vector<ComplexMatrix> images;
  images.reserve(units.size());
  for (const auto& [i, j] : units) {
    ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
    rho(i, j) = 1.0;
    integrate_adaptive(rhs, 0.0, total, rho, opts);
    images.push_back(std::move(rho));
  }
  return images;
}

namespace {

// Time-averaged plateau dissipator in the eigenbasis interaction picture:
// jump kernel as a sparse map on vec(rho) plus the Hermitian damping matrix,
// built from the same kept term set so the generator annihilates the trace
// exactly.
struct AveragedDissipator {
  Eigen::SparseMatrix<Complex> jump;  // (dim^2 x dim^2), vec index m + dim*n
  ComplexMatrix damping;              // dim x dim, Hermitian

  ComplexMatrix apply(const ComplexMatrix& sigma) const {
    const Eigen::Index dim = damping.rows();
    const Eigen::Map<const ComplexVector> sigma_vec(sigma.data(), dim * dim);
    ComplexVector jumped = jump * sigma_vec;
    ComplexMatrix out = Eigen::Map<ComplexMatrix>(jumped.data(), dim, dim);
    out.noalias() -= 0.5 * (damping * sigma);
    out.noalias() -= 0.5 * (sigma * damping);
    return out;
  }
};

struct KernelEntry {
  int row;
  int col;
  double gap;      // lambda_row - lambda_col
  Complex value;   // collapse-operator matrix element
  Complex phase;   // exp(i gap tau)
};

AveragedDissipator build_averaged_dissipator(const std::vector<ComplexMatrix>& ops_eigenbasis,
                                             const RealVector& evals, double tau,
                                             const WeakDissipationOptions& opts) {
  const Eigen::Index dim = evals.size();
  AveragedDissipator out;
  out.damping = ComplexMatrix::Zero(dim, dim);

  std::vector<Eigen::Triplet<Complex>> triplets;
  for (const ComplexMatrix& lp : ops_eigenbasis) {
    const double eps = opts.amplitude_cutoff * lp.cwiseAbs().maxCoeff();

    std::vector<KernelEntry> entries;
    for (Eigen::Index m = 0; m < dim; ++m) {
      for (Eigen::Index q = 0; q < dim; ++q) {
        if (std::abs(lp(m, q)) < eps) continue;
        const double gap = evals(m) - evals(q);
        entries.push_back({static_cast<int>(m), static_cast<int>(q), gap, lp(m, q),
                           std::exp(Complex(0.0, gap * tau))});
      }
    }

    for (const KernelEntry& e1 : entries) {
      for (const KernelEntry& e2 : entries) {
        const double dw = e1.gap - e2.gap;
        if (std::abs(dw) > opts.omega_cutoff) continue;
        const Complex rel_phase = e1.phase * std::conj(e2.phase);
        const Complex filter = std::abs(dw) < 1e-12
                                   ? Complex(tau, 0.0)
                                   : (rel_phase - 1.0) / Complex(0.0, dw);
        const Complex w = e1.value * std::conj(e2.value) * filter;
        // vec index of rho_{mn} is m + dim*n: target (e1.row, e2.row),
        // source (e1.col, e2.col).
        triplets.emplace_back(e1.row + static_cast<int>(dim) * e2.row,
                              e1.col + static_cast<int>(dim) * e2.col, w);
        if (e1.row == e2.row) out.damping(e2.col, e1.col) += w;
      }
    }
  }
  out.jump.resize(dim * dim, dim * dim);
  out.jump.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

// exp(generator)[state] by plain Taylor summation; the generator norm is a
// small fraction of unity for realistic coherence times.
template <typename Apply>
ComplexMatrix exp_generator_apply(const Apply& apply, const ComplexMatrix& state,
                                  int max_terms = 60) {
  ComplexMatrix sum = state;
  ComplexMatrix term = state;
  for (int k = 1; k <= max_terms; ++k) {
    term = apply(term);
    term /= static_cast<double>(k);
    sum += term;
    if (term.norm() <= 1e-15 * sum.norm()) return sum;
  }
  throw ToleranceNotMet("exp_generator_apply: Taylor series did not converge");
}

}  // namespace

std::vector<ComplexMatrix> propagate_units_weak_dissipation(
    const PulsePropagator& prop, double plateau_ns,
    const std::vector<OperatorMatrix>& collapse,
    const std::vector<std::pair<int, int>>& units, const WeakDissipationOptions& opts) {
  const int dim = prop.device().dims.dim();
  const ComplexMatrix& v = prop.plateau_eigenvectors();
  const RealVector& lam = prop.plateau_eigenvalues();

  std::vector<ComplexMatrix> ops_eigenbasis;
  ops_eigenbasis.reserve(collapse.size());
  for (const OperatorMatrix& l : collapse) {
    ops_eigenbasis.push_back(v.adjoint() * l.data * v);
  }
  const AveragedDissipator plateau_dissipator =
      build_averaged_dissipator(ops_eigenbasis, lam, plateau_ns, opts);

  // Dissipator in the original frame, for the short edges.
  const double half_edge = 0.5 * prop.edge_duration();
  ComplexMatrix ldl_sum = ComplexMatrix::Zero(dim, dim);
  for (const OperatorMatrix& l : collapse) ldl_sum += l.data.adjoint() * l.data;
  const auto edge_dissipate = [&](const ComplexMatrix& rho) {
    ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
    for (const OperatorMatrix& l : collapse) {
      out.noalias() += l.data * rho * l.data.adjoint();
    }
    out.noalias() -= 0.5 * (ldl_sum * rho);
    out.noalias() -= 0.5 * (rho * ldl_sum);
    return (half_edge * out).eval();
  };

  const ComplexMatrix& u_rise = prop.rising_propagator();
  const ComplexMatrix& u_fall = prop.falling_propagator();

  ComplexVector plateau_phase(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    plateau_phase(i) = std::exp(Complex(0.0, -lam(i) * plateau_ns));
  }

  std::vector<ComplexMatrix> images;
  images.reserve(units.size());
  for (const auto& [i, j] : units) {
    ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
    rho(i, j) = 1.0;

    rho = exp_generator_apply(edge_dissipate, rho);
    rho = (u_rise * rho * u_rise.adjoint()).eval();
    rho = exp_generator_apply(edge_dissipate, rho);

    ComplexMatrix sigma = v.adjoint() * rho * v;
    sigma = exp_generator_apply(
        [&](const ComplexMatrix& s) { return plateau_dissipator.apply(s); }, sigma);
    sigma = plateau_phase.asDiagonal() * sigma * plateau_phase.conjugate().asDiagonal();
    rho = v * sigma * v.adjoint();

    rho = exp_generator_apply(edge_dissipate, rho);
    rho = (u_fall * rho * u_fall.adjoint()).eval();
    rho = exp_generator_apply(edge_dissipate, rho);

    images.push_back(std::move(rho));
  }
  return images;
}

}  // namespace casq
