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

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace casq {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Unit conventions used throughout:
//   - configuration and reported frequencies are ordinary frequencies in GHz
//     (value = angular frequency / 2pi),
//   - matrices and eigenvalues are in angular units, rad/ns,
//   - time is in ns, coherence times in configuration are in us.
inline constexpr double ns_per_us = 1.0e3;

inline double to_angular(double freq_ghz) { return two_pi * freq_ghz; }
inline double to_ghz(double angular_rad_per_ns) { return angular_rad_per_ns / two_pi; }

// Frequency denominators (GHz) smaller than this are treated as singular.
inline constexpr double kSingularTol = 1e-9;

enum class Mode : int { Q1 = 0, Q2 = 1, Qc = 2 };

enum class Transition { Blue, Red };

// Base class for all domain errors thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DegenerateConnectedLevels : public Error {
 public:
  DegenerateConnectedLevels(const std::string& what, int level_a, int level_b)
      : Error(what), level_a(level_a), level_b(level_b) {}
  int level_a;
  int level_b;
};

class SingularDenominator : public Error {
 public:
  explicit SingularDenominator(const std::string& factor)
      : Error("singular denominator: " + factor), factor(factor) {}
  std::string factor;
};

class LabelAmbiguous : public Error {
 public:
  LabelAmbiguous(const std::string& what, int candidate_a, int candidate_b)
      : Error(what), candidate_a(candidate_a), candidate_b(candidate_b) {}
  int candidate_a;
  int candidate_b;
};

class NoAnticrossing : public Error {
 public:
  explicit NoAnticrossing(const std::string& what) : Error(what) {}
};

class ToleranceNotMet : public Error {
 public:
  explicit ToleranceNotMet(const std::string& what) : Error(what) {}
};

class NegativeDephasing : public Error {
 public:
  explicit NegativeDephasing(const std::string& what) : Error(what) {}
};

class FitDiverged : public Error {
 public:
  explicit FitDiverged(const std::string& what) : Error(what) {}
};

class OptimizationStalled : public Error {
 public:
  explicit OptimizationStalled(const std::string& what) : Error(what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace casq
