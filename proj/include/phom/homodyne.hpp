// Copyright 2026 The phom Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "phom/fock.hpp"

namespace phom {

/// Position-space Fock wavefunction <x|n>, vacuum variance 1/2, by upward
/// recurrence from psi_0 = pi^{-1/4} e^{-x^2/2}.
template <typename Real>
Real psi_n(int n, Real x) {
  if (n < 0) throw std::invalid_argument("psi_n: negative Fock index");
  using std::exp, std::sqrt;
  const Real pi = std::numbers::pi_v<Real>;
  Real prev = exp(-x * x / 2) / sqrt(sqrt(pi));
  if (n == 0) return prev;
  Real cur = x * sqrt(Real(2)) * prev;
  for (int k = 2; k <= n; ++k) {
    const Real next = x * sqrt(Real(2) / k) * cur - sqrt(Real(k - 1) / k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// psi_0(x) .. psi_{n_max}(x) in one pass.
RVector fock_wavefunctions(int n_max, double x);

struct HomodyneSetting {
  /// Differential local-oscillator phase theta_1 - theta_2.
  double delta_theta = 0.0;
  double grid_range = 6.0;
  double grid_step = 0.01;

  void validate() const;
  int cells() const;
  double cell_center(int i) const { return -grid_range + (i + 0.5) * grid_step; }
};

struct QuadratureSample {
  double x1;
  double x2;

  friend bool operator==(const QuadratureSample&, const QuadratureSample&) = default;
};

/// Joint density of (X1(delta_theta), X2(0)) for a two-mode state.
double joint_density(const DensityMatrix& state, double delta_theta, double x1, double x2);

/// Density of X1(delta_theta) alone.
double marginal_density_x1(const DensityMatrix& state, double delta_theta, double x1);
double marginal_density_x2(const DensityMatrix& state, double x2);

/// Conditioning of mode 1 on a homodyne outcome x2 of mode 2.
///
/// Precomputes mode-2 matrices so that the unnormalized conditional trace,
/// and the conditional first and second moments of X1(delta_theta), are each
/// a quadratic form in the wavefunction vector psi(x2).
class ConditionalKernel {
 public:
  ConditionalKernel(const DensityMatrix& state, double delta_theta);

  /// rho_c(x2) with the mode-1 phase already applied (unnormalized).
  CMatrix state(double x2) const;
  /// Tr rho_c(x2): the marginal density of x2.
  double marginal(double x2) const;
  /// Tr[X rho_c(x2)].
  double first_moment_weight(double x2) const;
  /// Tr[X^2 rho_c(x2)].
  double second_moment_weight(double x2) const;

  const FockCutoff& cutoff() const { return cutoff_; }

 private:
  double form(const CMatrix& m, double x2) const;

  FockCutoff cutoff_;
  CMatrix rotated_;  // full two-mode state, mode 1 rotated by delta_theta
  CMatrix trace_form_;
  CMatrix first_form_;
  CMatrix second_form_;
};

/// Unnormalized conditional state of mode 1 given X2(0) = x2.
CMatrix conditional_state(const DensityMatrix& state, double delta_theta, double x2);

/// Draws joint homodyne records from a two-mode state.
///
/// x2 comes from the gridded marginal by inverse CDF; x1 from the gridded
/// conditional at the chosen x2 cell. Each coordinate is the cell mid-point
/// plus uniform jitter within one step. The generator is owned; results are
/// a pure function of (state, setting, seed).
class HomodyneSampler {
 public:
  HomodyneSampler(const DensityMatrix& state, const HomodyneSetting& setting, std::uint64_t seed);

  QuadratureSample draw();
  std::vector<QuadratureSample> draw(std::size_t n);

 private:
  HomodyneSetting setting_;
  std::mt19937_64 engine_;
  std::vector<double> x2_cdf_;
  std::vector<double> x1_cdf_;  // row-major: one CDF over x1 cells per x2 cell
};

std::vector<QuadratureSample> sample(const DensityMatrix& state, const HomodyneSetting& setting,
                                     std::size_t n, std::uint64_t seed);

}  // namespace phom
