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

#include "phom/homodyne.hpp"

#include <algorithm>
#include <string>

#include "phom/errors.hpp"
#include "phom/random.hpp"

namespace phom {
namespace {

void require_two_mode(const DensityMatrix& state) {
  if (state.modes() != 2) throw std::invalid_argument("expected a two-mode state");
}

// Applies e^{-i (n-k) theta} to entry ((n,m),(k,l)) of a two-mode matrix.
CMatrix rotate_mode1(const CMatrix& rho, Eigen::Index d, double theta) {
  CMatrix out = rho;
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
      const auto n = static_cast<double>(r / d);
      const auto k = static_cast<double>(c / d);
      out(r, c) *= std::polar(1.0, -theta * (n - k));
    }
  }
  return out;
}

// sum_{n,k} op(k, n) rho((n,m),(k,l)) as a mode-2 matrix.
CMatrix contract_mode1(const CMatrix& rho, const RMatrix& op, Eigen::Index d) {
  CMatrix out = CMatrix::Zero(d, d);
  for (Eigen::Index n = 0; n < d; ++n) {
    for (Eigen::Index k = 0; k < d; ++k) {
      if (op(k, n) == 0.0) continue;
      out += op(k, n) * rho.block(n * d, k * d, d, d);
    }
  }
  return out;
}

}  // namespace

RVector fock_wavefunctions(int n_max, double x) {
  RVector psi(n_max + 1);
  psi(0) = std::exp(-x * x / 2.0) / std::sqrt(std::sqrt(std::numbers::pi));
  if (n_max >= 1) psi(1) = x * std::sqrt(2.0) * psi(0);
  for (int k = 2; k <= n_max; ++k) {
    psi(k) = x * std::sqrt(2.0 / k) * psi(k - 1) - std::sqrt((k - 1.0) / k) * psi(k - 2);
  }
  return psi;
}

void HomodyneSetting::validate() const {
  if (!std::isfinite(delta_theta)) throw std::invalid_argument("delta_theta must be finite");
  if (!(grid_range > 0.0) || !(grid_step > 0.0)) {
    throw std::invalid_argument("homodyne grid range and step must be positive");
  }
  if (grid_range / grid_step < 100.0) {
    throw std::invalid_argument("homodyne grid needs at least 100 steps per half-width");
  }
}

int HomodyneSetting::cells() const {
  return static_cast<int>(std::lround(2.0 * grid_range / grid_step));
}

double joint_density(const DensityMatrix& state, double delta_theta, double x1, double x2) {
  require_two_mode(state);
  const int n_max = state.cutoff().n_max();
  const Eigen::Index d = state.cutoff().dim();
  const RVector p1 = fock_wavefunctions(n_max, x1);
  const RVector p2 = fock_wavefunctions(n_max, x2);
  CVector w(d * d);
  for (Eigen::Index n = 0; n < d; ++n) {
    const Complex phase = std::polar(1.0, -static_cast<double>(n) * delta_theta);
    for (Eigen::Index m = 0; m < d; ++m) w(n * d + m) = phase * p1(n) * p2(m);
  }
  return (w.transpose() * state.entries() * w.conjugate()).value().real();
}

double marginal_density_x1(const DensityMatrix& state, double delta_theta, double x1) {
  const DensityMatrix reduced = partial_trace(state, 2);
  const RVector p = fock_wavefunctions(state.cutoff().n_max(), x1);
  const CVector pc = p.cast<Complex>();
  return (pc.transpose() * rotate_phase(reduced.entries(), delta_theta) * pc).value().real();
}

double marginal_density_x2(const DensityMatrix& state, double x2) {
  const DensityMatrix reduced = partial_trace(state, 1);
  const CVector p = fock_wavefunctions(state.cutoff().n_max(), x2).cast<Complex>();
  return (p.transpose() * reduced.entries() * p).value().real();
}

ConditionalKernel::ConditionalKernel(const DensityMatrix& state, double delta_theta)
    : cutoff_(state.cutoff()) {
  require_two_mode(state);
  const Eigen::Index d = cutoff_.dim();
  rotated_ = rotate_mode1(state.entries(), d, delta_theta);
  trace_form_ = contract_mode1(rotated_, RMatrix::Identity(d, d), d);
  first_form_ = contract_mode1(rotated_, x_matrix(cutoff_), d);
  second_form_ = contract_mode1(rotated_, x_squared_matrix(cutoff_), d);
}

double ConditionalKernel::form(const CMatrix& m, double x2) const {
  const CVector p = fock_wavefunctions(cutoff_.n_max(), x2).cast<Complex>();
  return (p.transpose() * m * p).value().real();
}

CMatrix ConditionalKernel::state(double x2) const {
  const Eigen::Index d = cutoff_.dim();
  const CVector p = fock_wavefunctions(cutoff_.n_max(), x2).cast<Complex>();
  CMatrix out(d, d);
  for (Eigen::Index n = 0; n < d; ++n) {
    for (Eigen::Index k = 0; k < d; ++k) {
      out(n, k) = (p.transpose() * rotated_.block(n * d, k * d, d, d) * p).value();
    }
  }
  return out;
}

double ConditionalKernel::marginal(double x2) const { return form(trace_form_, x2); }
double ConditionalKernel::first_moment_weight(double x2) const { return form(first_form_, x2); }
double ConditionalKernel::second_moment_weight(double x2) const { return form(second_form_, x2); }

CMatrix conditional_state(const DensityMatrix& state, double delta_theta, double x2) {
  return ConditionalKernel(state, delta_theta).state(x2);
}

HomodyneSampler::HomodyneSampler(const DensityMatrix& state, const HomodyneSetting& setting,
                                 std::uint64_t seed)
    : setting_(setting), engine_(seed) {
  require_two_mode(state);
  setting.validate();
  const int cells = setting.cells();
  const double h = setting.grid_step;
  const int n_max = state.cutoff().n_max();
  const Eigen::Index d = state.cutoff().dim();

  RMatrix psi(cells, d);
  for (int i = 0; i < cells; ++i) psi.row(i) = fock_wavefunctions(n_max, setting.cell_center(i));
  const CMatrix psi_c = psi.cast<Complex>();

  const ConditionalKernel kernel(state, setting.delta_theta);
  x2_cdf_.resize(cells);
  x1_cdf_.resize(static_cast<std::size_t>(cells) * cells);
  double mass = 0.0;
  for (int j = 0; j < cells; ++j) {
    const CMatrix rho_c = kernel.state(setting.cell_center(j));
    const RVector row = (psi_c * rho_c).cwiseProduct(psi_c).rowwise().sum().real();
    double acc = 0.0;
    for (int i = 0; i < cells; ++i) {
      acc += std::max(row(i), 0.0);
      x1_cdf_[static_cast<std::size_t>(j) * cells + i] = acc;
    }
    mass += std::max(kernel.marginal(setting.cell_center(j)), 0.0) * h;
    x2_cdf_[j] = mass;
  }
  if (std::abs(mass - 1.0) > 1e-6) {
    throw NumericalError("gridded homodyne density integrates to " + std::to_string(mass) +
                         "; the state leaks outside +/-" + std::to_string(setting.grid_range));
  }
}

QuadratureSample HomodyneSampler::draw() {
  const int cells = setting_.cells();
  const double h = setting_.grid_step;
  auto pick = [&](auto first, auto last) {
    const double target = uniform01(engine_) * *(last - 1);
    const auto it = std::upper_bound(first, last, target);
    return static_cast<int>(std::min<std::ptrdiff_t>(it - first, cells - 1));
  };
  const int j = pick(x2_cdf_.begin(), x2_cdf_.end());
  const double x2 = setting_.cell_center(j) + (uniform01(engine_) - 0.5) * h;
  const auto row = x1_cdf_.begin() + static_cast<std::ptrdiff_t>(j) * cells;
  const int i = pick(row, row + cells);
  const double x1 = setting_.cell_center(i) + (uniform01(engine_) - 0.5) * h;
  return {x1, x2};
}

std::vector<QuadratureSample> HomodyneSampler::draw(std::size_t n) {
  std::vector<QuadratureSample> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.push_back(draw());
  return out;
}

std::vector<QuadratureSample> sample(const DensityMatrix& state, const HomodyneSetting& setting,
                                     std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample count must be at least 1");
  return HomodyneSampler(state, setting, seed).draw(n);
}

}  // namespace phom
