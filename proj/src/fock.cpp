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

#include "phom/fock.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace phom {
namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-9;
constexpr double kPsdFloor = -1e-9;
constexpr double kLeakageTol = 1e-10;

void check_modes(int modes) {
  if (modes != 1 && modes != 2) {
    throw std::invalid_argument("only one- and two-mode states are supported, got " +
                                std::to_string(modes));
  }
}

bool all_finite(const CMatrix& m) {
  return m.real().allFinite() && m.imag().allFinite();
}

}  // namespace

FockCutoff::FockCutoff(int n_max) : n_max_(n_max) {
  if (n_max < 2) {
    throw std::invalid_argument("Fock cutoff must be at least 2, got " + std::to_string(n_max));
  }
}

PureState::PureState(CVector amplitudes, FockCutoff cutoff, int modes)
    : amplitudes_(std::move(amplitudes)), cutoff_(cutoff), modes_(modes) {
  check_modes(modes);
  if (amplitudes_.size() != cutoff.dim(modes)) {
    throw std::invalid_argument("amplitude vector has size " + std::to_string(amplitudes_.size()) +
                                ", expected " + std::to_string(cutoff.dim(modes)));
  }
  if (!amplitudes_.real().allFinite() || !amplitudes_.imag().allFinite()) {
    throw std::invalid_argument("amplitudes must be finite");
  }
  double leaked = 0.0;
  for (Eigen::Index i = 0; i < amplitudes_.size(); ++i) {
    if (photon_count(i, modes, cutoff) > cutoff.n_max()) leaked += std::norm(amplitudes_(i));
  }
  if (leaked > kLeakageTol) {
    throw std::invalid_argument("state has weight " + std::to_string(leaked) +
                                " above the photon budget of cutoff " +
                                std::to_string(cutoff.n_max()));
  }
}

PureState PureState::fock(int n, FockCutoff cutoff) {
  if (n < 0 || n > cutoff.n_max()) throw std::invalid_argument("Fock index out of range");
  CVector v = CVector::Zero(cutoff.dim());
  v(n) = 1.0;
  return PureState(std::move(v), cutoff, 1);
}

PureState PureState::fock(int n1, int n2, FockCutoff cutoff) {
  if (n1 < 0 || n2 < 0 || n1 + n2 > cutoff.n_max()) {
    throw std::invalid_argument("two-mode Fock state exceeds the cutoff");
  }
  CVector v = CVector::Zero(cutoff.dim(2));
  v(pair_index(n1, n2, cutoff)) = 1.0;
  return PureState(std::move(v), cutoff, 2);
}

PureState PureState::normalized() const {
  const double n = norm();
  if (!(n > 0.0)) throw std::invalid_argument("cannot normalize a zero state");
  return PureState(amplitudes_ / n, cutoff_, modes_);
}

DensityMatrix::DensityMatrix(CMatrix entries, FockCutoff cutoff, int modes)
    : cutoff_(cutoff), modes_(modes) {
  check_modes(modes);
  const Eigen::Index d = cutoff.dim(modes);
  if (entries.rows() != d || entries.cols() != d) {
    throw std::invalid_argument("density matrix must be " + std::to_string(d) + "x" +
                                std::to_string(d));
  }
  if (!all_finite(entries)) throw std::invalid_argument("density matrix has non-finite entries");
  if (!is_hermitian(entries, kHermitianTol)) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  entries_ = (entries + entries.adjoint()) / 2.0;
  const Complex tr = entries_.trace();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw std::invalid_argument("density matrix trace is " + std::to_string(tr.real()) +
                                ", expected 1");
  }
  double leaked = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (photon_count(i, modes, cutoff) > cutoff.n_max()) leaked += std::abs(entries_(i, i));
  }
  if (leaked > kLeakageTol) {
    throw std::invalid_argument("density matrix has weight above the photon budget");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(entries_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < kPsdFloor) {
    throw std::invalid_argument("density matrix is not positive semidefinite (min eigenvalue " +
                                std::to_string(solver.eigenvalues().minCoeff()) + ")");
  }
}

DensityMatrix DensityMatrix::normalize(CMatrix entries, FockCutoff cutoff, int modes) {
  const Complex tr = entries.trace();
  if (!(std::abs(tr) > 0.0) || !std::isfinite(tr.real())) {
    throw std::invalid_argument("cannot normalize a matrix with zero or non-finite trace");
  }
  entries /= tr.real();
  return DensityMatrix(std::move(entries), cutoff, modes);
}

DensityMatrix DensityMatrix::from_pure(const PureState& state) {
  const CVector& v = state.amplitudes();
  return DensityMatrix(v * v.adjoint(), state.cutoff(), state.modes());
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> weights, FockCutoff cutoff) {
  if (static_cast<Eigen::Index>(weights.size()) > cutoff.dim()) {
    throw std::invalid_argument("more Fock weights than the cutoff holds");
  }
  CMatrix m = CMatrix::Zero(cutoff.dim(), cutoff.dim());
  for (std::size_t n = 0; n < weights.size(); ++n) {
    if (!(weights[n] >= 0.0)) throw std::invalid_argument("Fock weights must be nonnegative");
    m(n, n) = weights[n];
  }
  return DensityMatrix(std::move(m), cutoff, 1);
}

DensityMatrix DensityMatrix::vacuum(FockCutoff cutoff, int modes) {
  check_modes(modes);
  CMatrix m = CMatrix::Zero(cutoff.dim(modes), cutoff.dim(modes));
  m(0, 0) = 1.0;
  return DensityMatrix(std::move(m), cutoff, modes);
}

PureState tensor(const PureState& a, const PureState& b) {
  if (a.modes() != 1 || b.modes() != 1) throw std::invalid_argument("tensor expects single modes");
  if (!(a.cutoff() == b.cutoff())) throw std::invalid_argument("tensor: cutoff mismatch");
  return PureState(kron(a.amplitudes(), b.amplitudes()), a.cutoff(), 2);
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.modes() != 1 || b.modes() != 1) throw std::invalid_argument("tensor expects single modes");
  if (!(a.cutoff() == b.cutoff())) throw std::invalid_argument("tensor: cutoff mismatch");
  return DensityMatrix(kron(a.entries(), b.entries()), a.cutoff(), 2);
}

DensityMatrix partial_trace(const DensityMatrix& rho, int traced) {
  if (rho.modes() != 2) throw std::invalid_argument("partial_trace expects a two-mode state");
  if (traced != 1 && traced != 2) throw std::invalid_argument("traced mode must be 1 or 2");
  return DensityMatrix(partial_trace(rho.entries(), rho.cutoff().dim(), traced), rho.cutoff(), 1);
}

RMatrix annihilation_matrix(FockCutoff cutoff) {
  const Eigen::Index d = cutoff.dim();
  RMatrix a = RMatrix::Zero(d, d);
  for (Eigen::Index n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

RMatrix x_matrix(FockCutoff cutoff) {
  const RMatrix a = annihilation_matrix(cutoff);
  return (a + a.transpose()) / std::sqrt(2.0);
}

CMatrix p_matrix(FockCutoff cutoff) {
  const RMatrix a = annihilation_matrix(cutoff);
  const CMatrix diff = (a - a.transpose()).cast<Complex>();
  return diff / Complex(0.0, std::sqrt(2.0));
}

RMatrix x_squared_matrix(FockCutoff cutoff) {
  const Eigen::Index d = cutoff.dim();
  RMatrix x2 = RMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const auto kd = static_cast<double>(k);
    x2(k, k) = kd + 0.5;
    if (k + 2 < d) {
      x2(k, k + 2) = 0.5 * std::sqrt((kd + 1.0) * (kd + 2.0));
      x2(k + 2, k) = x2(k, k + 2);
    }
  }
  return x2;
}

RMatrix number_matrix(FockCutoff cutoff) {
  return RVector::LinSpaced(cutoff.dim(), 0.0, static_cast<double>(cutoff.n_max())).asDiagonal();
}

double expect(const CMatrix& rho, const CMatrix& op) {
  if (rho.rows() != op.rows() || rho.cols() != op.cols()) {
    throw std::invalid_argument("expect: dimension mismatch");
  }
  if (!all_finite(op) || !all_finite(rho)) throw std::invalid_argument("expect: non-finite entries");
  if (!is_hermitian(op, kHermitianTol)) throw std::invalid_argument("expect: operator not Hermitian");
  const Complex value = (rho * op).trace();
  if (std::abs(value.imag()) > 1e-9) {
    throw std::invalid_argument("expect: imaginary residue " + std::to_string(value.imag()));
  }
  return value.real();
}

double expect(const DensityMatrix& rho, const CMatrix& op) { return expect(rho.entries(), op); }

}  // namespace phom
