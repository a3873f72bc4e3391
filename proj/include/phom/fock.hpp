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

#include <complex>
#include <span>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace phom {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Highest retained Fock index per mode. A state built at this cutoff may
/// hold at most n_max photons in total, across all of its modes.
class FockCutoff {
 public:
  static constexpr int kDefault = 6;

  explicit FockCutoff(int n_max = kDefault);

  int n_max() const { return n_max_; }
  /// Single-mode basis dimension.
  Eigen::Index dim() const { return n_max_ + 1; }
  Eigen::Index dim(int modes) const { return modes == 1 ? dim() : dim() * dim(); }

  friend bool operator==(const FockCutoff&, const FockCutoff&) = default;

 private:
  int n_max_;
};

/// Two-mode basis index. Mode 1 is the slow index: (n1, n2) -> n1 * dim + n2.
inline Eigen::Index pair_index(int n1, int n2, const FockCutoff& cutoff) {
  return n1 * cutoff.dim() + n2;
}

/// Total photon number of basis element `index` of a `modes`-mode space.
inline int photon_count(Eigen::Index index, int modes, const FockCutoff& cutoff) {
  if (modes == 1) return static_cast<int>(index);
  return static_cast<int>(index / cutoff.dim() + index % cutoff.dim());
}

class PureState {
 public:
  /// Amplitudes over the Fock basis of one or two modes. Weight above the
  /// cutoff's total photon budget is rejected; no normalization is applied.
  PureState(CVector amplitudes, FockCutoff cutoff, int modes = 1);

  static PureState fock(int n, FockCutoff cutoff = FockCutoff());
  static PureState fock(int n1, int n2, FockCutoff cutoff = FockCutoff());

  PureState normalized() const;

  const CVector& amplitudes() const { return amplitudes_; }
  const FockCutoff& cutoff() const { return cutoff_; }
  int modes() const { return modes_; }
  double norm() const { return amplitudes_.norm(); }

  Complex operator()(int n) const { return amplitudes_(n); }
  Complex operator()(int n1, int n2) const {
    return amplitudes_(pair_index(n1, n2, cutoff_));
  }

 private:
  CVector amplitudes_;
  FockCutoff cutoff_;
  int modes_;
};

/// Validated density matrix on one or two truncated modes.
///
/// Construction checks Hermiticity (1e-12 entrywise), unit trace (1e-9),
/// positivity (smallest eigenvalue >= -1e-9), finiteness, and that no weight
/// sits above the cutoff's photon budget (1e-10). The stored matrix is the
/// Hermitian part of the input.
class DensityMatrix {
 public:
  DensityMatrix(CMatrix entries, FockCutoff cutoff, int modes = 1);

  /// Divides by the trace, then validates.
  static DensityMatrix normalize(CMatrix entries, FockCutoff cutoff, int modes = 1);
  static DensityMatrix from_pure(const PureState& state);
  /// Diagonal single-mode state with the given Fock weights.
  static DensityMatrix diagonal(std::span<const double> weights,
                                FockCutoff cutoff = FockCutoff());
  static DensityMatrix vacuum(FockCutoff cutoff = FockCutoff(), int modes = 1);

  DensityMatrix normalized() const { return normalize(entries_, cutoff_, modes_); }

  const CMatrix& entries() const { return entries_; }
  const FockCutoff& cutoff() const { return cutoff_; }
  int modes() const { return modes_; }
  Eigen::Index dim() const { return entries_.rows(); }
  Complex trace() const { return entries_.trace(); }
  Complex operator()(Eigen::Index r, Eigen::Index c) const { return entries_(r, c); }

 private:
  CMatrix entries_;
  FockCutoff cutoff_;
  int modes_;
};

// Expression-level helpers. These work on any Eigen dense expressions and
// perform no physical validation.

template <typename A, typename B>
auto kron(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return Eigen::kroneckerProduct(a.derived(), b.derived()).eval();
}

/// Traces out mode `traced` (1 or 2) of a square matrix on a d x d
/// Kronecker basis with mode 1 as the slow index.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> partial_trace(
    const Eigen::MatrixBase<Derived>& rho, Eigen::Index d, int traced) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
      Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      for (Eigen::Index t = 0; t < d; ++t) {
        out(i, j) += traced == 2 ? rho(i * d + t, j * d + t) : rho(t * d + i, t * d + j);
      }
    }
  }
  return out;
}

/// Phase rotation rho -> e^{-i theta n} rho e^{i theta n} of a single mode,
/// i.e. entry (n, k) picks up e^{-i (n-k) theta}. Expectation values of X in
/// the rotated matrix equal expectation values of X(theta) in the original.
template <typename Derived>
CMatrix rotate_phase(const Eigen::MatrixBase<Derived>& rho, double theta) {
  CMatrix out = rho;
  for (Eigen::Index n = 0; n < out.rows(); ++n) {
    for (Eigen::Index k = 0; k < out.cols(); ++k) {
      out(n, k) *= std::polar(1.0, -theta * static_cast<double>(n - k));
    }
  }
  return out;
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      if (std::abs(Complex(m(i, j)) - std::conj(Complex(m(j, i)))) > tol) return false;
    }
  }
  return true;
}

PureState tensor(const PureState& a, const PureState& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Reduces a two-mode state by tracing out mode `traced` (1 or 2).
DensityMatrix partial_trace(const DensityMatrix& rho, int traced);

RMatrix annihilation_matrix(FockCutoff cutoff);
/// X = (a + a^dagger) / sqrt(2); vacuum variance 1/2.
RMatrix x_matrix(FockCutoff cutoff);
/// P = (a - a^dagger) / (i sqrt(2)).
CMatrix p_matrix(FockCutoff cutoff);
/// Exact matrix elements of X^2 (not the square of the truncated X).
RMatrix x_squared_matrix(FockCutoff cutoff);
RMatrix number_matrix(FockCutoff cutoff);

/// Tr[rho O] for Hermitian O. Throws std::invalid_argument on a non-Hermitian
/// or non-finite operator, or if the trace has an imaginary part above 1e-9.
double expect(const CMatrix& rho, const CMatrix& op);
double expect(const DensityMatrix& rho, const CMatrix& op);
inline double expect(const CMatrix& rho, const RMatrix& op) {
  return expect(rho, CMatrix(op.cast<Complex>()));
}
inline double expect(const DensityMatrix& rho, const RMatrix& op) {
  return expect(rho.entries(), CMatrix(op.cast<Complex>()));
}

}  // namespace phom
