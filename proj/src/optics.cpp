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

#include "phom/optics.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace phom {
namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

double factorial(int n) { return std::tgamma(n + 1.0); }

// std::pow on complex bases goes through log, which breaks 0^0.
Complex ipow(Complex base, int exponent) {
  Complex out = 1.0;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

void check_unit_interval(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1], got " + std::to_string(v));
  }
}

// Largest photon number with support in a single-mode state.
int support(const DensityMatrix& rho) {
  int top = 0;
  for (Eigen::Index n = 0; n < rho.dim(); ++n) {
    if (std::abs(rho(n, n)) > 1e-15) top = static_cast<int>(n);
  }
  return top;
}

}  // namespace

PhotonDistribution::PhotonDistribution(std::vector<double> probabilities)
    : p_(std::move(probabilities)) {
  if (p_.empty()) throw std::invalid_argument("photon distribution is empty");
  for (double p : p_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument("photon probabilities must be finite and nonnegative");
    }
  }
  const double total = std::accumulate(p_.begin(), p_.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("photon probabilities sum to " + std::to_string(total) +
                                ", expected 1");
  }
}

PhotonDistribution PhotonDistribution::imperfect_single(double eta) {
  check_unit_interval(eta, "single-photon fraction");
  return PhotonDistribution({1.0 - eta, eta});
}

PhotonDistribution PhotonDistribution::fock(int n) {
  if (n < 0) throw std::invalid_argument("negative photon number");
  std::vector<double> p(n + 1, 0.0);
  p[n] = 1.0;
  return PhotonDistribution(std::move(p));
}

PhotonDistribution PhotonDistribution::poisson(double mean, int max_n) {
  if (!(mean >= 0.0) || max_n < 0) throw std::invalid_argument("invalid Poisson parameters");
  std::vector<double> p(max_n + 1);
  double term = std::exp(-mean);
  double kept = 0.0;
  for (int n = 0; n <= max_n; ++n) {
    p[n] = term;
    kept += term;
    term *= mean / (n + 1);
  }
  if (1.0 - kept > 1e-10) {
    throw std::invalid_argument("Poisson tail above " + std::to_string(max_n) +
                                " photons exceeds 1e-10; raise the truncation");
  }
  for (double& v : p) v /= kept;
  return PhotonDistribution(std::move(p));
}

int PhotonDistribution::max_photons() const {
  int top = 0;
  for (std::size_t n = 0; n < p_.size(); ++n) {
    if (p_[n] > 0.0) top = static_cast<int>(n);
  }
  return top;
}

double PhotonDistribution::mean() const {
  double m = 0.0;
  for (std::size_t n = 0; n < p_.size(); ++n) m += static_cast<double>(n) * p_[n];
  return m;
}

void BeamSplitter::validate() const {
  check_unit_interval(transmittance, "beam-splitter transmittance");
  if (!std::isfinite(phase)) throw std::invalid_argument("beam-splitter phase must be finite");
}

void SourceModel::validate() const {
  check_unit_interval(overlap, "internal-mode overlap");
  splitter.validate();
}

DensityMatrix dephase(const DensityMatrix& rho) {
  if (rho.modes() != 1) throw std::invalid_argument("dephase expects a single-mode state");
  CMatrix diag = rho.entries().diagonal().asDiagonal();
  return DensityMatrix(std::move(diag), rho.cutoff(), 1);
}

DensityMatrix make_arm_state(const PhotonDistribution& dist, FockCutoff cutoff) {
  if (dist.max_photons() > cutoff.n_max()) {
    throw std::invalid_argument("arm distribution exceeds the Fock cutoff");
  }
  std::vector<double> w(cutoff.dim(), 0.0);
  for (int n = 0; n <= dist.max_photons(); ++n) w[n] = dist[n];
  return DensityMatrix::diagonal(w, cutoff);
}

CMatrix beamsplitter_matrix(double transmittance, double phase, FockCutoff cutoff) {
  BeamSplitter{transmittance, phase}.validate();
  const int n_max = cutoff.n_max();
  const Eigen::Index d2 = cutoff.dim(2);
  const Complex e = std::polar(1.0, phase / 2.0);
  const double t = std::sqrt(transmittance);
  const double r = std::sqrt(1.0 - transmittance);
  // a^dag -> alpha a^dag + beta b^dag, b^dag -> gamma a^dag + delta b^dag
  const Complex alpha = t, beta = r * e, gamma = r, delta = -t * e;

  CMatrix u = CMatrix::Identity(d2, d2);
  for (int n1 = 0; n1 <= n_max; ++n1) {
    for (int n2 = 0; n1 + n2 <= n_max; ++n2) {
      const Eigen::Index col = pair_index(n1, n2, cutoff);
      u.col(col).setZero();
      const int total = n1 + n2;
      const double norm_in = std::sqrt(factorial(n1) * factorial(n2));
      for (int i = 0; i <= n1; ++i) {
        for (int j = 0; j <= n2; ++j) {
          // a^dag power collected from the expansion
          const int p = i + j;
          const Complex c = binomial(n1, i) * ipow(alpha, i) * ipow(beta, n1 - i) *
                            binomial(n2, j) * ipow(gamma, j) * ipow(delta, n2 - j);
          const double norm_out = std::sqrt(factorial(p) * factorial(total - p));
          u(pair_index(p, total - p, cutoff), col) += c * norm_out / norm_in;
        }
      }
    }
  }
  return u;
}

RMatrix overlap_kraus(double overlap, int lost, FockCutoff cutoff) {
  check_unit_interval(overlap, "internal-mode overlap");
  const Eigen::Index d = cutoff.dim();
  const double kept_amp = overlap;
  const double lost_amp = std::sqrt(std::max(0.0, 1.0 - overlap * overlap));
  RMatrix k = RMatrix::Zero(d, d);
  for (int n = lost; n < d; ++n) {
    k(n - lost, n) = std::sqrt(binomial(n, lost)) * std::pow(kept_amp, n - lost) *
                     std::pow(lost_amp, lost);
  }
  return k;
}

InterferenceState interfere(const SourceModel& source, FockCutoff cutoff,
                            InterfereOptions options) {
  source.validate();
  return interfere(make_arm_state(source.arm1, cutoff), make_arm_state(source.arm2, cutoff),
                   source.overlap, source.splitter, options);
}

InterferenceState interfere(const DensityMatrix& arm1_in, const DensityMatrix& arm2_in,
                            double overlap, const BeamSplitter& splitter,
                            InterfereOptions options) {
  if (arm1_in.modes() != 1 || arm2_in.modes() != 1) {
    throw std::invalid_argument("interfere expects single-mode arm states");
  }
  if (!(arm1_in.cutoff() == arm2_in.cutoff())) {
    throw std::invalid_argument("interfere: arm cutoffs differ");
  }
  check_unit_interval(overlap, "internal-mode overlap");
  splitter.validate();

  const FockCutoff cutoff = arm1_in.cutoff();
  const DensityMatrix arm1 = options.dephase ? dephase(arm1_in) : arm1_in;
  const DensityMatrix arm2 = options.dephase ? dephase(arm2_in) : arm2_in;
  const int n1_max = support(arm1);
  const int n2_max = support(arm2);
  if (n1_max + n2_max > cutoff.n_max()) {
    throw std::invalid_argument("Fock cutoff " + std::to_string(cutoff.n_max()) +
                                " is too small for " + std::to_string(n1_max + n2_max) +
                                " input photons");
  }

  const CMatrix u = beamsplitter_matrix(splitter.transmittance, splitter.phase, cutoff);
  const double t = splitter.transmittance;
  const Eigen::Index d2 = cutoff.dim(2);

  CMatrix measured = CMatrix::Zero(d2, d2);
  std::vector<InterferenceBranch> branches;
  for (int lost = 0; lost <= n2_max; ++lost) {
    const RMatrix k = overlap_kraus(overlap, lost, cutoff);
    const CMatrix arm2_kept = k.cast<Complex>() * arm2.entries() * k.transpose().cast<Complex>();
    const double p_lost = arm2_kept.trace().real();
    if (p_lost <= 0.0) continue;
    const CMatrix out = u * kron(arm1.entries(), arm2_kept) * u.adjoint();
    measured += out;
    const DensityMatrix component = DensityMatrix::normalize(out, cutoff, 2);
    // Orthogonal photons enter through input b and split binomially.
    for (int in_a = 0; in_a <= lost; ++in_a) {
      const double split =
          binomial(lost, in_a) * std::pow(1.0 - t, in_a) * std::pow(t, lost - in_a);
      if (split <= 0.0) continue;
      branches.push_back({p_lost * split, component, in_a, lost - in_a});
    }
  }
  return {DensityMatrix(std::move(measured), cutoff, 2), std::move(branches)};
}

DensityMatrix ideal_hom_state(double phase, FockCutoff cutoff) {
  CVector v = CVector::Zero(cutoff.dim(2));
  v(pair_index(2, 0, cutoff)) = 1.0 / std::sqrt(2.0);
  v(pair_index(0, 2, cutoff)) = -std::polar(1.0, phase) / std::sqrt(2.0);
  return DensityMatrix::from_pure(PureState(std::move(v), cutoff, 2));
}

DensityMatrix distinguishable_mixture(FockCutoff cutoff) {
  CMatrix m = CMatrix::Zero(cutoff.dim(2), cutoff.dim(2));
  m(pair_index(2, 0, cutoff), pair_index(2, 0, cutoff)) = 0.5;
  m(pair_index(0, 2, cutoff), pair_index(0, 2, cutoff)) = 0.5;
  return DensityMatrix(std::move(m), cutoff, 2);
}

}  // namespace phom
