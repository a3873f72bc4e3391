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

#include <vector>

#include "phom/fock.hpp"

namespace phom {

/// Photon-number distribution of one source arm: probabilities[n] = p_n.
class PhotonDistribution {
 public:
  /// Weights must be nonnegative and sum to 1 within 1e-12.
  explicit PhotonDistribution(std::vector<double> probabilities);

  /// eta |1><1| + (1 - eta) |0><0|.
  static PhotonDistribution imperfect_single(double eta);
  static PhotonDistribution fock(int n);
  /// Poissonian statistics of a phase-randomized coherent state, truncated
  /// at `max_n` photons. Throws if the discarded tail exceeds 1e-10.
  static PhotonDistribution poisson(double mean, int max_n);

  const std::vector<double>& probabilities() const { return p_; }
  double operator[](int n) const { return n < static_cast<int>(p_.size()) ? p_[n] : 0.0; }
  /// Largest n with nonzero weight.
  int max_photons() const;
  double mean() const;

 private:
  std::vector<double> p_;
};

/// Beam-splitter map on creation operators:
///   a^dag -> sqrt(T) a^dag + sqrt(1-T) e^{i phi/2} b^dag
///   b^dag -> sqrt(1-T) a^dag - sqrt(T) e^{i phi/2} b^dag
/// At T = 1/2 this sends |1,1> to (|2,0> - e^{i phi} |0,2>) / sqrt(2).
struct BeamSplitter {
  double transmittance = 0.5;
  double phase = 0.0;

  void validate() const;
};

struct SourceModel {
  PhotonDistribution arm1 = PhotonDistribution::fock(1);
  PhotonDistribution arm2 = PhotonDistribution::fock(1);
  /// Internal-mode overlap of the arm-2 photon with the arm-1 (homodyne
  /// matched) mode; 1 means indistinguishable.
  double overlap = 1.0;
  BeamSplitter splitter;

  void validate() const;
};

/// One term of the output decomposition, indexed by how many photons left
/// in the orthogonal internal mode through each spatial output arm.
struct InterferenceBranch {
  double weight;
  DensityMatrix component;  // normalized two-mode state of the matched mode
  int orthogonal_a;
  int orthogonal_b;
};

struct InterferenceState {
  /// Two-mode state seen by the narrowband homodyne detectors.
  DensityMatrix measured;
  /// Branch bookkeeping for broadband photon counting.
  std::vector<InterferenceBranch> branches;
};

struct InterfereOptions {
  /// Phase-randomize both arms before interference. Only disable this to
  /// demonstrate witness false positives.
  bool dephase = true;
};

/// Zeroes all Fock off-diagonals of a single-mode state.
DensityMatrix dephase(const DensityMatrix& rho);

DensityMatrix make_arm_state(const PhotonDistribution& dist, FockCutoff cutoff = FockCutoff());

/// Two-mode Fock-space matrix of the beam splitter on the (n1, n2) Kronecker
/// basis. Exact on total photon number <= n_max; identity on the blocks above
/// the cutoff's photon budget, which no valid state occupies.
CMatrix beamsplitter_matrix(double transmittance, double phase, FockCutoff cutoff = FockCutoff());

/// Kraus operator of the matched-mode map for an arm whose photons overlap
/// the reference internal mode with amplitude `overlap`: `lost` photons go to
/// the orthogonal internal mode.
RMatrix overlap_kraus(double overlap, int lost, FockCutoff cutoff);

InterferenceState interfere(const SourceModel& source, FockCutoff cutoff = FockCutoff(),
                            InterfereOptions options = {});

/// General form taking arbitrary single-mode arm states.
InterferenceState interfere(const DensityMatrix& arm1, const DensityMatrix& arm2, double overlap,
                            const BeamSplitter& splitter, InterfereOptions options = {});

/// (|2,0> - e^{i phi}|0,2>)/sqrt(2) as a density matrix.
DensityMatrix ideal_hom_state(double phase, FockCutoff cutoff = FockCutoff());

/// (|2,0><2,0| + |0,2><0,2|)/2, the incoherent counterpart.
DensityMatrix distinguishable_mixture(FockCutoff cutoff = FockCutoff());

}  // namespace phom
