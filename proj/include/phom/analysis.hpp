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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "phom/fock.hpp"
#include "phom/homodyne.hpp"
#include "phom/optics.hpp"

namespace phom {

/// Quadrature second moment of the vacuum; the witness threshold.
inline constexpr double kVacuumMoment = 0.5;

// ---------------------------------------------------------------------------
// Photon counting

struct CoincidenceTable {
  double p00 = 0.0;
  double p01 = 0.0;
  double p10 = 0.0;
  double p11 = 0.0;

  double sum() const { return p00 + p01 + p10 + p11; }
};

/// On/off detection of both spatial outputs. An arm clicks when it holds at
/// least one photon in either internal mode.
CoincidenceTable apd_probabilities(const InterferenceState& state);

/// (max - min) / (max + min) over a delay sweep of coincidence probabilities.
/// Throws std::invalid_argument for an empty list or values outside [0, 1],
/// and NumericalError when every value is zero.
double visibility(std::span<const double> p11_values);

// ---------------------------------------------------------------------------
// Conditioning windows and the squeezing witness

/// Post-selection set for the conditioning quadrature x2:
///   symmetric_abs: center - width/2 < |x2| < center + width/2
///   otherwise:     center - width/2 <  x2  < center + width/2
/// `inclusive` closes both ends. A negative lower edge in the symmetric case
/// leaves only the upper constraint.
struct ConditionWindow {
  double center = 2.2;
  double width = 0.6;
  bool symmetric_abs = true;
  bool inclusive = false;
  /// Exact edges when built from a range; center +- width/2 would round them.
  std::optional<std::pair<double, double>> edges;

  /// Closed window lo <= |x2| <= hi.
  static ConditionWindow from_range(double lo, double hi, bool symmetric_abs = true);

  double lower() const { return edges ? edges->first : center - width / 2.0; }
  double upper() const { return edges ? edges->second : center + width / 2.0; }
  bool contains(double x2) const;
  void validate() const;
};

/// E[X1^2(delta_theta) | X2(0) = x2] evaluated exactly from the state.
/// Throws NumericalError when the marginal density at x2 is below 1e-12.
double exact_conditional_second_moment(const DensityMatrix& state, double delta_theta, double x2);

struct WindowedMoments {
  double second_moment;
  double first_moment;
  /// Probability that x2 falls in the window.
  double probability;
};

/// Window-averaged conditional moments by composite Simpson integration of
/// the conditional kernel over the acceptance set, with panels no wider than
/// `max_step`. Throws NumericalError on an empty window.
WindowedMoments exact_window_moments(const DensityMatrix& state, double delta_theta,
                                     const ConditionWindow& window, double max_step = 1e-3);

double exact_windowed_moment(const DensityMatrix& state, double delta_theta,
                             const ConditionWindow& window);

struct WindowEstimate {
  /// Noncentral second moment of x1 over the accepted records.
  double estimate;
  double first_moment;
  std::size_t n_in_window;

  double variance() const { return estimate - first_moment * first_moment; }
};

/// Throws std::invalid_argument on empty input and NumericalError when no
/// record lands in the window.
WindowEstimate estimate_windowed_moment(std::span<const QuadratureSample> samples,
                                        const ConditionWindow& window);

// ---------------------------------------------------------------------------
// Confidence bands

enum class BandMethod {
  /// Replicas of n zero-mean Gaussian draws with the estimated second moment.
  gaussian,
  /// Resampling the accepted records with replacement.
  bootstrap,
};

struct BandOptions {
  int runs = 1000;
  double k_sigma = 3.0;
  std::uint64_t seed = 0;
  BandMethod method = BandMethod::gaussian;

  void validate() const;
};

struct Band {
  double lo;
  double hi;
  /// Standard deviation of the replica estimates.
  double sigma;
};

/// Gaussian Monte Carlo band: estimate +/- k_sigma times the spread of the
/// second-moment estimator over `runs` synthetic data sets of size n.
Band confidence_band(double estimate, std::size_t n, const BandOptions& options = {});

/// Nonparametric band from resampling the squared values themselves.
Band bootstrap_band(std::span<const double> squared_values, const BandOptions& options = {});

struct WitnessReport {
  double estimate;
  double first_moment;
  std::size_t n_in_window;
  double band_lo;
  double band_hi;
  ConditionWindow window;
  /// band_hi < 1/2.
  bool violated;

  double variance() const { return estimate - first_moment * first_moment; }
};

WitnessReport evaluate_witness(std::span<const QuadratureSample> samples,
                               const ConditionWindow& window, const BandOptions& options = {});

// ---------------------------------------------------------------------------
// Window-width optimization

struct SweepOptions {
  BandOptions band;
  /// Windows with fewer accepted records are skipped: the Gaussian band
  /// scales with the estimate and collapses on a handful of small values.
  std::size_t min_count = 30;
  bool symmetric_abs = true;
};

struct SweepRow {
  double delta;
  /// Center minimizing the upper band edge for this width.
  double best_center;
  double estimate;
  double band_lo;
  double band_hi;
  std::size_t n_in_window;
  /// Smallest estimate over all admissible centers, and where it occurred.
  double min_estimate;
  double min_estimate_center;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::size_t best = 0;
  std::vector<std::string> diagnostics;

  const SweepRow& best_row() const { return rows.at(best); }
};

/// For each width, scans window centers and keeps the one with the lowest
/// upper band edge; the selected width minimizes that edge, ties going to
/// the smaller width. Band replicas for cell (i, j) are seeded from
/// derive_seed(options.band.seed, i * centers.size() + j).
SweepResult optimize_window(std::span<const QuadratureSample> samples,
                            std::span<const double> deltas, std::span<const double> centers,
                            const SweepOptions& options = {});

/// start, start + step, ... up to and including stop (within step/1e6).
std::vector<double> linear_grid(double start, double stop, double step);

}  // namespace phom
