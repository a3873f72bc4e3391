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

#include "phom/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "phom/errors.hpp"
#include "phom/random.hpp"

namespace phom {
namespace {

// Integration never needs to reach further out than this for any state a
// validated cutoff admits in practice.
constexpr double kIntegrationReach = 12.0;

template <typename F>
double simpson(F&& f, double a, double b, double max_step) {
  if (!(b > a)) return 0.0;
  auto panels = static_cast<long>(std::ceil((b - a) / max_step));
  if (panels % 2 != 0) ++panels;
  panels = std::max(panels, 2L);
  const double h = (b - a) / static_cast<double>(panels);
  double acc = f(a) + f(b);
  for (long i = 1; i < panels; ++i) acc += (i % 2 == 0 ? 2.0 : 4.0) * f(a + h * static_cast<double>(i));
  return acc * h / 3.0;
}

// Acceptance set of a window as disjoint intervals, clipped to the reach.
std::vector<std::pair<double, double>> intervals(const ConditionWindow& w) {
  const double hi = std::min(w.upper(), kIntegrationReach);
  if (!w.symmetric_abs) {
    const double lo = std::max(w.lower(), -kIntegrationReach);
    if (!(hi > lo)) return {};
    return {{lo, hi}};
  }
  if (w.lower() <= 0.0) return {{-hi, hi}};
  if (!(hi > w.lower())) return {};
  return {{-hi, -w.lower()}, {w.lower(), hi}};
}

double sample_sd(std::span<const double> v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

CoincidenceTable apd_probabilities(const InterferenceState& state) {
  CoincidenceTable table;
  const FockCutoff& cutoff = state.measured.cutoff();
  const Eigen::Index d = cutoff.dim();
  for (const auto& branch : state.branches) {
    const CMatrix& rho = branch.component.entries();
    for (Eigen::Index ma = 0; ma < d; ++ma) {
      for (Eigen::Index mb = 0; mb < d; ++mb) {
        const Eigen::Index i = ma * d + mb;
        const double p = branch.weight * rho(i, i).real();
        if (p == 0.0) continue;
        const bool click_a = ma + branch.orthogonal_a > 0;
        const bool click_b = mb + branch.orthogonal_b > 0;
        if (click_a && click_b) {
          table.p11 += p;
        } else if (click_a) {
          table.p10 += p;
        } else if (click_b) {
          table.p01 += p;
        } else {
          table.p00 += p;
        }
      }
    }
  }
  return table;
}

double visibility(std::span<const double> p11_values) {
  if (p11_values.empty()) throw std::invalid_argument("visibility needs at least one value");
  for (double p : p11_values) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("coincidence probability outside [0, 1]: " + format_number(p));
    }
  }
  const auto [lo, hi] = std::minmax_element(p11_values.begin(), p11_values.end());
  if (*hi <= 0.0) throw NumericalError("visibility is undefined when every P11 is zero");
  return (*hi - *lo) / (*hi + *lo);
}

ConditionWindow ConditionWindow::from_range(double lo, double hi, bool symmetric_abs) {
  if (!(hi > lo)) throw std::invalid_argument("window upper bound must exceed the lower bound");
  return {(lo + hi) / 2.0, hi - lo, symmetric_abs, true, std::pair{lo, hi}};
}

bool ConditionWindow::contains(double x2) const {
  const double v = symmetric_abs ? std::abs(x2) : x2;
  return inclusive ? (v >= lower() && v <= upper()) : (v > lower() && v < upper());
}

void ConditionWindow::validate() const {
  if (!std::isfinite(center) || !std::isfinite(width)) {
    throw std::invalid_argument("window center and width must be finite");
  }
  if (!(width > 0.0)) throw std::invalid_argument("window width must be positive");
  if (symmetric_abs && center < 0.0) {
    throw std::invalid_argument("a window on |x2| needs a nonnegative center");
  }
}

double exact_conditional_second_moment(const DensityMatrix& state, double delta_theta, double x2) {
  const ConditionalKernel kernel(state, delta_theta);
  const double marginal = kernel.marginal(x2);
  if (!(marginal > 1e-12)) {
    throw NumericalError("conditioning on x2 = " + format_number(x2) + " with density " +
                         format_number(marginal));
  }
  return kernel.second_moment_weight(x2) / marginal;
}

WindowedMoments exact_window_moments(const DensityMatrix& state, double delta_theta,
                                     const ConditionWindow& window, double max_step) {
  window.validate();
  if (!(max_step > 0.0)) throw std::invalid_argument("integration step must be positive");
  const ConditionalKernel kernel(state, delta_theta);
  double mass = 0.0;
  double first = 0.0;
  double second = 0.0;
  for (const auto& [a, b] : intervals(window)) {
    mass += simpson([&](double x) { return kernel.marginal(x); }, a, b, max_step);
    first += simpson([&](double x) { return kernel.first_moment_weight(x); }, a, b, max_step);
    second += simpson([&](double x) { return kernel.second_moment_weight(x); }, a, b, max_step);
  }
  if (!(mass > 1e-12)) throw NumericalError("conditioning window has no probability mass");
  return {second / mass, first / mass, mass};
}

double exact_windowed_moment(const DensityMatrix& state, double delta_theta,
                             const ConditionWindow& window) {
  return exact_window_moments(state, delta_theta, window).second_moment;
}

WindowEstimate estimate_windowed_moment(std::span<const QuadratureSample> samples,
                                        const ConditionWindow& window) {
  if (samples.empty()) throw std::invalid_argument("no samples to estimate from");
  window.validate();
  double sum1 = 0.0;
  double sum2 = 0.0;
  std::size_t n = 0;
  for (const auto& s : samples) {
    if (!window.contains(s.x2)) continue;
    sum1 += s.x1;
    sum2 += s.x1 * s.x1;
    ++n;
  }
  if (n == 0) throw NumericalError("no samples fall in the conditioning window");
  const auto dn = static_cast<double>(n);
  return {sum2 / dn, sum1 / dn, n};
}

void BandOptions::validate() const {
  if (runs < 2) throw std::invalid_argument("confidence band needs at least 2 runs");
  if (!(k_sigma > 0.0)) throw std::invalid_argument("k_sigma must be positive");
}

Band confidence_band(double estimate, std::size_t n, const BandOptions& options) {
  options.validate();
  if (n < 2) throw std::invalid_argument("confidence band needs at least 2 samples");
  if (!(estimate >= 0.0) || !std::isfinite(estimate)) {
    throw std::invalid_argument("second-moment estimate must be finite and nonnegative");
  }
  std::mt19937_64 engine(options.seed);
  // A replica's second moment is estimate * (sum of n squared standard
  // normals) / n; that sum is drawn directly from its chi-square law.
  std::gamma_distribution<double> chi_square(static_cast<double>(n) / 2.0, 2.0);
  std::vector<double> replicas(options.runs);
  for (double& r : replicas) r = estimate * chi_square(engine) / static_cast<double>(n);
  const double sigma = sample_sd(replicas);
  return {estimate - options.k_sigma * sigma, estimate + options.k_sigma * sigma, sigma};
}

Band bootstrap_band(std::span<const double> squared_values, const BandOptions& options) {
  options.validate();
  const std::size_t n = squared_values.size();
  if (n < 2) throw std::invalid_argument("bootstrap band needs at least 2 values");
  double estimate = 0.0;
  for (double v : squared_values) estimate += v;
  estimate /= static_cast<double>(n);
  std::mt19937_64 engine(options.seed);
  std::vector<double> replicas(options.runs);
  for (double& r : replicas) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const auto pick = static_cast<std::size_t>(uniform01(engine) * static_cast<double>(n));
      acc += squared_values[std::min(pick, n - 1)];
    }
    r = acc / static_cast<double>(n);
  }
  const double sigma = sample_sd(replicas);
  return {estimate - options.k_sigma * sigma, estimate + options.k_sigma * sigma, sigma};
}

WitnessReport evaluate_witness(std::span<const QuadratureSample> samples,
                               const ConditionWindow& window, const BandOptions& options) {
  const WindowEstimate est = estimate_windowed_moment(samples, window);
  if (est.n_in_window < 2) {
    throw NumericalError("a confidence band needs at least 2 samples in the window");
  }
  Band band{};
  if (options.method == BandMethod::gaussian) {
    band = confidence_band(est.estimate, est.n_in_window, options);
  } else {
    std::vector<double> squares;
    squares.reserve(est.n_in_window);
    for (const auto& s : samples) {
      if (window.contains(s.x2)) squares.push_back(s.x1 * s.x1);
    }
    band = bootstrap_band(squares, options);
    // Report the band around the same estimate regardless of method.
    const double half = options.k_sigma * band.sigma;
    band = {est.estimate - half, est.estimate + half, band.sigma};
  }
  return {est.estimate, est.first_moment, est.n_in_window, band.lo, band.hi, window,
          band.hi < kVacuumMoment};
}

SweepResult optimize_window(std::span<const QuadratureSample> samples,
                            std::span<const double> deltas, std::span<const double> centers,
                            const SweepOptions& options) {
  if (samples.empty()) throw std::invalid_argument("window sweep needs samples");
  if (deltas.empty() || centers.empty()) throw std::invalid_argument("window sweep grids are empty");
  options.band.validate();
  const std::size_t min_count = std::max<std::size_t>(options.min_count, 2);

  SweepResult result;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    std::size_t skipped = 0;
    bool have = false;
    SweepRow row{};
    for (std::size_t j = 0; j < centers.size(); ++j) {
      const ConditionWindow window{centers[j], deltas[i], options.symmetric_abs, false};
      window.validate();
      std::size_t n = 0;
      double sum2 = 0.0;
      for (const auto& s : samples) {
        if (window.contains(s.x2)) {
          sum2 += s.x1 * s.x1;
          ++n;
        }
      }
      if (n < min_count) {
        ++skipped;
        continue;
      }
      const double estimate = sum2 / static_cast<double>(n);
      BandOptions band_options = options.band;
      band_options.seed = derive_seed(options.band.seed, i * centers.size() + j);
      band_options.method = BandMethod::gaussian;
      const Band band = confidence_band(estimate, n, band_options);
      if (!have || band.hi < row.band_hi) {
        const double min_estimate = have ? row.min_estimate : estimate;
        const double min_center = have ? row.min_estimate_center : centers[j];
        row = {deltas[i], centers[j], estimate, band.lo, band.hi, n, min_estimate, min_center};
      }
      if (estimate < row.min_estimate) {
        row.min_estimate = estimate;
        row.min_estimate_center = centers[j];
      }
      have = true;
    }
    if (skipped > 0) {
      result.diagnostics.push_back("delta " + format_number(deltas[i]) + ": skipped " +
                                   std::to_string(skipped) + " of " +
                                   std::to_string(centers.size()) + " windows with fewer than " +
                                   std::to_string(min_count) + " samples");
    }
    if (have) result.rows.push_back(row);
  }
  if (result.rows.empty()) throw NumericalError("every conditioning window in the sweep is empty");

  for (std::size_t r = 1; r < result.rows.size(); ++r) {
    const SweepRow& cand = result.rows[r];
    const SweepRow& best = result.rows[result.best];
    if (cand.band_hi < best.band_hi || (cand.band_hi == best.band_hi && cand.delta < best.delta)) {
      result.best = r;
    }
  }
  return result;
}

std::vector<double> linear_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !(stop >= start)) throw std::invalid_argument("invalid grid specification");
  std::vector<double> out;
  const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-6));
  for (long i = 0; i <= count; ++i) out.push_back(start + step * static_cast<double>(i));
  return out;
}

}  // namespace phom
