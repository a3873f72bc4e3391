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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "phom/analysis.hpp"
#include "phom/homodyne.hpp"
#include "phom/optics.hpp"
#include "phom/random.hpp"

namespace {

using namespace phom;
using std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

SourceModel photons(double eta, double overlap, double phase = 0.0) {
  const auto arm = PhotonDistribution::imperfect_single(eta);
  return {arm, arm, overlap, BeamSplitter{0.5, phase}};
}

template <typename F>
double simpson(F f, double lo, double hi, int intervals) {
  const double h = (hi - lo) / intervals;
  double s = f(lo) + f(hi);
  for (int i = 1; i < intervals; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

Outcome criterion1() {
  const FockCutoff c;
  double worst = 0.0;
  for (double phi : {0.0, pi / 3.0, pi}) {
    const CVector out = beamsplitter_matrix(0.5, phi, c) * PureState::fock(1, 1, c).amplitudes();
    CVector expected = CVector::Zero(out.size());
    expected(pair_index(2, 0, c)) = 1.0 / std::sqrt(2.0);
    expected(pair_index(0, 2, c)) = -std::polar(1.0, phi) / std::sqrt(2.0);
    worst = std::max(worst, (out - expected).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-12, fmt("max amplitude error %.2e", worst)};
}

Outcome criterion2() {
  double worst = 0.0;
  std::vector<double> p11;
  for (double xi : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double p = apd_probabilities(interfere(photons(1.0, xi))).p11;
    worst = std::max(worst, std::abs(p - (1.0 - xi * xi) / 2.0));
  }
  const double p_match = apd_probabilities(interfere(photons(1.0, 1.0))).p11;
  const double p_dist = apd_probabilities(interfere(photons(1.0, 0.0))).p11;
  const std::vector<double> ends{p_match, p_dist};
  const double v = visibility(ends);
  const std::vector<double> lossy{apd_probabilities(interfere(photons(0.8, 1.0))).p11,
                                  apd_probabilities(interfere(photons(0.8, 0.0))).p11};
  const double v_lossy = visibility(lossy);
  const bool ok = std::abs(p_match) <= 1e-12 && std::abs(p_dist - 0.5) <= 1e-12 && worst <= 1e-10 &&
                  std::abs(v - 1.0) <= 1e-12 && std::abs(v_lossy - 1.0) <= 1e-9;
  return {ok, fmt("P11(1)=%.1e P11(0)=%.12f max|P11-(1-xi^2)/2|=%.1e V=%.12f V(eta=0.8)=%.12f", p_match,
                  p_dist, worst, v, v_lossy)};
}

Outcome criterion3() {
  double worst = 0.0;
  const DensityMatrix s = ideal_hom_state(0.0);
  for (int i = 0; i < 50; ++i) {
    const double x2 = -3.0 + 6.0 * i / 49.0;
    const double r = (2.0 * x2 * x2 - 1.0) / std::sqrt(2.0);
    const double oracle = (2.5 - std::sqrt(2.0) * r + r * r / 2.0) / (1.0 + r * r);
    worst = std::max(worst, std::abs(exact_conditional_second_moment(s, 0.0, x2) - oracle));
  }
  const ConditionalKernel k(s, 0.0);
  double best = 1e9;
  double best_x = 0.0;
  for (double x = 0.0; x <= 3.0; x += 1e-4) {
    const double e = k.second_moment_weight(x) / k.marginal(x);
    if (e < best) {
      best = e;
      best_x = x;
    }
  }
  const bool ok = worst <= 1e-6 && std::abs(best - 0.2753) <= 1e-3 && std::abs(best_x - 1.651) <= 1e-3;
  return {ok, fmt("max oracle error %.1e, minimum %.5f at x2 = %.4f", worst, best, best_x)};
}

Outcome criterion4() {
  const auto coherent = PhotonDistribution::poisson(1.0, 12);
  const DensityMatrix mixture = distinguishable_mixture();
  const DensityMatrix coherent_out =
      interfere(SourceModel{coherent, coherent, 1.0, {}}, FockCutoff(24)).measured;
  double lowest = 1e9;
  for (const DensityMatrix* s : {&mixture, &coherent_out}) {
    for (double dtheta : {0.0, pi / 4.0, pi / 2.0}) {
      const ConditionalKernel k(*s, dtheta);
      for (double x2 = -3.0; x2 <= 3.0 + 1e-9; x2 += 0.02) {
        lowest = std::min(lowest, k.second_moment_weight(x2) / k.marginal(x2));
      }
    }
  }
  return {lowest >= 0.5 - 1e-9, fmt("lowest conditional moment %.12f", lowest)};
}

// Shared by criteria 5 and 6.
struct ReferenceRun {
  DensityMatrix state = interfere(photons(0.64, 1.0)).measured;
  std::vector<QuadratureSample> samples = sample(state, HomodyneSetting{}, 12000, 1);
};

Outcome criterion5(const ReferenceRun& run) {
  const ConditionWindow window = ConditionWindow::from_range(1.9, 2.5);
  const WindowedMoments exact = exact_window_moments(run.state, 0.0, window);
  const WitnessReport r = evaluate_witness(run.samples, window, BandOptions{1000, 3.0, 1});
  const double expected_n = 12000.0 * exact.probability;
  const double sd_n = std::sqrt(12000.0 * exact.probability * (1.0 - exact.probability));
  const bool ok = r.estimate < 0.5 && r.band_lo <= exact.second_moment &&
                  exact.second_moment <= r.band_hi &&
                  std::abs(static_cast<double>(r.n_in_window) - expected_n) <= 3.0 * sd_n;
  return {ok, fmt("E=%.4f band [%.4f, %.4f] exact %.4f; n=%zu expected %.1f +- %.1f", r.estimate,
                  r.band_lo, r.band_hi, exact.second_moment, r.n_in_window, expected_n, sd_n)};
}

Outcome criterion6(const ReferenceRun& run) {
  const std::vector<double> deltas = linear_grid(0.1, 2.0, 0.1);
  const std::vector<double> centers = linear_grid(0.0, 3.0, 0.05);
  SweepOptions options;
  options.band.seed = 1;
  const SweepResult sweep = optimize_window(run.samples, deltas, centers, options);
  const SweepRow& best = sweep.best_row();
  const bool interior = best.band_hi < sweep.rows.front().band_hi && best.band_hi < sweep.rows.back().band_hi;
  const bool in_range = best.delta >= 0.3 - 1e-9 && best.delta <= 1.2 + 1e-9;

  double m2 = 0.0;
  for (const auto& s : run.samples) m2 += s.x1 * s.x1;
  m2 /= static_cast<double>(run.samples.size());
  const std::vector<double> huge{12.0};
  const double far = optimize_window(run.samples, huge, centers, options).rows.front().estimate;
  const bool approaches = std::abs(sweep.rows.back().min_estimate - m2) <
                              std::abs(sweep.rows.front().min_estimate - m2) &&
                          std::abs(far - m2) <= 1e-12;
  return {interior && in_range && approaches,
          fmt("delta*=%.2f band_hi=%.4f (endpoints %.4f, %.4f) interior=%d in_range=%d; "
              "E_min(12)=%.6f unconditioned=%.6f",
              best.delta, best.band_hi, sweep.rows.front().band_hi, sweep.rows.back().band_hi, interior,
              in_range, far, m2)};
}

Outcome criterion7() {
  const DensityMatrix state = interfere(photons(0.64, 1.0)).measured;
  const ConditionWindow window = ConditionWindow::from_range(1.9, 2.5);
  const double exact = exact_windowed_moment(state, 0.0, window);
  int covered = 0;
  const int reps = 200;
  for (int r = 0; r < reps; ++r) {
    const auto xs = sample(state, HomodyneSetting{}, 12000, derive_seed(2026, r));
    const WitnessReport w = evaluate_witness(xs, window, BandOptions{1000, 3.0, derive_seed(7, r)});
    if (w.band_lo <= exact && exact <= w.band_hi) ++covered;
  }
  const double coverage = static_cast<double>(covered) / reps;

  const double v = 0.5;
  const std::size_t n = 1000;
  const Band b = confidence_band(v, n, BandOptions{1000, 3.0, 5});
  const double analytic = 3.0 * v * std::sqrt(2.0 / n);
  const double rel = std::abs((b.hi - b.lo) / 2.0 - analytic) / analytic;
  return {coverage >= 0.99 && rel <= 0.10,
          fmt("coverage %d/%d; half-width %.5f vs analytic %.5f (%.1f%%)", covered, reps,
              (b.hi - b.lo) / 2.0, analytic, 100.0 * rel)};
}

struct Fidelity {
  double worst_z = 0.0;
  double p_value = 1.0;
};

Fidelity sampler_fidelity(const DensityMatrix& state, double dtheta, std::uint64_t seed) {
  constexpr std::size_t n = 100000;
  const auto xs = sample(state, HomodyneSetting{dtheta}, n, seed);
  Fidelity f;

  const std::function<double(double)> marginals[2] = {
      [&](double x) { return marginal_density_x1(state, dtheta, x); },
      [&](double x) { return marginal_density_x2(state, x); }};
  for (int axis = 0; axis < 2; ++axis) {
    double exact[9];
    for (int k = 0; k <= 8; ++k) {
      exact[k] = simpson([&](double x) { return std::pow(x, k) * marginals[axis](x); }, -10.0, 10.0, 4000);
    }
    for (int k = 1; k <= 4; ++k) {
      double m = 0.0;
      for (const auto& s : xs) m += std::pow(axis == 0 ? s.x1 : s.x2, k);
      m /= static_cast<double>(n);
      const double sd = std::sqrt((exact[2 * k] - exact[k] * exact[k]) / n);
      f.worst_z = std::max(f.worst_z, std::abs(m - exact[k]) / sd);
    }
  }

  constexpr int bins = 40;
  constexpr double reach = 4.0;
  constexpr double w = 2.0 * reach / bins;
  std::vector<double> observed(bins * bins + 1, 0.0);
  for (const auto& s : xs) {
    const int i = static_cast<int>(std::floor((s.x1 + reach) / w));
    const int j = static_cast<int>(std::floor((s.x2 + reach) / w));
    const bool inside = i >= 0 && i < bins && j >= 0 && j < bins;
    observed[inside ? i * bins + j : bins * bins] += 1.0;
  }
  std::vector<double> expected(bins * bins + 1, 0.0);
  double total = 0.0;
  for (int i = 0; i < bins; ++i) {
    for (int j = 0; j < bins; ++j) {
      const double x1_lo = -reach + i * w;
      const double x2_lo = -reach + j * w;
      const double p = simpson(
          [&](double x1) {
            return simpson([&](double x2) { return joint_density(state, dtheta, x1, x2); }, x2_lo,
                           x2_lo + w, 4);
          },
          x1_lo, x1_lo + w, 4);
      expected[i * bins + j] = n * p;
      total += p;
    }
  }
  expected[bins * bins] = n * std::max(1.0 - total, 0.0);

  double chi2 = 0.0;
  int cells = 0;
  double pooled_obs = 0.0;
  double pooled_exp = 0.0;
  for (std::size_t c = 0; c < expected.size(); ++c) {
    if (expected[c] < 5.0) {
      pooled_obs += observed[c];
      pooled_exp += expected[c];
      continue;
    }
    chi2 += std::pow(observed[c] - expected[c], 2) / expected[c];
    ++cells;
  }
  if (pooled_exp > 0.0) {
    chi2 += std::pow(pooled_obs - pooled_exp, 2) / pooled_exp;
    ++cells;
  }
  const boost::math::chi_squared dist(cells - 1);
  f.p_value = boost::math::cdf(boost::math::complement(dist, chi2));
  return f;
}

Outcome criterion8() {
  const Fidelity vac = sampler_fidelity(DensityMatrix::vacuum(FockCutoff(), 2), 0.0, 101);
  const Fidelity ideal = sampler_fidelity(ideal_hom_state(0.0), 0.0, 102);
  const Fidelity dist = sampler_fidelity(interfere(photons(1.0, 0.0)).measured, 0.0, 103);
  const double z = std::max({vac.worst_z, ideal.worst_z, dist.worst_z});
  const double p = std::min({vac.p_value, ideal.p_value, dist.p_value});
  return {z <= 5.0 && p >= 0.001,
          fmt("worst moment z %.2f; chi-square p (vacuum, ideal, xi=0) = %.3f, %.3f, %.3f", z,
              vac.p_value, ideal.p_value, dist.p_value)};
}

Outcome criterion9() {
  double worst = 0.0;
  std::string found;
  for (double phi : {0.0, pi / 2.0, pi}) {
    const DensityMatrix s = ideal_hom_state(phi);
    double best = 1e9;
    double best_theta = 0.0;
    for (int i = 0; i < 629; ++i) {
      const double dtheta = -pi + 0.01 * i;
      const ConditionalKernel k(s, dtheta);
      double lowest = 1e9;
      for (double x2 = 0.0; x2 <= 3.0; x2 += 0.01) {
        lowest = std::min(lowest, k.second_moment_weight(x2) / k.marginal(x2));
      }
      if (lowest < best) {
        best = lowest;
        best_theta = dtheta;
      }
    }
    // The state is invariant under a pi rotation of the measured quadrature.
    const double miss = std::abs(std::remainder(best_theta + phi / 2.0, pi));
    worst = std::max(worst, miss);
    found += fmt(" phi=%.3f->%.2f", phi, best_theta);
  }
  return {worst <= 0.02, fmt("max |dtheta* + phi/2| mod pi = %.3f;%s", worst, found.c_str())};
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  int failures = 0;
  const auto run = [&](int id, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    const bool in_time = budget_s <= 0.0 || secs <= budget_s;
    const bool pass = o.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("criterion %d: %s  %s  [%.2f s%s]\n", id, pass ? "PASS" : "FAIL", o.detail.c_str(), secs,
                in_time ? "" : ", over budget");
    std::fflush(stdout);
  };

  run(1, 1.0, criterion1);
  run(2, 0.0, criterion2);
  run(3, 5.0, criterion3);
  run(4, 0.0, criterion4);
  const auto t0 = clock::now();
  const ReferenceRun reference;
  const double sim_secs = std::chrono::duration<double>(clock::now() - t0).count();
  run(5, 60.0 - sim_secs, [&] { return criterion5(reference); });
  run(6, 120.0 - sim_secs, [&] { return criterion6(reference); });
  run(7, 0.0, criterion7);
  run(8, 0.0, criterion8);
  run(9, 0.0, criterion9);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
