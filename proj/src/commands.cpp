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

#include "phom/commands.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "phom/errors.hpp"
#include "phom/random.hpp"
#include "phom/sample_io.hpp"

namespace phom {
namespace {

using nlohmann::json;

constexpr double kHistogramReach = 4.0;
constexpr double kHistogramBin = 0.2;

std::string num(double v) { return format_double(round_sig12(v) + 0.0); }

json window_json(const ConditionWindow& w) {
  return {{"lo", round_sig12(w.lower())},     {"hi", round_sig12(w.upper())},
          {"center", round_sig12(w.center)},  {"width", round_sig12(w.width)},
          {"symmetric_abs", w.symmetric_abs}, {"inclusive", w.inclusive}};
}

std::vector<double> accepted_x1(std::span<const QuadratureSample> samples,
                                const ConditionWindow& window) {
  std::vector<double> out;
  for (const auto& s : samples) {
    if (window.contains(s.x2)) out.push_back(s.x1);
  }
  return out;
}

struct Histogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;
  std::size_t underflow = 0;
  std::size_t overflow = 0;
};

Histogram histogram(std::span<const double> values) {
  const auto bins = static_cast<std::size_t>(std::lround(2.0 * kHistogramReach / kHistogramBin));
  Histogram h;
  for (std::size_t i = 0; i <= bins; ++i) {
    h.edges.push_back(-kHistogramReach + kHistogramBin * static_cast<double>(i));
  }
  h.counts.assign(bins, 0);
  for (double v : values) {
    if (v < -kHistogramReach) {
      ++h.underflow;
    } else if (v >= kHistogramReach) {
      ++h.overflow;
    } else {
      const auto i = static_cast<std::size_t>((v + kHistogramReach) / kHistogramBin);
      ++h.counts[std::min(i, bins - 1)];
    }
  }
  return h;
}

json moments_json(std::span<const QuadratureSample> samples, double QuadratureSample::*field) {
  double s1 = 0.0;
  double s2 = 0.0;
  for (const auto& s : samples) {
    s1 += s.*field;
    s2 += (s.*field) * (s.*field);
  }
  const auto n = static_cast<double>(samples.size());
  return {{"mean", round_sig12(s1 / n)}, {"second_moment", round_sig12(s2 / n)}};
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "invalid parameters: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

void emit(const std::optional<std::filesystem::path>& path, const std::string& text,
          std::ostream& out) {
  if (path) {
    write_file_atomic(*path, text);
  } else {
    out << text;
  }
}

std::vector<QuadratureSample> input_samples(const CommandOptions& options,
                                            const ExperimentConfig& config) {
  if (options.in) return read_samples_csv(*options.in);
  return simulate_samples(config);
}

}  // namespace

ExperimentConfig resolve_config(const CommandOptions& options) {
  ExperimentConfig config = options.config ? load_config(*options.config) : ExperimentConfig{};
  if (options.seed) config.seed = *options.seed;
  if (options.window) {
    try {
      ConditionWindow w = ConditionWindow::from_range(options.window->first, options.window->second);
      w.validate();
      config.windows = {w};
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("--window: ") + e.what());
    }
  }
  if (options.delta) {
    if (!(*options.delta > 0.0)) throw ConfigError("--delta: must be positive");
    config.sweep_deltas = {*options.delta};
    config.curve_delta = *options.delta;
  }
  return config;
}

DensityMatrix simulated_state(const ExperimentConfig& config) {
  return interfere(config.source, FockCutoff(config.cutoff), InterfereOptions{config.dephase})
      .measured;
}

std::vector<QuadratureSample> simulate_samples(const ExperimentConfig& config) {
  return sample(simulated_state(config), config.homodyne_setting(), config.n_samples, config.seed);
}

json build_report(std::span<const QuadratureSample> samples, const ExperimentConfig& config) {
  if (samples.empty()) throw DataError("no samples to analyze");
  json windows = json::array();
  json diagnostics = json::array();
  bool any_violated = false;
  bool any_evaluated = false;
  for (std::size_t i = 0; i < config.windows.size(); ++i) {
    const ConditionWindow& window = config.windows[i];
    const std::vector<double> x1 = accepted_x1(samples, window);
    json entry{{"window", window_json(window)}, {"n_in_window", x1.size()}};
    if (x1.size() < 2) {
      entry["skipped"] = "fewer than 2 samples in window";
      diagnostics.push_back("window " + std::to_string(i) + ": only " + std::to_string(x1.size()) +
                            " samples, skipped");
      windows.push_back(entry);
      continue;
    }
    BandOptions band = config.band;
    band.seed = derive_seed(config.seed, i);
    const WitnessReport report = evaluate_witness(samples, window, band);
    const double spread = std::sqrt(std::max(report.variance(), 0.0) /
                                     static_cast<double>(report.n_in_window));
    const Histogram hist = histogram(x1);
    entry["estimate"] = round_sig12(report.estimate);
    entry["first_moment"] = round_sig12(report.first_moment);
    entry["variance"] = round_sig12(report.variance());
    entry["mean_significant"] = std::abs(report.first_moment) > 3.0 * spread;
    entry["band_lo"] = round_sig12(report.band_lo);
    entry["band_hi"] = round_sig12(report.band_hi);
    entry["k_sigma"] = round_sig12(band.k_sigma);
    entry["runs"] = band.runs;
    entry["band_method"] = band.method == BandMethod::gaussian ? "gaussian" : "bootstrap";
    entry["violated"] = report.violated;
    json edges = json::array();
    for (double e : hist.edges) edges.push_back(round_sig12(e));
    entry["histogram"] = {{"edges", edges},
                          {"counts", hist.counts},
                          {"underflow", hist.underflow},
                          {"overflow", hist.overflow}};
    windows.push_back(entry);
    any_violated = any_violated || report.violated;
    any_evaluated = true;
  }
  if (!any_evaluated) throw NumericalError("no conditioning window holds enough samples");
  return {{"config_hash", config.hash()},
          {"seed", config.seed},
          {"n_samples", samples.size()},
          {"moments", {{"x1", moments_json(samples, &QuadratureSample::x1)},
                       {"x2", moments_json(samples, &QuadratureSample::x2)}}},
          {"windows", windows},
          {"diagnostics", diagnostics},
          {"witness_violated", any_violated},
          {"verdict", std::string("witness violated: ") + (any_violated ? "yes" : "no")}};
}

SweepResult run_window_sweep(std::span<const QuadratureSample> samples,
                             const ExperimentConfig& config) {
  SweepOptions options = config.sweep_options();
  options.band.seed = config.seed;
  return optimize_window(samples, config.sweep_deltas, config.sweep_centers, options);
}

int cmd_simulate(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig config = resolve_config(options);
    if (!options.out) throw ConfigError("simulate needs --out for the sample file");
    const DensityMatrix state = simulated_state(config);
    const double delta_theta = config.resolved_delta_theta();
    const std::vector<QuadratureSample> samples =
        sample(state, config.homodyne_setting(), config.n_samples, config.seed);
    write_file_atomic(*options.out, format_samples_csv(samples));

    std::ostringstream s;
    s << "config_hash " << config.hash() << '\n';
    s << "seed " << config.seed << '\n';
    s << "delta_theta " << num(delta_theta) << '\n';
    s << "measured diagonal (n1,n2) probability\n";
    const FockCutoff& cutoff = state.cutoff();
    for (int n1 = 0; n1 <= cutoff.n_max(); ++n1) {
      for (int n2 = 0; n1 + n2 <= cutoff.n_max(); ++n2) {
        const double p = state(pair_index(n1, n2, cutoff), pair_index(n1, n2, cutoff)).real();
        if (p > 1e-15) s << "  (" << n1 << "," << n2 << ") " << num(p) << '\n';
      }
    }
    for (const auto& window : config.windows) {
      const WindowedMoments exact = exact_window_moments(state, delta_theta, window);
      s << "window " << (window.symmetric_abs ? "|x2|" : "x2") << " in [" << num(window.lower())
        << ", " << num(window.upper()) << "]: probability " << num(exact.probability)
        << ", exact E[x1^2] " << num(exact.second_moment) << ", exact E[x1] "
        << num(exact.first_moment) << '\n';
    }
    s << "wrote " << samples.size() << " samples to " << options.out->string() << '\n';
    out << s.str();
    return static_cast<int>(kExitOk);
  });
}

int cmd_analyze(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig config = resolve_config(options);
    if (!options.in) throw ConfigError("analyze needs --in with a sample file");
    const std::vector<QuadratureSample> samples = read_samples_csv(*options.in);
    const json report = build_report(samples, config);
    for (const auto& d : report["diagnostics"]) err << "note: " << d.get<std::string>() << '\n';

    if (options.plots) {
      std::ostringstream hist;
      hist << "window,bin_lo,bin_hi,count,density\n";
      for (std::size_t i = 0; i < report["windows"].size(); ++i) {
        const json& w = report["windows"][i];
        if (!w.contains("histogram")) continue;
        const auto& edges = w["histogram"]["edges"];
        const auto& counts = w["histogram"]["counts"];
        const double n = w["n_in_window"].get<double>();
        for (std::size_t b = 0; b < counts.size(); ++b) {
          const double c = counts[b].get<double>();
          hist << i << ',' << num(edges[b].get<double>()) << ',' << num(edges[b + 1].get<double>())
               << ',' << c << ',' << num(c / (n * kHistogramBin)) << '\n';
        }
      }
      std::ostringstream curve;
      curve << "x2,estimate,band_lo,band_hi,n_in_window\n";
      for (std::size_t j = 0; j < config.sweep_centers.size(); ++j) {
        const ConditionWindow window{config.sweep_centers[j], config.curve_delta, true, false};
        if (accepted_x1(samples, window).size() < 2) continue;
        BandOptions band = config.band;
        band.seed = derive_seed(config.seed, 1000 + j);
        const WitnessReport r = evaluate_witness(samples, window, band);
        curve << num(window.center) << ',' << num(r.estimate) << ',' << num(r.band_lo) << ','
              << num(r.band_hi) << ',' << r.n_in_window << '\n';
      }
      std::filesystem::path hist_path = *options.plots;
      hist_path += "_histogram.csv";
      std::filesystem::path curve_path = *options.plots;
      curve_path += "_curve.csv";
      write_file_atomic(hist_path, hist.str());
      write_file_atomic(curve_path, curve.str());
    }

    emit(options.out, report.dump(2) + "\n", out);
    out << report["verdict"].get<std::string>() << '\n';
    return static_cast<int>(kExitOk);
  });
}

int cmd_hom(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig config = resolve_config(options);
    if (config.hom_overlaps.empty()) throw ConfigError("hom needs at least one overlap value");
    std::ostringstream csv;
    csv << "xi,p00,p01,p10,p11\n";
    std::vector<double> p11;
    for (double xi : config.hom_overlaps) {
      if (!(xi >= 0.0 && xi <= 1.0)) throw ConfigError("overlap " + num(xi) + " outside [0, 1]");
      SourceModel source = config.source;
      source.overlap = xi;
      const CoincidenceTable t =
          apd_probabilities(interfere(source, FockCutoff(config.cutoff), {config.dephase}));
      csv << num(xi) << ',' << num(t.p00) << ',' << num(t.p01) << ',' << num(t.p10) << ','
          << num(t.p11) << '\n';
      p11.push_back(t.p11);
    }
    const double v = visibility(p11);
    emit(options.out, csv.str(), out);
    out << "visibility " << num(v) << '\n';
    return static_cast<int>(kExitOk);
  });
}

int cmd_sweep(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig config = resolve_config(options);
    const std::vector<QuadratureSample> samples = input_samples(options, config);
    const SweepResult result = run_window_sweep(samples, config);
    for (const auto& d : result.diagnostics) err << "note: " << d << '\n';
    std::ostringstream csv;
    csv << "delta,best_x2,e_min,band_lo,band_hi,n_in_window,min_estimate,min_estimate_x2\n";
    for (const auto& r : result.rows) {
      csv << num(r.delta) << ',' << num(r.best_center) << ',' << num(r.estimate) << ','
          << num(r.band_lo) << ',' << num(r.band_hi) << ',' << r.n_in_window << ','
          << num(r.min_estimate) << ',' << num(r.min_estimate_center) << '\n';
    }
    emit(options.out, csv.str(), out);
    const SweepRow& best = result.best_row();
    out << "selected delta " << num(best.delta) << " (x2 " << num(best.best_center) << ", E "
        << num(best.estimate) << ", band_hi " << num(best.band_hi) << ")\n";
    return static_cast<int>(kExitOk);
  });
}

}  // namespace phom
