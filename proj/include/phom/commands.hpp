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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>

#include <json.hpp>

#include "phom/config.hpp"

namespace phom {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitData = 3,
  kExitNumerical = 4,
};

struct CommandOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> in;
  std::optional<std::filesystem::path> out;
  /// Prefix for plot-ready CSV files.
  std::optional<std::filesystem::path> plots;
  std::optional<std::uint64_t> seed;
  /// Closed window lo <= |x2| <= hi replacing the configured windows.
  std::optional<std::pair<double, double>> window;
  std::optional<double> delta;
};

/// Loads the config named in `options` (or defaults) and applies the
/// command-line overrides.
ExperimentConfig resolve_config(const CommandOptions& options);

/// Measured-mode state of the configured source.
DensityMatrix simulated_state(const ExperimentConfig& config);
std::vector<QuadratureSample> simulate_samples(const ExperimentConfig& config);

/// JSON report of the witness analysis for `samples`. Band replicas for
/// window i are seeded from derive_seed(config.seed, i).
nlohmann::json build_report(std::span<const QuadratureSample> samples,
                            const ExperimentConfig& config);

SweepResult run_window_sweep(std::span<const QuadratureSample> samples,
                             const ExperimentConfig& config);

// Subcommands. Each returns an ExitCode and never throws; diagnostics go to
// `err`, summaries to `out`.
int cmd_simulate(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_analyze(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_hom(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_sweep(const CommandOptions& options, std::ostream& out, std::ostream& err);

}  // namespace phom
