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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "phom/analysis.hpp"
#include "phom/optics.hpp"

namespace phom {

/// Everything a run needs. Defaults follow the experiment being emulated:
/// 12,000 records, imperfect photons with p1 = 0.64 in both arms, a balanced
/// splitter, the squeezing angle, the window 1.9 <= |x2| <= 2.5, and
/// 1,000-replica 3-sigma bands.
struct ExperimentConfig {
  SourceModel source{PhotonDistribution::imperfect_single(0.64),
                     PhotonDistribution::imperfect_single(0.64), 1.0, BeamSplitter{}};
  bool dephase = true;
  /// Unset means "sq": -phase / 2.
  std::optional<double> delta_theta;
  std::size_t n_samples = 12000;
  std::uint64_t seed = 1;
  int cutoff = FockCutoff::kDefault;
  double grid_range = 6.0;
  double grid_step = 0.01;
  std::vector<ConditionWindow> windows{ConditionWindow::from_range(1.9, 2.5)};
  std::vector<double> sweep_deltas = linear_grid(0.1, 2.0, 0.1);
  std::vector<double> sweep_centers = linear_grid(0.0, 3.0, 0.05);
  std::size_t sweep_min_count = 30;
  BandOptions band;
  std::vector<double> hom_overlaps{1.0, 0.0};
  /// Window width for the conditional-moment curve emitted by `analyze`.
  double curve_delta = 0.6;

  double resolved_delta_theta() const;
  HomodyneSetting homodyne_setting() const;
  SweepOptions sweep_options() const;

  /// Canonical form with every default filled in.
  nlohmann::json to_json() const;
  /// FNV-1a of the canonical form, as 16 hex digits.
  std::string hash() const;
};

/// Throws ConfigError on unknown keys, wrong types, or invalid values.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace phom
