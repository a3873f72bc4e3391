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
#include <span>
#include <string>
#include <vector>

#include "phom/homodyne.hpp"

namespace phom {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Rounds to 12 significant digits for reports.
double round_sig12(double v);

/// Sample records as CSV: header `x1,x2`, one record per line.
std::string format_samples_csv(std::span<const QuadratureSample> samples);

/// Throws DataError naming the offending line for malformed input, and for
/// input without any record.
std::vector<QuadratureSample> parse_samples_csv(std::istream& in);
std::vector<QuadratureSample> read_samples_csv(const std::filesystem::path& path);

/// Writes through a sibling temporary file and renames it into place, so a
/// failed write never leaves a partial file at `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace phom
