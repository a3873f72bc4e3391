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

#include "phom/sample_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <system_error>

#include "phom/errors.hpp"

namespace phom {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_field(std::string_view text, double& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(out);
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

double round_sig12(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.11e", v);
  return std::strtod(buf, nullptr);
}

std::string format_samples_csv(std::span<const QuadratureSample> samples) {
  std::string out = "x1,x2\n";
  out.reserve(out.size() + samples.size() * 44);
  for (const auto& s : samples) {
    out += format_double(s.x1);
    out += ',';
    out += format_double(s.x2);
    out += '\n';
  }
  return out;
}

std::vector<QuadratureSample> parse_samples_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<QuadratureSample> out;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    if (!header_seen) {
      if (text != "x1,x2") {
        throw DataError("line " + std::to_string(line_no) + ": expected header 'x1,x2'");
      }
      header_seen = true;
      continue;
    }
    const auto comma = text.find(',');
    QuadratureSample s{};
    if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos ||
        !parse_field(text.substr(0, comma), s.x1) || !parse_field(text.substr(comma + 1), s.x2)) {
      throw DataError("line " + std::to_string(line_no) + ": malformed record '" +
                      std::string(text) + "'");
    }
    out.push_back(s);
  }
  if (!header_seen) throw DataError("sample file is empty");
  if (out.empty()) throw DataError("sample file has a header but no records");
  return out;
}

std::vector<QuadratureSample> read_samples_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open sample file " + path.string());
  return parse_samples_csv(in);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << contents;
    out.flush();
    if (!out) {
      out.close();
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw DataError("failed while writing " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw DataError("cannot move output into place at " + path.string());
  }
}

}  // namespace phom
