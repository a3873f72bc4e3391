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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "phom/commands.hpp"

namespace {

void add_common(CLI::App* cmd, phom::CommandOptions& o, std::string& window) {
  cmd->add_option_function<std::string>(
      "--config", [&o](const std::string& p) { o.config = p; }, "JSON config file");
  cmd->add_option_function<std::uint64_t>(
      "--seed", [&o](std::uint64_t s) { o.seed = s; }, "RNG seed override");
  cmd->add_option("--window", window, "Conditioning window LO,HI on |x2|");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homodyne witness of non-Gaussian two-photon interference"};
  app.require_subcommand(1);
  phom::CommandOptions o;
  std::string window;

  auto* simulate = app.add_subcommand("simulate", "Sample quadrature pairs");
  add_common(simulate, o, window);
  simulate->add_option_function<std::string>(
      "--out", [&o](const std::string& p) { o.out = p; }, "Output CSV");

  auto* analyze = app.add_subcommand("analyze", "Evaluate the witness on samples");
  add_common(analyze, o, window);
  analyze->add_option_function<std::string>(
      "--in", [&o](const std::string& p) { o.in = p; }, "Sample CSV");
  analyze->add_option_function<std::string>(
      "--out", [&o](const std::string& p) { o.out = p; }, "Report JSON");
  analyze->add_option_function<std::string>(
      "--plots", [&o](const std::string& p) { o.plots = p; }, "Prefix for plot CSVs");
  analyze->add_option_function<double>(
      "--delta", [&o](double d) { o.delta = d; }, "Window width for the curve");

  auto* hom = app.add_subcommand("hom", "Coincidence dip versus overlap");
  add_common(hom, o, window);
  hom->add_option_function<std::string>(
      "--out", [&o](const std::string& p) { o.out = p; }, "Output CSV");

  auto* sweep = app.add_subcommand("sweep", "Optimize the conditioning window");
  add_common(sweep, o, window);
  sweep->add_option_function<std::string>(
      "--in", [&o](const std::string& p) { o.in = p; }, "Sample CSV; simulated if absent");
  sweep->add_option_function<std::string>(
      "--out", [&o](const std::string& p) { o.out = p; }, "Output CSV");
  sweep->add_option_function<double>(
      "--delta", [&o](double d) { o.delta = d; }, "Single window width");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : phom::kExitConfig;
  }

  if (!window.empty()) {
    const auto comma = window.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument("missing comma");
      o.window = {std::stod(window.substr(0, comma)), std::stod(window.substr(comma + 1))};
    } catch (const std::exception&) {
      std::cerr << "config error: --window expects LO,HI\n";
      return phom::kExitConfig;
    }
  }

  if (simulate->parsed()) return phom::cmd_simulate(o, std::cout, std::cerr);
  if (analyze->parsed()) return phom::cmd_analyze(o, std::cout, std::cerr);
  if (hom->parsed()) return phom::cmd_hom(o, std::cout, std::cerr);
  return phom::cmd_sweep(o, std::cout, std::cerr);
}
