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

#include "phom/config.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <iterator>

#include "phom/errors.hpp"

namespace phom {
namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed) known = known || item.key() == key;
    if (!known) throw ConfigError(where + ": unknown key '" + item.key() + "'");
  }
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

std::uint64_t count(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) {
    throw ConfigError(where + ": expected a nonnegative integer");
  }
  return j.get<std::uint64_t>();
}

std::vector<double> number_list(const json& j, const std::string& where) {
  if (j.is_object()) {
    require_object(j, where, {"start", "stop", "step"});
    if (!j.contains("start") || !j.contains("stop") || !j.contains("step")) {
      throw ConfigError(where + ": a range needs start, stop and step");
    }
    try {
      return linear_grid(number(j["start"], where + ".start"), number(j["stop"], where + ".stop"),
                         number(j["step"], where + ".step"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a nonempty list or range");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

PhotonDistribution parse_arm(const json& j, const std::string& where) {
  require_object(j, where, {"eta", "p", "poisson", "max_n"});
  const int forms = static_cast<int>(j.contains("eta")) + static_cast<int>(j.contains("p")) +
                    static_cast<int>(j.contains("poisson"));
  if (forms != 1) throw ConfigError(where + ": give exactly one of 'eta', 'p', 'poisson'");
  if (j.contains("max_n") && !j.contains("poisson")) {
    throw ConfigError(where + ": 'max_n' only applies to 'poisson'");
  }
  try {
    if (j.contains("eta")) return PhotonDistribution::imperfect_single(number(j["eta"], where + ".eta"));
    if (j.contains("p")) return PhotonDistribution(number_list(j["p"], where + ".p"));
    const int max_n = j.contains("max_n") ? static_cast<int>(count(j["max_n"], where + ".max_n")) : 12;
    return PhotonDistribution::poisson(number(j["poisson"], where + ".poisson"), max_n);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

json arm_json(const PhotonDistribution& d) { return json{{"p", d.probabilities()}}; }

ConditionWindow parse_window(const json& j, const std::string& where) {
  require_object(j, where, {"lo", "hi", "center", "width", "symmetric_abs"});
  const bool symmetric = !j.contains("symmetric_abs") || j["symmetric_abs"].get<bool>();
  ConditionWindow w;
  try {
    if (j.contains("lo") || j.contains("hi")) {
      if (!j.contains("lo") || !j.contains("hi") || j.contains("center") || j.contains("width")) {
        throw ConfigError(where + ": give either lo/hi or center/width");
      }
      w = ConditionWindow::from_range(number(j["lo"], where + ".lo"), number(j["hi"], where + ".hi"),
                                      symmetric);
    } else {
      if (!j.contains("center") || !j.contains("width")) {
        throw ConfigError(where + ": give either lo/hi or center/width");
      }
      w = ConditionWindow{number(j["center"], where + ".center"),
                          number(j["width"], where + ".width"), symmetric, false};
    }
    w.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return w;
}

json window_json(const ConditionWindow& w) {
  if (w.edges) {
    return json{{"lo", w.edges->first}, {"hi", w.edges->second}, {"symmetric_abs", w.symmetric_abs}};
  }
  return json{{"center", w.center},
              {"width", w.width},
              {"symmetric_abs", w.symmetric_abs},
              {"inclusive", w.inclusive}};
}

}  // namespace

double ExperimentConfig::resolved_delta_theta() const {
  return delta_theta ? *delta_theta : -source.splitter.phase / 2.0;
}

HomodyneSetting ExperimentConfig::homodyne_setting() const {
  return {resolved_delta_theta(), grid_range, grid_step};
}

SweepOptions ExperimentConfig::sweep_options() const {
  SweepOptions options;
  options.band = band;
  options.min_count = sweep_min_count;
  return options;
}

json ExperimentConfig::to_json() const {
  json windows_json = json::array();
  for (const auto& w : windows) windows_json.push_back(window_json(w));
  json j;
  j["source"] = {{"arm1", arm_json(source.arm1)},
                 {"arm2", arm_json(source.arm2)},
                 {"overlap", source.overlap},
                 {"transmittance", source.splitter.transmittance},
                 {"phase", source.splitter.phase},
                 {"dephase", dephase}};
  j["delta_theta"] = delta_theta ? json(*delta_theta) : json("sq");
  j["n_samples"] = n_samples;
  j["seed"] = seed;
  j["cutoff"] = cutoff;
  j["grid"] = {{"range", grid_range}, {"step", grid_step}};
  j["windows"] = windows_json;
  j["sweep"] = {{"deltas", sweep_deltas}, {"centers", sweep_centers}, {"min_count", sweep_min_count}};
  j["band"] = {{"runs", band.runs},
               {"k_sigma", band.k_sigma},
               {"method", band.method == BandMethod::gaussian ? "gaussian" : "bootstrap"}};
  j["hom"] = {{"overlaps", hom_overlaps}};
  j["curve"] = {{"delta", curve_delta}};
  return j;
}

std::string ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_json().dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig parse_config(const json& doc) {
  ExperimentConfig c;
  if (doc.is_null()) return c;
  require_object(doc, "config",
                 {"source", "delta_theta", "n_samples", "seed", "cutoff", "grid", "windows", "sweep",
                  "band", "hom", "curve"});
  try {
    if (doc.contains("source")) {
      const json& s = doc["source"];
      require_object(s, "source", {"arm1", "arm2", "overlap", "transmittance", "phase", "dephase"});
      if (s.contains("arm1")) c.source.arm1 = parse_arm(s["arm1"], "source.arm1");
      if (s.contains("arm2")) c.source.arm2 = parse_arm(s["arm2"], "source.arm2");
      if (s.contains("overlap")) c.source.overlap = number(s["overlap"], "source.overlap");
      if (s.contains("transmittance")) {
        c.source.splitter.transmittance = number(s["transmittance"], "source.transmittance");
      }
      if (s.contains("phase")) c.source.splitter.phase = number(s["phase"], "source.phase");
      if (s.contains("dephase")) c.dephase = s["dephase"].get<bool>();
      try {
        c.source.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("source: ") + e.what());
      }
    }
    if (doc.contains("delta_theta")) {
      const json& d = doc["delta_theta"];
      if (d.is_string()) {
        if (d.get<std::string>() != "sq") throw ConfigError("delta_theta: expected a number or \"sq\"");
      } else {
        c.delta_theta = number(d, "delta_theta");
      }
    }
    if (doc.contains("n_samples")) {
      c.n_samples = count(doc["n_samples"], "n_samples");
      if (c.n_samples < 1) throw ConfigError("n_samples: must be at least 1");
    }
    if (doc.contains("seed")) c.seed = count(doc["seed"], "seed");
    if (doc.contains("cutoff")) {
      c.cutoff = static_cast<int>(count(doc["cutoff"], "cutoff"));
      if (c.cutoff < 2) throw ConfigError("cutoff: must be at least 2");
    }
    if (doc.contains("grid")) {
      const json& g = doc["grid"];
      require_object(g, "grid", {"range", "step"});
      if (g.contains("range")) c.grid_range = number(g["range"], "grid.range");
      if (g.contains("step")) c.grid_step = number(g["step"], "grid.step");
      try {
        c.homodyne_setting().validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("grid: ") + e.what());
      }
    }
    if (doc.contains("windows")) {
      const json& w = doc["windows"];
      if (!w.is_array() || w.empty()) throw ConfigError("windows: expected a nonempty list");
      c.windows.clear();
      for (std::size_t i = 0; i < w.size(); ++i) {
        c.windows.push_back(parse_window(w[i], "windows[" + std::to_string(i) + "]"));
      }
    }
    if (doc.contains("sweep")) {
      const json& s = doc["sweep"];
      require_object(s, "sweep", {"deltas", "centers", "min_count"});
      if (s.contains("deltas")) c.sweep_deltas = number_list(s["deltas"], "sweep.deltas");
      if (s.contains("centers")) c.sweep_centers = number_list(s["centers"], "sweep.centers");
      if (s.contains("min_count")) c.sweep_min_count = count(s["min_count"], "sweep.min_count");
      for (double d : c.sweep_deltas) {
        if (!(d > 0.0)) throw ConfigError("sweep.deltas: widths must be positive");
      }
      for (double x : c.sweep_centers) {
        if (!(x >= 0.0)) throw ConfigError("sweep.centers: centers must be nonnegative");
      }
    }
    if (doc.contains("band")) {
      const json& b = doc["band"];
      require_object(b, "band", {"runs", "k_sigma", "method"});
      if (b.contains("runs")) c.band.runs = static_cast<int>(count(b["runs"], "band.runs"));
      if (b.contains("k_sigma")) c.band.k_sigma = number(b["k_sigma"], "band.k_sigma");
      if (b.contains("method")) {
        const std::string m = b["method"].get<std::string>();
        if (m == "gaussian") {
          c.band.method = BandMethod::gaussian;
        } else if (m == "bootstrap") {
          c.band.method = BandMethod::bootstrap;
        } else {
          throw ConfigError("band.method: expected \"gaussian\" or \"bootstrap\"");
        }
      }
      try {
        c.band.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("band: ") + e.what());
      }
    }
    if (doc.contains("hom")) {
      const json& h = doc["hom"];
      require_object(h, "hom", {"overlaps"});
      if (h.contains("overlaps")) c.hom_overlaps = number_list(h["overlaps"], "hom.overlaps");
      for (double x : c.hom_overlaps) {
        if (!(x >= 0.0 && x <= 1.0)) throw ConfigError("hom.overlaps: values must lie in [0, 1]");
      }
    }
    if (doc.contains("curve")) {
      const json& cv = doc["curve"];
      require_object(cv, "curve", {"delta"});
      if (cv.contains("delta")) c.curve_delta = number(cv["delta"], "curve.delta");
      if (!(c.curve_delta > 0.0)) throw ConfigError("curve.delta: must be positive");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  try {
    const FockCutoff cutoff(c.cutoff);
    if (c.source.arm1.max_photons() + c.source.arm2.max_photons() > cutoff.n_max()) {
      throw ConfigError("cutoff " + std::to_string(c.cutoff) + " is too small for the arm states");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("cutoff: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return ExperimentConfig{};
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

}  // namespace phom
