/******************************************************************************
 * Copyright 2026 The EcoDrive Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#include "ecodrive/route_spat.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace ecodrive {

namespace {

double CycleLocal(const SignalTiming& s, double t) {
  double tau = std::fmod(t + s.offset, s.cycle);
  if (tau < 0.0) tau += s.cycle;
  return tau;
}

bool InWindow(const SignalTiming& s, double tau) {
  for (const auto& w : s.green) {
    if (tau >= w.start && tau < w.end) return true;
  }
  return false;
}

}  // namespace

void SignalTiming::Validate(const std::string& id) const {
  const std::string where = "signals." + id;
  if (!(cycle > 0.0)) throw ConfigError(where + ".cycle_s must be > 0");
  if (green.empty()) throw ConfigError(where + ".green needs at least one window");
  std::vector<GreenWindow> sorted = green;
  std::sort(sorted.begin(), sorted.end(),
            [](const GreenWindow& a, const GreenWindow& b) { return a.start < b.start; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& w = sorted[i];
    if (!(w.start >= 0.0 && w.end <= cycle && w.start < w.end)) {
      throw ConfigError(where + ".green window outside [0, cycle) or empty");
    }
    if (i > 0 && w.start < sorted[i - 1].end) {
      throw ConfigError(where + ".green windows overlap");
    }
  }
}

void SpatSchedule::Add(const std::string& id, SignalTiming timing) {
  timing.Validate(id);
  signals_[id] = std::move(timing);
}

const SignalTiming& SpatSchedule::Timing(const std::string& id) const {
  const auto it = signals_.find(id);
  if (it == signals_.end()) throw std::out_of_range("unknown signal id '" + id + "'");
  return it->second;
}

Phase SpatSchedule::PhaseAt(const std::string& id, double t) const {
  const SignalTiming& s = Timing(id);
  return InWindow(s, CycleLocal(s, t)) ? Phase::kGreen : Phase::kRed;
}

double SpatSchedule::NextGreenStart(const std::string& id, double t) const {
  const SignalTiming& s = Timing(id);
  const double tau = CycleLocal(s, t);
  if (InWindow(s, tau)) {
    throw std::logic_error("NextGreenStart called while signal '" + id + "' is green");
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& w : s.green) {
    double delta = w.start - tau;
    if (delta <= 0.0) delta += s.cycle;
    best = std::min(best, delta);
  }
  double next = t + best;
  // Guard against rounding that lands a hair before the window opens.
  for (int i = 0; i < 8 && PhaseAt(id, next) != Phase::kGreen; ++i) {
    next = std::nextafter(next, std::numeric_limits<double>::infinity());
  }
  return next;
}

NodeKind Route::Kind(std::size_t node) const {
  if (traffic_lights.count(node) != 0) return NodeKind::kTrafficLight;
  if (stop_signs.count(node) != 0) return NodeKind::kStopSign;
  return NodeKind::kPlain;
}

const std::string* Route::SignalAt(std::size_t node) const {
  const auto it = traffic_lights.find(node);
  return it == traffic_lights.end() ? nullptr : &it->second;
}

void Route::Validate(const SpatSchedule& spat) const {
  if (!(step > 0.0)) throw ConfigError("step_m must be > 0");
  const std::size_t n = v_max.size();
  if (n == 0) throw ConfigError("route needs at least one node");
  if (v_min.size() != n) throw ConfigError("v_min_mps length differs from v_max_mps");
  if (grade.size() != n) throw ConfigError("grade_rad length differs from node count");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(v_min[i] >= 0.0 && v_min[i] < v_max[i])) {
      throw ConfigError("v_min_mps/v_max_mps invalid at node " + std::to_string(i) +
                        " (need 0 <= v_min < v_max)");
    }
  }
  for (const auto& [node, id] : traffic_lights) {
    if (node >= n) {
      throw ConfigError("traffic_lights: node " + std::to_string(node) + " outside route");
    }
    if (!spat.Contains(id)) {
      throw ConfigError("traffic_lights: unknown signal id '" + id + "' at node " +
                        std::to_string(node));
    }
  }
  for (std::size_t node : stop_signs) {
    if (node >= n) {
      throw ConfigError("stop_signs: node " + std::to_string(node) + " outside route");
    }
    if (traffic_lights.count(node) != 0) {
      throw ConfigError("stop_signs: node " + std::to_string(node) + " also has a signal");
    }
  }
  if (!(accel_min < 0.0 && accel_max > 0.0)) {
    throw ConfigError("accel_min_mps2 < 0 < accel_max_mps2 violated");
  }
  if (!(stop_dwell >= 0.0)) throw ConfigError("stop_dwell_s must be >= 0");
}

Phase PhaseAtNode(std::size_t node, double t, const Route& route, const SpatSchedule& spat) {
  const std::string* id = route.SignalAt(node);
  return id == nullptr ? Phase::kGreen : spat.PhaseAt(*id, t);
}

GreenIndicator IndicatorVector(std::size_t node, double t_s, double t_f, double dt,
                               const Route& route, const SpatSchedule& spat) {
  if (node >= route.node_count()) throw std::invalid_argument("node outside route");
  if (!(dt > 0.0 && t_f > 0.0)) throw std::invalid_argument("t_f and dt must be > 0");
  const double ratio = t_f / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("t_f / dt must be integral");
  }
  GreenIndicator ind;
  ind.base = t_s;
  ind.sample_period = dt;
  ind.values.resize(static_cast<std::size_t>(rounded));
  for (std::size_t z = 1; z <= ind.values.size(); ++z) {
    ind.values[z - 1] =
        PhaseAtNode(node, ind.SampleTime(z), route, spat) == Phase::kGreen ? 1 : 0;
  }
  return ind;
}

std::vector<double> FeasibleTimeSet(std::size_t node, double t_s, double t_f, double dt,
                                    const Route& route, const SpatSchedule& spat) {
  const GreenIndicator ind = IndicatorVector(node, t_s, t_f, dt, route, spat);
  std::vector<double> out;
  for (std::size_t z = 1; z <= ind.values.size(); ++z) {
    if (ind.values[z - 1] == 1) out.push_back(ind.SampleTime(z));
  }
  return out;
}

double SnapHorizonBase(double t_s, double dt) { return dt * std::floor(t_s / dt) - dt; }

namespace {

using nlohmann::json;

template <typename T>
T Require(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key)) throw ConfigError(ctx + key + ": missing");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(ctx + key + ": " + e.what());
  }
}

}  // namespace

RouteBundle ParseRoute(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("route: malformed JSON: ") + e.what());
  }
  RouteBundle b;
  Route& r = b.route;
  r.name = doc.value("name", std::string("route"));
  r.step = Require<double>(doc, "step_m", "route.");
  r.v_max = Require<std::vector<double>>(doc, "v_max_mps", "route.");
  r.v_min = doc.contains("v_min_mps") ? Require<std::vector<double>>(doc, "v_min_mps", "route.")
                                      : std::vector<double>(r.v_max.size(), 0.0);
  r.grade = doc.contains("grade_rad") ? Require<std::vector<double>>(doc, "grade_rad", "route.")
                                      : std::vector<double>(r.v_max.size(), 0.0);
  if (doc.contains("node_count") &&
      doc["node_count"].get<std::size_t>() != r.v_max.size()) {
    throw ConfigError("route.node_count disagrees with v_max_mps length");
  }
  r.accel_min = doc.value("accel_min_mps2", r.accel_min);
  r.accel_max = doc.value("accel_max_mps2", r.accel_max);
  r.stop_dwell = doc.value("stop_dwell_s", r.stop_dwell);

  if (doc.contains("signals")) {
    for (const auto& [id, s] : doc["signals"].items()) {
      const std::string ctx = "route.signals." + id + ".";
      SignalTiming t;
      t.cycle = Require<double>(s, "cycle_s", ctx);
      t.offset = s.value("offset_s", 0.0);
      for (const auto& w : Require<std::vector<std::vector<double>>>(s, "green", ctx)) {
        if (w.size() != 2) throw ConfigError(ctx + "green: windows are [start, end) pairs");
        t.green.push_back({w[0], w[1]});
      }
      try {
        b.spat.Add(id, std::move(t));
      } catch (const ConfigError& e) {
        throw ConfigError(std::string("route.") + e.what());
      }
    }
  }
  if (doc.contains("traffic_lights")) {
    for (const auto& tl : doc["traffic_lights"]) {
      const auto node = Require<std::size_t>(tl, "node", "route.traffic_lights[].");
      const auto id = Require<std::string>(tl, "signal", "route.traffic_lights[].");
      r.traffic_lights[node] = id;
    }
  }
  if (doc.contains("stop_signs")) {
    for (std::size_t node : doc["stop_signs"].get<std::vector<std::size_t>>()) {
      r.stop_signs.insert(node);
    }
  }
  try {
    r.Validate(b.spat);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("route: ") + e.what());
  }
  return b;
}

RouteBundle LoadRoute(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open route file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseRoute(ss.str());
}

std::string SerializeRoute(const RouteBundle& b) {
  const Route& r = b.route;
  json doc;
  doc["name"] = r.name;
  doc["step_m"] = r.step;
  doc["node_count"] = r.node_count();
  doc["accel_min_mps2"] = r.accel_min;
  doc["accel_max_mps2"] = r.accel_max;
  doc["stop_dwell_s"] = r.stop_dwell;
  doc["v_min_mps"] = r.v_min;
  doc["v_max_mps"] = r.v_max;
  doc["grade_rad"] = r.grade;
  doc["traffic_lights"] = json::array();
  for (const auto& [node, id] : r.traffic_lights) {
    doc["traffic_lights"].push_back({{"node", node}, {"signal", id}});
  }
  doc["stop_signs"] = std::vector<std::size_t>(r.stop_signs.begin(), r.stop_signs.end());
  doc["signals"] = json::object();
  for (const auto& [id, s] : b.spat.signals()) {
    json windows = json::array();
    for (const auto& w : s.green) windows.push_back({w.start, w.end});
    doc["signals"][id] = {{"cycle_s", s.cycle}, {"offset_s", s.offset}, {"green", windows}};
  }
  return doc.dump(1);
}

void WriteIndicatorCsv(std::ostream& os, const GreenIndicator& ind) {
  os << "z,time_s,green\n";
  for (std::size_t z = 1; z <= ind.values.size(); ++z) {
    os << z << ',' << ind.SampleTime(z) << ',' << static_cast<int>(ind.values[z - 1]) << '\n';
  }
}

}  // namespace ecodrive
