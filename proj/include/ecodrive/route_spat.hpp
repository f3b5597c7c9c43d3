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

/**
 * @file route_spat.hpp
 * @brief Route geometry, fixed-cycle signal timing and green-window sets.
 **/

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ecodrive {

/// Raised for schema and invariant violations in input documents. The
/// message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Phase { kGreen, kRed };

enum class NodeKind { kPlain, kTrafficLight, kStopSign };

/// Green window [start, end) in cycle-local seconds. Yellow counts as green.
struct GreenWindow {
  double start = 0.0;
  double end = 0.0;
};

struct SignalTiming {
  double cycle = 60.0;
  double offset = 0.0;
  std::vector<GreenWindow> green;

  void Validate(const std::string& id) const;
};

class SpatSchedule {
 public:
  void Add(const std::string& id, SignalTiming timing);
  bool Contains(const std::string& id) const { return signals_.count(id) != 0; }
  const SignalTiming& Timing(const std::string& id) const;
  const std::map<std::string, SignalTiming>& signals() const { return signals_; }

  /// Throws std::out_of_range for an unknown signal id.
  Phase PhaseAt(const std::string& id, double t) const;
  /// Smallest t' > t at which the signal is green. Throws std::logic_error
  /// when called while green.
  double NextGreenStart(const std::string& id, double t) const;

 private:
  std::map<std::string, SignalTiming> signals_;
};

struct Route {
  std::string name;
  double step = 10.0;              // m between nodes
  std::vector<double> v_min;       // m/s per node
  std::vector<double> v_max;       // m/s per node
  std::vector<double> grade;       // rad per node
  std::map<std::size_t, std::string> traffic_lights;  // node -> signal id
  std::set<std::size_t> stop_signs;
  double accel_min = -3.0;         // m/s^2
  double accel_max = 2.0;          // m/s^2
  double stop_dwell = 2.0;         // s

  std::size_t node_count() const { return v_max.size(); }
  double Position(std::size_t node) const { return step * static_cast<double>(node); }
  NodeKind Kind(std::size_t node) const;
  bool AdmitsStop(std::size_t node) const { return Kind(node) != NodeKind::kPlain; }
  /// Signal id at a traffic-light node, nullptr elsewhere.
  const std::string* SignalAt(std::size_t node) const;

  /// Throws ConfigError naming the first violated invariant.
  void Validate(const SpatSchedule& spat) const;
};

struct RouteBundle {
  Route route;
  SpatSchedule spat;
};

/// Green indicator over the samples base + dt * z, z = 1..t_f/dt.
struct GreenIndicator {
  double base = 0.0;
  double sample_period = 0.0;
  std::vector<std::uint8_t> values;

  double SampleTime(std::size_t z) const { return base + sample_period * static_cast<double>(z); }
};

Phase PhaseAtNode(std::size_t node, double t, const Route& route, const SpatSchedule& spat);

/// Throws std::invalid_argument when t_f / dt is not integral or the node
/// is outside the route.
GreenIndicator IndicatorVector(std::size_t node, double t_s, double t_f, double dt,
                               const Route& route, const SpatSchedule& spat);

/// {t_s + dt * z : indicator_z = 1}, ascending.
std::vector<double> FeasibleTimeSet(std::size_t node, double t_s, double t_f, double dt,
                                    const Route& route, const SpatSchedule& spat);

/// Horizon base time: the DP time grid contains base + dt * z for
/// z = 1..n, with the first sample the largest multiple of dt not above t_s.
double SnapHorizonBase(double t_s, double dt);

RouteBundle LoadRoute(const std::filesystem::path& path);
RouteBundle ParseRoute(const std::string& json_text);
std::string SerializeRoute(const RouteBundle& bundle);

void WriteIndicatorCsv(std::ostream& os, const GreenIndicator& indicator);

}  // namespace ecodrive
