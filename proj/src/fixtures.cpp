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

#include "ecodrive/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <string>

namespace ecodrive {

namespace {

constexpr double kLhv = 43000.0;         // J/g
constexpr double kIndicatedEff = 0.40;

// Willans-type consumption: indicated work plus speed-dependent friction,
// with enrichment near full load.
double SyntheticFriction(double w) { return 14.0 + 0.018 * w; }

double SyntheticFuel(double w, double t) {
  double p = w * (t + SyntheticFriction(w));
  if (t > 190.0) p *= 1.0 + 0.004 * (t - 190.0);
  return std::max(p, 0.0) / (kIndicatedEff * kLhv);
}

double SyntheticEngineMax(double w) {
  if (w <= 150.0) return 150.0 + (w - 80.0) * (200.0 - 150.0) / 70.0;
  if (w <= 350.0) return 200.0 + (w - 150.0) * 40.0 / 200.0;
  return std::max(240.0 - (w - 350.0) * 0.2, 150.0);
}

double SyntheticBsgEff(double w, double t) {
  const double load = std::abs(t) / 45.0;
  const double speed = std::clamp(w / 1800.0, 0.0, 1.0);
  return 0.92 - 0.05 * load - 0.05 * std::abs(speed - 0.4);
}

void WriteText(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + p.string());
  os << text << '\n';
}

/// Uniform integer in [lo, hi] from raw engine output (portable, unlike
/// the standard distributions).
long Draw(std::mt19937_64& rng, long lo, long hi) {
  return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

Route BlankRoute(const std::string& name, std::size_t n, double v_max, double v_min) {
  Route r;
  r.name = name;
  r.step = 10.0;
  r.v_min.assign(n, v_min);
  r.v_max.assign(n, v_max);
  r.grade.assign(n, 0.0);
  if (n > 0) r.v_min[0] = 0.0;
  return r;
}

void AddLight(RouteBundle& b, std::size_t node, const std::string& id, double cycle,
              double green, double offset) {
  b.route.traffic_lights[node] = id;
  b.route.v_min[node] = 0.0;
  SignalTiming t;
  t.cycle = cycle;
  t.offset = offset;
  t.green = {{0.0, green}};
  b.spat.Add(id, t);
}

void AddStop(RouteBundle& b, std::size_t node) {
  b.route.stop_signs.insert(node);
  b.route.v_min[node] = 0.0;
}

}  // namespace

Powertrain MakeSyntheticPowertrain() {
  Powertrain pt;
  VehicleParams& v = pt.vehicle;
  v.mass = 1700.0;
  v.c0 = 140.0;
  v.c1 = 1.2;
  v.c2 = 0.42;
  v.wheel_radius = 0.33;
  v.final_drive = 3.6;
  v.gear_ratios = {4.2, 2.5, 1.6, 1.15, 0.85, 0.67};
  v.gear_efficiency = {0.93, 0.94, 0.95, 0.96, 0.96, 0.95};
  v.shift_speeds = {4.0, 8.0, 12.0, 16.0, 21.0};
  v.gravity = 9.81;

  std::vector<double> ws;
  for (double w = 80.0; w <= 680.0; w += 40.0) ws.push_back(w);
  std::vector<double> ts;
  for (double t = 0.0; t <= 260.0; t += 20.0) ts.push_back(t);
  std::vector<double> fuel;
  for (double w : ws) {
    for (double t : ts) fuel.push_back(SyntheticFuel(w, t));
  }
  pt.engine.fuel_map = Map2D(Axis(ws), Axis(ts), fuel);
  std::vector<double> tmin, tmax, tmot;
  for (double w : ws) {
    tmin.push_back(-420.0);
    tmax.push_back(SyntheticEngineMax(w));
    tmot.push_back(-SyntheticFriction(w));
  }
  pt.engine.motoring_torque = Curve1D(Axis(ws), tmot);
  pt.engine.torque_min = Curve1D(Axis(ws), tmin);
  pt.engine.torque_max = Curve1D(Axis(ws), tmax);
  pt.engine.idle_speed = 80.0;

  pt.bsg.belt_ratio = 2.6;
  const std::vector<double> bw = {0.0, 150.0, 285.0, 400.0, 600.0, 900.0, 1300.0, 1800.0};
  std::vector<double> bmin, bmax;
  for (double w : bw) {
    const double cap = w > 0.0 ? 12000.0 / w : 1e9;
    bmin.push_back(-std::min(45.0, cap));
    bmax.push_back(std::min(42.0, cap));
  }
  pt.bsg.torque_min = Curve1D(Axis(bw), bmin);
  pt.bsg.torque_max = Curve1D(Axis(bw), bmax);
  const std::vector<double> bt = {-45.0, -30.0, -15.0, 0.0, 15.0, 30.0, 45.0};
  std::vector<double> eff;
  for (double w : bw) {
    for (double t : bt) eff.push_back(SyntheticBsgEff(w, t));
  }
  pt.bsg.efficiency = Map2D(Axis(bw), Axis(bt), eff);

  const std::vector<double> soc = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  std::vector<double> ocv;
  for (double s : soc) ocv.push_back(44.0 + 8.0 * s);
  pt.battery.ocv = Curve1D(Axis(soc), ocv);
  pt.battery.resistance = 0.02;
  pt.battery.capacity = 28800.0;
  pt.battery.soc_min = 0.35;
  pt.battery.soc_max = 0.75;
  pt.Validate();
  return pt;
}

Powertrain MakeConventionalPowertrain() {
  Powertrain pt = MakeSyntheticPowertrain();
  const Axis& x = pt.bsg.torque_min.x();
  pt.bsg.torque_min = Curve1D(x, std::vector<double>(x.size(), 0.0));
  pt.bsg.torque_max = Curve1D(x, std::vector<double>(x.size(), 0.0));
  return pt;
}

RouteBundle MakeUrbanRoute(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RouteBundle b;
  b.route = BlankRoute("urban", 700, 13.9, 1.0);
  const std::size_t lights[] = {110, 215, 340, 470, 590};
  for (std::size_t i = 0; i < 5; ++i) {
    const double cycle = static_cast<double>(Draw(rng, 6, 9) * 10);
    const double green = std::round(cycle * static_cast<double>(Draw(rng, 45, 60)) / 100.0);
    const double offset = static_cast<double>(Draw(rng, 0, static_cast<long>(cycle) - 1));
    AddLight(b, lights[i], "S" + std::to_string(i + 1), cycle, green, offset);
  }
  AddStop(b, 50);
  AddStop(b, 405);
  // A slower school zone between the third and fourth light.
  for (std::size_t s = 380; s < 395; ++s) b.route.v_max[s] = 8.3;
  b.route.Validate(b.spat);
  return b;
}

RouteBundle MakeMixedRoute(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  RouteBundle b;
  b.route = BlankRoute("mixed", 600, 13.9, 1.0);
  for (std::size_t s = 180; s < 460; ++s) b.route.v_max[s] = 22.2;
  // Rolling terrain on the fast section.
  for (std::size_t s = 180; s < 460; ++s) {
    b.route.grade[s] = 0.02 * std::sin(2.0 * M_PI * static_cast<double>(s - 180) / 140.0);
  }
  const std::size_t lights[] = {90, 330, 520};
  for (std::size_t i = 0; i < 3; ++i) {
    const double cycle = static_cast<double>(Draw(rng, 6, 9) * 10);
    const double green = std::round(cycle * static_cast<double>(Draw(rng, 50, 65)) / 100.0);
    const double offset = static_cast<double>(Draw(rng, 0, static_cast<long>(cycle) - 1));
    AddLight(b, lights[i], "M" + std::to_string(i + 1), cycle, green, offset);
  }
  AddStop(b, 150);
  b.route.Validate(b.spat);
  return b;
}

RouteBundle MakeRedWallRoute() {
  RouteBundle b;
  b.route = BlankRoute("redwall", 21, 15.0, 3.0);
  b.route.v_min[0] = 3.0;
  b.route.traffic_lights[5] = "W";
  b.route.v_min[5] = 0.0;
  SignalTiming t;
  t.cycle = 120.0;
  t.offset = 0.0;
  t.green = {{35.0, 95.0}};
  b.spat.Add("W", t);
  b.route.Validate(b.spat);
  return b;
}

RouteBundle MakeEmptyRoute(std::size_t nodes, double v_max, double v_min) {
  RouteBundle b;
  b.route = BlankRoute("empty", nodes, v_max, v_min);
  b.route.Validate(b.spat);
  return b;
}

void WriteFixtureFiles(const std::filesystem::path& dir, std::uint64_t seed) {
  WriteText(dir / "vehicle.json", SerializePowertrain(MakeSyntheticPowertrain()));
  WriteText(dir / "routes" / "urban.json", SerializeRoute(MakeUrbanRoute(seed)));
  WriteText(dir / "routes" / "mixed.json", SerializeRoute(MakeMixedRoute(seed)));
  WriteText(dir / "routes" / "redwall.json", SerializeRoute(MakeRedWallRoute()));
}

}  // namespace ecodrive
