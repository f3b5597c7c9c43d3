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

#include <fstream>
#include <sstream>

#include "ecodrive/powertrain.hpp"
#include "json.hpp"

namespace ecodrive {

namespace {

using nlohmann::json;

const json& Field(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key)) throw ConfigError(ctx + key + ": missing");
  return j.at(key);
}

template <typename T>
T Get(const json& j, const char* key, const std::string& ctx) {
  try {
    return Field(j, key, ctx).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(ctx + key + ": " + e.what());
  }
}

Axis GetAxis(const json& j, const char* key, const std::string& ctx) {
  try {
    return Axis(Get<std::vector<double>>(j, key, ctx));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(ctx + key + ": " + e.what());
  }
}

Map2D GetMap(const json& j, const char* x, const char* y, const char* z, const std::string& ctx) {
  try {
    return Map2D(GetAxis(j, x, ctx), GetAxis(j, y, ctx), Get<std::vector<double>>(j, z, ctx));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(ctx + z + ": " + e.what());
  }
}

Curve1D GetCurve(const json& j, const char* x, const char* y, const std::string& ctx) {
  try {
    return Curve1D(GetAxis(j, x, ctx), Get<std::vector<double>>(j, y, ctx));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(ctx + y + ": " + e.what());
  }
}

}  // namespace

Powertrain ParsePowertrain(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("vehicle: malformed JSON: ") + e.what());
  }
  Powertrain pt;
  {
    const json& v = Field(doc, "vehicle", "");
    const std::string c = "vehicle.";
    VehicleParams& p = pt.vehicle;
    p.mass = Get<double>(v, "mass_kg", c);
    p.c0 = Get<double>(v, "c0_n", c);
    p.c1 = Get<double>(v, "c1_n_s_per_m", c);
    p.c2 = Get<double>(v, "c2_n_s2_per_m2", c);
    p.wheel_radius = Get<double>(v, "wheel_radius_m", c);
    p.final_drive = Get<double>(v, "final_drive", c);
    p.gear_ratios = Get<std::vector<double>>(v, "gear_ratios", c);
    p.gear_efficiency = Get<std::vector<double>>(v, "gear_efficiency", c);
    p.shift_speeds = Get<std::vector<double>>(v, "shift_speeds_mps", c);
    p.gravity = v.value("gravity_mps2", 9.81);
  }
  {
    const json& e = Field(doc, "engine", "");
    const std::string c = "engine.";
    pt.engine.idle_speed = Get<double>(e, "idle_speed_radps", c);
    pt.engine.fuel_map =
        GetMap(Field(e, "fuel_map", c), "speed_radps", "torque_nm", "fuel_gps", c + "fuel_map.");
    const json& lim = Field(e, "torque_limits", c);
    pt.engine.torque_min = GetCurve(lim, "speed_radps", "min_nm", c + "torque_limits.");
    pt.engine.torque_max = GetCurve(lim, "speed_radps", "max_nm", c + "torque_limits.");
    pt.engine.motoring_torque = GetCurve(Field(e, "motoring_torque", c), "speed_radps",
                                         "torque_nm", c + "motoring_torque.");
  }
  {
    const json& b = Field(doc, "bsg", "");
    const std::string c = "bsg.";
    pt.bsg.belt_ratio = Get<double>(b, "belt_ratio", c);
    const json& lim = Field(b, "torque_limits", c);
    pt.bsg.torque_min = GetCurve(lim, "speed_radps", "min_nm", c + "torque_limits.");
    pt.bsg.torque_max = GetCurve(lim, "speed_radps", "max_nm", c + "torque_limits.");
    pt.bsg.efficiency = GetMap(Field(b, "efficiency_map", c), "speed_radps", "torque_nm",
                               "efficiency", c + "efficiency_map.");
  }
  {
    const json& b = Field(doc, "battery", "");
    const std::string c = "battery.";
    pt.battery.ocv = GetCurve(b, "soc", "ocv_v", c);
    pt.battery.resistance = Get<double>(b, "resistance_ohm", c);
    pt.battery.capacity = Get<double>(b, "capacity_as", c);
    pt.battery.soc_min = Get<double>(b, "soc_min", c);
    pt.battery.soc_max = Get<double>(b, "soc_max", c);
  }
  pt.Validate();
  return pt;
}

Powertrain LoadPowertrain(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open vehicle file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ParsePowertrain(ss.str());
}

std::string SerializePowertrain(const Powertrain& pt) {
  json doc;
  const VehicleParams& p = pt.vehicle;
  doc["vehicle"] = {{"mass_kg", p.mass},
                    {"c0_n", p.c0},
                    {"c1_n_s_per_m", p.c1},
                    {"c2_n_s2_per_m2", p.c2},
                    {"wheel_radius_m", p.wheel_radius},
                    {"final_drive", p.final_drive},
                    {"gear_ratios", p.gear_ratios},
                    {"gear_efficiency", p.gear_efficiency},
                    {"shift_speeds_mps", p.shift_speeds},
                    {"gravity_mps2", p.gravity}};
  const EngineModel& e = pt.engine;
  doc["engine"] = {
      {"idle_speed_radps", e.idle_speed},
      {"fuel_map",
       {{"speed_radps", e.fuel_map.x().points()},
        {"torque_nm", e.fuel_map.y().points()},
        {"fuel_gps", e.fuel_map.z()}}},
      {"torque_limits",
       {{"speed_radps", e.torque_min.x().points()},
        {"min_nm", e.torque_min.y()},
        {"max_nm", e.torque_max.y()}}},
      {"motoring_torque",
       {{"speed_radps", e.motoring_torque.x().points()},
        {"torque_nm", e.motoring_torque.y()}}}};
  const BsgModel& b = pt.bsg;
  doc["bsg"] = {{"belt_ratio", b.belt_ratio},
                {"torque_limits",
                 {{"speed_radps", b.torque_min.x().points()},
                  {"min_nm", b.torque_min.y()},
                  {"max_nm", b.torque_max.y()}}},
                {"efficiency_map",
                 {{"speed_radps", b.efficiency.x().points()},
                  {"torque_nm", b.efficiency.y().points()},
                  {"efficiency", b.efficiency.z()}}}};
  const BatteryModel& bat = pt.battery;
  doc["battery"] = {{"soc", bat.ocv.x().points()},
                    {"ocv_v", bat.ocv.y()},
                    {"resistance_ohm", bat.resistance},
                    {"capacity_as", bat.capacity},
                    {"soc_min", bat.soc_min},
                    {"soc_max", bat.soc_max}};
  return doc.dump(1);
}

}  // namespace ecodrive
