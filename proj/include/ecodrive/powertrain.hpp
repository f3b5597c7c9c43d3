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
 * @file powertrain.hpp
 * @brief Quasi-static P0 mild-hybrid vehicle: road load, ratio chain,
 * engine fuel map, belted starter-generator, zero-th order battery and the
 * spatial-domain state update.
 *
 * Everything here is a pure function of immutable parameters.
 **/

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ecodrive/grid.hpp"
#include "ecodrive/route_spat.hpp"

namespace ecodrive {

struct VehicleParams {
  double mass = 1700.0;          // kg
  double c0 = 140.0;             // N
  double c1 = 1.2;               // N s/m
  double c2 = 0.42;              // N s^2/m^2
  double wheel_radius = 0.33;    // m
  double final_drive = 3.6;
  std::vector<double> gear_ratios;
  std::vector<double> gear_efficiency;
  std::vector<double> shift_speeds;  // m/s, upshift thresholds
  double gravity = 9.81;

  void Validate() const;
};

struct EngineModel {
  Map2D fuel_map;        // (rad/s, N m) -> g/s
  Curve1D torque_min;    // N m over rad/s; negative part is crank-referred braking
  Curve1D torque_max;
  Curve1D motoring_torque;  // N m over rad/s; crank torque of the unfired engine (< 0)
  double idle_speed = 80.0;

  void Validate() const;
};

struct BsgModel {
  Curve1D torque_min;    // N m over BSG shaft rad/s
  Curve1D torque_max;
  Map2D efficiency;      // (rad/s, N m) -> (0, 1]
  double belt_ratio = 2.6;

  void Validate() const;
};

struct BatteryModel {
  Curve1D ocv;           // V over SoC
  double resistance = 0.02;  // ohm
  double capacity = 28800.0; // A s
  double soc_min = 0.35;
  double soc_max = 0.75;

  void Validate() const;
  double MaxDeliverablePower(double soc) const;
};

struct Powertrain {
  VehicleParams vehicle;
  EngineModel engine;
  BsgModel bsg;
  BatteryModel battery;

  void Validate() const;
};

struct StateVector {
  double v = 0.0;    // m/s
  double soc = 0.5;
  double t = 0.0;    // s
};

struct ActionVector {
  double t_eng = 0.0;  // N m
  double t_bsg = 0.0;  // N m
};

struct DrivetrainState {
  std::size_t gear = 0;     // 0-based index into gear_ratios
  double engine_speed = 0;  // rad/s
  double bsg_speed = 0;     // rad/s
};

struct TorqueLimits {
  double eng_min = 0.0;
  double eng_max = 0.0;
  double bsg_min = 0.0;
  double bsg_max = 0.0;

  bool Contains(const ActionVector& u, double tol = 1e-9) const {
    return u.t_eng >= eng_min - tol && u.t_eng <= eng_max + tol &&
           u.t_bsg >= bsg_min - tol && u.t_bsg <= bsg_max + tol;
  }
};

double RoadLoadForce(double v, double grade, const VehicleParams& params);

DrivetrainState ComputeDrivetrainState(double v, const Powertrain& pt);

/// Wheel force from crank-referred torque through the locked driveline.
/// Efficiency multiplies positive axle torque and divides negative.
double TractiveForce(double v, const ActionVector& u, const Powertrain& pt);

/// Bilinear lookup in the fuel map; 0 when the engine is off. Between the
/// motoring torque and zero the rate falls linearly to 0 (Willans line).
double FuelRate(double engine_speed, double t_eng, const EngineModel& engine, bool engine_on,
                bool* clamped = nullptr);

/// Start-stop and fuel-cut rule. At standstill the engine only runs to
/// deliver positive torque; while moving it is fired unless the requested
/// torque is at or below its motoring torque (the excess being braking).
bool EngineOn(double t_eng, double v, double motoring);

/// Electrical battery power of the BSG; positive is discharge.
double BsgElectricalPower(double t_bsg, double bsg_speed, const BsgModel& bsg);

/// Smaller root of V_oc I - R0 I^2 = P. nullopt when P exceeds the
/// deliverable power V_oc^2 / (4 R0).
std::optional<double> BatteryCurrent(double p_bat, double soc, const BatteryModel& bat);

TorqueLimits ActionLimits(double v, const Powertrain& pt);

enum class MoveStatus {
  kOk,
  kZeroMeanVelocity,
  kInfeasiblePower,
  kClampedNotAdmitted,  // radicand < 0 while the next node does not admit a stop
};

/// The velocity-only part of the distance step: everything that does not
/// depend on SoC or time.
struct MoveResult {
  MoveStatus status = MoveStatus::kOk;
  double v_next = 0.0;
  double move_time = 0.0;  // Δd / v̄
  double fuel_rate = 0.0;  // g/s
  double p_bat = 0.0;      // W, mean over the move
  bool clamped = false;
  bool fuel_clamped = false;
};

MoveResult EvaluateMove(double v, const ActionVector& u, double step, double grade,
                        bool next_admits_stop, const Powertrain& pt);

/// ξ' = ξ - move_time * I / C_nom; nullopt on infeasible battery power.
std::optional<double> SocAfterMove(double soc, double p_bat, double move_time,
                                   const BatteryModel& bat);

struct NodeContext {
  NodeKind kind = NodeKind::kPlain;
  const std::string* signal = nullptr;   // set for traffic lights
  const SpatSchedule* spat = nullptr;
  double stop_dwell = 0.0;
  bool next_admits_stop = false;
  bool teleport = true;
};

NodeContext MakeNodeContext(std::size_t node, const Route& route, const SpatSchedule& spat,
                            bool teleport = true);

/// Absolute time the vehicle leaves the node. A vehicle standing at a red
/// light is teleported to the next red-to-green transition; at a stop sign
/// the dwell is added. Moving vehicles depart at x.t.
double DepartureTime(const StateVector& x, const NodeContext& ctx);

struct PropagationResult {
  MoveStatus status = MoveStatus::kOk;
  StateVector next;
  double wait = 0.0;
  double move_time = 0.0;
  double fuel_g = 0.0;
  double p_bat = 0.0;
  bool clamped = false;
  bool fuel_clamped = false;

  bool ok() const { return status == MoveStatus::kOk; }
};

PropagationResult PropagateState(const StateVector& x, const ActionVector& u, double step,
                                 double grade, const NodeContext& ctx, const Powertrain& pt);

Powertrain LoadPowertrain(const std::filesystem::path& path);
Powertrain ParsePowertrain(const std::string& json_text);
std::string SerializePowertrain(const Powertrain& pt);

}  // namespace ecodrive
