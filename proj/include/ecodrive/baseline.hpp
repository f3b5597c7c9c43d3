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
 * @file baseline.hpp
 * @brief Heuristic comparator: a simple driver model that tracks the speed
 * limit and stops for signals, feeding a rule-based torque split.
 **/

#pragma once

#include <string>

#include "ecodrive/mpc.hpp"
#include "ecodrive/powertrain.hpp"
#include "ecodrive/route_spat.hpp"

namespace ecodrive {

struct DriverParams {
  double speed_margin = 0.5;     // m/s below the limit
  double gain = 0.8;             // 1/s, proportional speed tracking
  double accel = 1.5;            // m/s^2, comfortable
  double decel = -2.0;           // m/s^2, comfortable
  double line_of_sight = 150.0;  // m
  double brake_onset = 1.0;      // m/s^2, start braking once the stop needs this much
  double arrival_margin = 2.0;   // s, green time left required on arrival
  double stop_tolerance = 0.5;   // m

  /// Throws ConfigError on inconsistent values. `v_max` is the route's top
  /// speed; line of sight must cover the comfortable stopping distance.
  void Validate(double v_max) const;
};

struct SplitParams {
  double assist_threshold = 60.0;  // N m crank torque before the BSG assists
  double regen_fraction = 0.8;
  double soc_lo = 0.53;
  double soc_hi = 0.57;
  double charge_torque = 8.0;      // N m BSG torque when charging below soc_lo

  void Validate() const;
};

/// Seconds of green left at t, 0 when red.
double GreenTimeLeft(const SpatSchedule& spat, const std::string& id, double t);

/// Demanded spatial acceleration (m/s^2) at node s.
double DriverDemand(const StateVector& x, std::size_t s, const RouteBundle& bundle,
                    const DriverParams& params);

struct SplitResult {
  ActionVector action;
  bool saturated = false;
};

/// Maps a demanded wheel force onto (T_eng, T_bsg) at the current speed.
SplitResult RuleBasedTorqueSplit(double wheel_force, const StateVector& x, const Powertrain& pt,
                                 const SplitParams& params);

/// Crank torque that produces `wheel_force` in the gear engaged at v.
double CrankTorqueForWheelForce(double wheel_force, double v, const Powertrain& pt);

class BaselineController : public Controller {
 public:
  BaselineController(const RouteBundle& bundle, const Powertrain& pt, DriverParams driver,
                     SplitParams split)
      : bundle_(bundle), pt_(pt), driver_(driver), split_(split) {}

  ActionVector Decide(const StateVector& x, std::size_t node) override;
  std::string Tag() const override { return "baseline"; }

  std::size_t saturations() const { return saturations_; }

 private:
  const RouteBundle& bundle_;
  const Powertrain& pt_;
  DriverParams driver_;
  SplitParams split_;
  std::size_t saturations_ = 0;
};

}  // namespace ecodrive
