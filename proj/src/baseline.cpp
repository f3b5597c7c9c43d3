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

#include "ecodrive/baseline.hpp"

#include <algorithm>
#include <cmath>

namespace ecodrive {

void DriverParams::Validate(double v_max) const {
  if (!(decel < 0.0 && accel > 0.0)) throw ConfigError("driver: need decel < 0 < accel");
  if (!(gain > 0.0)) throw ConfigError("driver: gain must be positive");
  if (!(brake_onset > 0.0)) throw ConfigError("driver: brake_onset must be positive");
  if (speed_margin < 0.0 || arrival_margin < 0.0 || stop_tolerance < 0.0) {
    throw ConfigError("driver: margins must be non-negative");
  }
  if (!(line_of_sight > v_max * v_max / (2.0 * -decel))) {
    throw ConfigError("driver: line_of_sight shorter than the comfortable stopping distance");
  }
}

void SplitParams::Validate() const {
  if (!(soc_lo >= 0.0 && soc_lo < soc_hi && soc_hi <= 1.0)) {
    throw ConfigError("split: need 0 <= soc_lo < soc_hi <= 1");
  }
  if (!(regen_fraction >= 0.0 && regen_fraction <= 1.0)) {
    throw ConfigError("split: regen_fraction outside [0, 1]");
  }
  if (assist_threshold < 0.0 || charge_torque < 0.0) {
    throw ConfigError("split: torques must be non-negative");
  }
}

double GreenTimeLeft(const SpatSchedule& spat, const std::string& id, double t) {
  const SignalTiming& tm = spat.Timing(id);
  double local = std::fmod(t + tm.offset, tm.cycle);
  if (local < 0.0) local += tm.cycle;
  for (const GreenWindow& g : tm.green) {
    if (local >= g.start && local < g.end) return g.end - local;
  }
  return 0.0;
}

double DriverDemand(const StateVector& x, std::size_t s, const RouteBundle& bundle,
                    const DriverParams& p) {
  const Route& route = bundle.route;
  const std::size_t n = route.node_count();
  if (s + 1 >= n) return 0.0;
  const double v = x.v;
  const double dd = route.step;

  // Cruise: the lowest speed any limit inside line of sight still allows.
  double target = std::max(route.v_max[s + 1] - p.speed_margin, 0.0);
  for (std::size_t j = s + 2; j < n; ++j) {
    const double dist = dd * static_cast<double>(j - s - 1);
    if (dist > p.line_of_sight) break;
    const double vj = std::max(route.v_max[j] - p.speed_margin, 0.0);
    target = std::min(target, std::sqrt(vj * vj + 2.0 * -p.decel * dist));
  }
  double a = std::clamp(p.gain * (target - v), p.decel, p.accel);
  a = std::min(a, (target * target - v * v) / (2.0 * dd));

  for (std::size_t j = s + 1; j < n; ++j) {
    const double dist = dd * static_cast<double>(j - s);
    if (dist > p.line_of_sight + p.stop_tolerance) break;
    const NodeKind kind = route.Kind(j);
    if (kind == NodeKind::kPlain) continue;
    bool stop = kind == NodeKind::kStopSign;
    if (kind == NodeKind::kTrafficLight) {
      const double left = GreenTimeLeft(bundle.spat, *route.SignalAt(j), x.t);
      const double eta = dist / std::max(v, 1.0);
      stop = left <= 0.0 || eta + p.arrival_margin > left;
      // Too close to stop comfortably while still green: keep going.
      if (stop && left > 0.0 && v * v / (2.0 * dist) > -route.accel_min) stop = false;
    }
    if (!stop) continue;
    if (j == s + 1) {
      // Slightly over-brake so the speed clamps to exactly zero at the node.
      return v > 0.0 ? -1.05 * v * v / (2.0 * dist) : 0.0;
    }
    // Approach so that the stop never needs more than brake_onset.
    const double v_next_sq = 2.0 * p.brake_onset * (dist - dd);
    return std::min(a, (v_next_sq - v * v) / (2.0 * dd));
  }
  return a;
}

double CrankTorqueForWheelForce(double wheel_force, double v, const Powertrain& pt) {
  const VehicleParams& vp = pt.vehicle;
  const DrivetrainState d = ComputeDrivetrainState(v, pt);
  const double ratio = vp.gear_ratios[d.gear] * vp.final_drive;
  const double eta = vp.gear_efficiency[d.gear];
  const double axle = wheel_force * vp.wheel_radius;
  return axle >= 0.0 ? axle / (eta * ratio) : axle * eta / ratio;
}

SplitResult RuleBasedTorqueSplit(double wheel_force, const StateVector& x, const Powertrain& pt,
                                  const SplitParams& p) {
  SplitResult r;
  const double crank = CrankTorqueForWheelForce(wheel_force, x.v, pt);
  const TorqueLimits lim = ActionLimits(x.v, pt);
  const double belt = pt.bsg.belt_ratio;
  double t_bsg = 0.0;
  double t_eng = 0.0;
  if (crank < 0.0) {
    // Regen first; whatever the BSG cannot take goes to drag and friction.
    if (x.soc < p.soc_hi) t_bsg = std::max(p.regen_fraction * crank / belt, lim.bsg_min);
    t_eng = std::min(crank - belt * t_bsg, 0.0);
    if (t_eng == 0.0) t_eng = 0.0;  // no negative zero
  } else if (crank == 0.0) {
    t_eng = 0.0;
  } else if (x.soc < p.soc_lo) {
    t_bsg = std::max(-p.charge_torque, lim.bsg_min);
    t_eng = crank - belt * t_bsg;
  } else if (crank > p.assist_threshold) {
    t_bsg = std::min((crank - p.assist_threshold) / belt, lim.bsg_max);
    t_eng = crank - belt * t_bsg;
  } else {
    t_eng = crank;
  }
  if (t_eng > lim.eng_max || t_eng < lim.eng_min) {
    r.saturated = true;
    t_eng = std::clamp(t_eng, lim.eng_min, lim.eng_max);
  }
  r.action = {t_eng, t_bsg};
  return r;
}

ActionVector BaselineController::Decide(const StateVector& x, std::size_t node) {
  const Route& route = bundle_.route;
  const double a = DriverDemand(x, node, bundle_, driver_);
  const double force = pt_.vehicle.mass * a + RoadLoadForce(x.v, route.grade[node], pt_.vehicle);
  const SplitResult r = RuleBasedTorqueSplit(force, x, pt_, split_);
  if (r.saturated) ++saturations_;
  return r.action;
}

}  // namespace ecodrive
