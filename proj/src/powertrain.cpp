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

#include "ecodrive/powertrain.hpp"

#include <algorithm>
#include <cmath>

namespace ecodrive {

void VehicleParams::Validate() const {
  if (!(mass > 0.0)) throw ConfigError("vehicle.mass_kg must be > 0");
  if (!(wheel_radius > 0.0)) throw ConfigError("vehicle.wheel_radius_m must be > 0");
  if (!(final_drive > 0.0)) throw ConfigError("vehicle.final_drive must be > 0");
  if (gear_ratios.empty()) throw ConfigError("vehicle.gear_ratios must not be empty");
  if (gear_efficiency.size() != gear_ratios.size()) {
    throw ConfigError("vehicle.gear_efficiency must have one entry per gear");
  }
  for (std::size_t i = 0; i < gear_ratios.size(); ++i) {
    if (!(gear_ratios[i] > 0.0)) throw ConfigError("vehicle.gear_ratios must be > 0");
    if (!(gear_efficiency[i] > 0.0 && gear_efficiency[i] <= 1.0)) {
      throw ConfigError("vehicle.gear_efficiency must lie in (0, 1]");
    }
  }
  if (shift_speeds.size() + 1 != gear_ratios.size()) {
    throw ConfigError("vehicle.shift_speeds_mps needs gear count - 1 entries");
  }
  for (std::size_t i = 1; i < shift_speeds.size(); ++i) {
    if (!(shift_speeds[i] > shift_speeds[i - 1])) {
      throw ConfigError("vehicle.shift_speeds_mps must be strictly increasing");
    }
  }
  if (!(gravity > 0.0)) throw ConfigError("vehicle.gravity_mps2 must be > 0");
}

void EngineModel::Validate() const {
  for (double z : fuel_map.z()) {
    if (!(z >= 0.0)) throw ConfigError("engine.fuel_map values must be non-negative");
  }
  if (torque_min.x().points() != torque_max.x().points()) {
    throw ConfigError("engine.torque_limits min/max must share a speed axis");
  }
  for (std::size_t i = 0; i < torque_min.y().size(); ++i) {
    if (torque_min.y()[i] > torque_max.y()[i]) {
      throw ConfigError("engine.torque_limits min exceeds max");
    }
  }
  for (std::size_t i = 0; i < motoring_torque.y().size(); ++i) {
    const double m = motoring_torque.y()[i];
    if (!(m < 0.0 && m >= torque_min(motoring_torque.x()[i]))) {
      throw ConfigError("engine.motoring_torque must lie in [torque_min, 0)");
    }
  }
  if (motoring_torque.x().empty()) throw ConfigError("engine.motoring_torque: missing");
  if (!(idle_speed > 0.0)) throw ConfigError("engine.idle_speed_radps must be > 0");
}

void BsgModel::Validate() const {
  if (torque_min.x().points() != torque_max.x().points()) {
    throw ConfigError("bsg.torque_limits min/max must share a speed axis");
  }
  for (std::size_t i = 0; i < torque_min.y().size(); ++i) {
    if (!(torque_min.y()[i] <= 0.0 && torque_max.y()[i] >= 0.0)) {
      throw ConfigError("bsg.torque_limits must satisfy min <= 0 <= max");
    }
  }
  for (double e : efficiency.z()) {
    if (!(e > 0.0 && e <= 1.0)) throw ConfigError("bsg.efficiency values must lie in (0, 1]");
  }
  if (!(belt_ratio > 0.0)) throw ConfigError("bsg.belt_ratio must be > 0");
}

void BatteryModel::Validate() const {
  if (!(resistance > 0.0)) throw ConfigError("battery.resistance_ohm must be > 0");
  if (!(capacity > 0.0)) throw ConfigError("battery.capacity_as must be > 0");
  if (!(soc_min >= 0.0 && soc_min < soc_max && soc_max <= 1.0)) {
    throw ConfigError("battery SoC bounds need 0 <= soc_min < soc_max <= 1");
  }
  for (std::size_t i = 0; i < ocv.x().size(); ++i) {
    const double s = ocv.x()[i];
    if (s >= soc_min && s <= soc_max && !(ocv.y()[i] > 0.0)) {
      throw ConfigError("battery.ocv_v must be positive inside the SoC bounds");
    }
  }
  if (!(ocv(soc_min) > 0.0 && ocv(soc_max) > 0.0)) {
    throw ConfigError("battery.ocv_v must be positive inside the SoC bounds");
  }
}

double BatteryModel::MaxDeliverablePower(double soc) const {
  const double v = ocv(soc);
  return v * v / (4.0 * resistance);
}

void Powertrain::Validate() const {
  vehicle.Validate();
  engine.Validate();
  bsg.Validate();
  battery.Validate();
}

double RoadLoadForce(double v, double grade, const VehicleParams& p) {
  return p.c0 * std::cos(grade) + p.c1 * v + p.c2 * v * v +
         p.mass * p.gravity * std::sin(grade);
}

DrivetrainState ComputeDrivetrainState(double v, const Powertrain& pt) {
  const VehicleParams& p = pt.vehicle;
  DrivetrainState d;
  d.gear = static_cast<std::size_t>(
      std::upper_bound(p.shift_speeds.begin(), p.shift_speeds.end(), v) -
      p.shift_speeds.begin());
  const double wheel_speed = v / p.wheel_radius;
  d.engine_speed =
      std::max(wheel_speed * p.final_drive * p.gear_ratios[d.gear], pt.engine.idle_speed);
  d.bsg_speed = d.engine_speed * pt.bsg.belt_ratio;
  return d;
}

double TractiveForce(double v, const ActionVector& u, const Powertrain& pt) {
  const VehicleParams& p = pt.vehicle;
  const DrivetrainState d = ComputeDrivetrainState(v, pt);
  const double crank = u.t_eng + u.t_bsg * pt.bsg.belt_ratio;
  const double axle = crank * p.gear_ratios[d.gear] * p.final_drive;
  const double eta = p.gear_efficiency[d.gear];
  const double wheel = axle >= 0.0 ? axle * eta : axle / eta;
  return wheel / p.wheel_radius;
}

double FuelRate(double engine_speed, double t_eng, const EngineModel& engine, bool engine_on,
                bool* clamped) {
  if (!engine_on) return 0.0;
  if (t_eng >= 0.0) return engine.fuel_map(engine_speed, t_eng, clamped);
  const double motoring = engine.motoring_torque(engine_speed);
  if (t_eng <= motoring) return 0.0;
  return engine.fuel_map(engine_speed, 0.0, clamped) * ((t_eng - motoring) / -motoring);
}

bool EngineOn(double t_eng, double v, double motoring) {
  return v > 0.0 ? t_eng > motoring : t_eng > 0.0;
}

double BsgElectricalPower(double t_bsg, double bsg_speed, const BsgModel& bsg) {
  const double mech = t_bsg * bsg_speed;
  if (mech == 0.0) return 0.0;
  const double eta = bsg.efficiency(bsg_speed, t_bsg);
  return mech > 0.0 ? mech / eta : mech * eta;
}

std::optional<double> BatteryCurrent(double p_bat, double soc, const BatteryModel& bat) {
  const double voc = bat.ocv(soc);
  const double disc = voc * voc - 4.0 * bat.resistance * p_bat;
  if (disc < 0.0) return std::nullopt;
  // Smaller root of R I^2 - V_oc I + P = 0, in the form that does not cancel
  // for small |P|.
  return 2.0 * p_bat / (voc + std::sqrt(disc));
}

TorqueLimits ActionLimits(double v, const Powertrain& pt) {
  const DrivetrainState d = ComputeDrivetrainState(v, pt);
  return {pt.engine.torque_min(d.engine_speed), pt.engine.torque_max(d.engine_speed),
          pt.bsg.torque_min(d.bsg_speed), pt.bsg.torque_max(d.bsg_speed)};
}

MoveResult EvaluateMove(double v, const ActionVector& u, double step, double grade,
                        bool next_admits_stop, const Powertrain& pt) {
  MoveResult r;
  const DrivetrainState d = ComputeDrivetrainState(v, pt);
  const double f_tr = TractiveForce(v, u, pt);
  const double f_road = RoadLoadForce(v, grade, pt.vehicle);
  const double radicand = v * v + 2.0 * step * ((f_tr - f_road) / pt.vehicle.mass);
  if (radicand <= 0.0) {
    r.v_next = 0.0;
    r.clamped = radicand < 0.0;
    if (r.clamped && !next_admits_stop) r.status = MoveStatus::kClampedNotAdmitted;
  } else {
    r.v_next = std::sqrt(radicand);
  }
  const double v_mean = 0.5 * (v + r.v_next);
  if (v_mean <= 0.0) {
    r.status = MoveStatus::kZeroMeanVelocity;
    return r;
  }
  r.move_time = step / v_mean;
  const bool on = EngineOn(u.t_eng, v, pt.engine.motoring_torque(d.engine_speed));
  r.fuel_rate = FuelRate(d.engine_speed, u.t_eng, pt.engine, on, &r.fuel_clamped);
  // BSG energy follows the crank over the move: evaluate it at the mean speed
  // while the machine acts. A clamped move stops short of the node after
  // 2 dd v / (v^2 - radicand) s at mean speed v / 2; the rest is standstill.
  double v_act = v_mean;
  double t_act = r.move_time;
  if (r.clamped) {
    v_act = 0.5 * v;
    t_act = std::min(2.0 * step * v / (v * v - radicand), r.move_time);
  }
  // Same gear as the tractive force; an unfired engine turns with the wheels,
  // below idle if need be.
  const VehicleParams& p = pt.vehicle;
  double w_crank = v_act / p.wheel_radius * p.final_drive * p.gear_ratios[d.gear];
  if (on) w_crank = std::max(w_crank, pt.engine.idle_speed);
  const double w_bsg = w_crank * pt.bsg.belt_ratio;
  r.p_bat = BsgElectricalPower(u.t_bsg, w_bsg, pt.bsg) * (t_act / r.move_time);
  if (r.p_bat > pt.battery.MaxDeliverablePower(pt.battery.soc_max) &&
      r.p_bat > pt.battery.MaxDeliverablePower(pt.battery.soc_min) &&
      r.status == MoveStatus::kOk) {
    r.status = MoveStatus::kInfeasiblePower;
  }
  return r;
}

std::optional<double> SocAfterMove(double soc, double p_bat, double move_time,
                                   const BatteryModel& bat) {
  const auto current = BatteryCurrent(p_bat, soc, bat);
  if (!current) return std::nullopt;
  return soc - move_time * *current / bat.capacity;
}

NodeContext MakeNodeContext(std::size_t node, const Route& route, const SpatSchedule& spat,
                            bool teleport) {
  NodeContext ctx;
  ctx.kind = route.Kind(node);
  ctx.signal = route.SignalAt(node);
  ctx.spat = &spat;
  ctx.stop_dwell = route.stop_dwell;
  ctx.next_admits_stop = node + 1 < route.node_count() && route.AdmitsStop(node + 1);
  ctx.teleport = teleport;
  return ctx;
}

double DepartureTime(const StateVector& x, const NodeContext& ctx) {
  if (x.v != 0.0) return x.t;
  switch (ctx.kind) {
    case NodeKind::kTrafficLight:
      if (ctx.teleport && ctx.spat->PhaseAt(*ctx.signal, x.t) == Phase::kRed) {
        return ctx.spat->NextGreenStart(*ctx.signal, x.t);
      }
      return x.t;
    case NodeKind::kStopSign:
      return x.t + ctx.stop_dwell;
    case NodeKind::kPlain:
      break;
  }
  return x.t;
}

PropagationResult PropagateState(const StateVector& x, const ActionVector& u, double step,
                                 double grade, const NodeContext& ctx, const Powertrain& pt) {
  PropagationResult out;
  const MoveResult m = EvaluateMove(x.v, u, step, grade, ctx.next_admits_stop, pt);
  out.status = m.status;
  out.clamped = m.clamped;
  out.fuel_clamped = m.fuel_clamped;
  out.next.v = m.v_next;
  if (m.status == MoveStatus::kZeroMeanVelocity) return out;
  const auto soc = SocAfterMove(x.soc, m.p_bat, m.move_time, pt.battery);
  if (!soc) {
    out.status = MoveStatus::kInfeasiblePower;
    return out;
  }
  const double departure = DepartureTime(x, ctx);
  out.wait = departure - x.t;
  out.move_time = m.move_time;
  out.fuel_g = m.fuel_rate * m.move_time;
  out.p_bat = m.p_bat;
  out.next.soc = *soc;
  out.next.t = departure + m.move_time;
  return out;
}

}  // namespace ecodrive
