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
 * @file mpc.hpp
 * @brief Receding-horizon eco-driving controller and closed-loop simulation.
 **/

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "ecodrive/dp_core.hpp"
#include "ecodrive/powertrain.hpp"
#include "ecodrive/route_spat.hpp"

namespace ecodrive {

struct SolverSettings {
  GridSizes grid;
  double gamma = 0.5;
  std::size_t horizon_steps = 20;
  double horizon_time = 80.0;  // t_f, s
  PenaltyConfig penalty;
  bool teleport = true;
  bool prefer_last_on_tie = false;
};

/// Powertrain + route as a DP transition model. Route constraints that do
/// not depend on SoC or time (torque box, acceleration band, stop
/// admissibility, next-node speed limits) are checked here.
class EcoDrivingModel : public TransitionModel {
 public:
  EcoDrivingModel(const Powertrain& pt, const Route& route) : pt_(pt), route_(route) {}

  Transition Evaluate(std::size_t node, double v, const ActionVector& u) const override;
  std::optional<double> NextSoc(double soc, const Transition& tr) const override;

  const Powertrain& powertrain() const { return pt_; }
  const Route& route() const { return route_; }

 private:
  const Powertrain& pt_;
  const Route& route_;
};

Axis NodeSpeedAxis(const Route& route, std::size_t node, std::size_t n_v);
Axis SocAxis(const BatteryModel& battery, std::size_t n_soc);
Axis EngineTorqueAxis(const EngineModel& engine, std::size_t n_eng);
Axis BsgTorqueAxis(const BsgModel& bsg, std::size_t n_bsg);

/// Offline full-route cost-to-go over (v, SoC) with signals treated as
/// always green. Seeds the receding-horizon terminal cost.
struct TerminalCostField {
  std::string route_id;
  double gamma = 0.0;
  double j_inf = 1e6;
  std::vector<Axis> v_axes;  // per route node
  Axis soc_axis;
  std::vector<std::vector<double>> values;  // per node, (v, SoC) row-major

  /// Bilinear, J_inf-absorbing, J_inf outside the grid.
  double Eval(std::size_t node, double v, double soc) const;
  double At(std::size_t node, std::size_t iv, std::size_t is) const {
    return values[node][iv * soc_axis.size() + is];
  }
};

/// gamma * w * (soc - target)^2: SoC neutrality at the destination.
double TerminalSocPenalty(double soc, const SolverSettings& s);

TerminalCostField BuildTerminalCost(const Route& route, const Powertrain& pt,
                                    const SolverSettings& settings, std::size_t workers = 1);

/// Wires route, signals and the terminal field into a DP horizon starting
/// at `node` with the vehicle at time t_s. Shrinks near the destination.
HorizonProblem MakeHorizonProblem(const RouteBundle& bundle, const EcoDrivingModel& model,
                                  const TerminalCostField& terminal, std::size_t node,
                                  double t_s, const SolverSettings& settings);

enum class Backend { kSerial, kParallel };
const char* BackendName(Backend b);

class Controller {
 public:
  virtual ~Controller() = default;
  virtual ActionVector Decide(const StateVector& x, std::size_t node) = 0;
  virtual std::string Tag() const = 0;
  /// Wall time of the last decision's optimization, ms (0 when none).
  virtual double LastSolveMs() const { return 0.0; }
  virtual bool LastWasFallback() const { return false; }
};

/// Per-step comparison of the two backends' tables.
struct BackendDiff {
  std::size_t node = 0;
  double max_abs_diff = 0.0;
  std::size_t policy_mismatches = 0;
  bool start_action_equal = true;
  std::vector<std::uint64_t> serial_digests;
  std::vector<std::uint64_t> parallel_digests;
};

BackendDiff CompareSolutions(const HorizonSolution& serial, const HorizonSolution& parallel);

struct MpcOptions {
  SolverSettings settings;
  Backend backend = Backend::kSerial;
  std::size_t workers = 1;
  bool cross_check = false;  // solve with both backends every step and diff
  bool record_digests = false;
  bool perturb_parallel_ties = false;  // negative control for the diff harness
};

struct MpcDecision {
  ActionVector action;
  bool fallback = false;
  double solve_ms = 0.0;
  double cost = 0.0;
  StateVector predicted;
};

class MpcController : public Controller {
 public:
  MpcController(const RouteBundle& bundle, const Powertrain& pt, MpcOptions options,
                std::shared_ptr<const TerminalCostField> terminal);

  /// One receding-horizon decision at route node s.
  MpcDecision Step(const StateVector& x, std::size_t node);

  ActionVector Decide(const StateVector& x, std::size_t node) override;
  std::string Tag() const override { return "mpc"; }
  double LastSolveMs() const override { return last_.solve_ms; }
  bool LastWasFallback() const override { return last_.fallback; }

  const std::vector<BackendDiff>& diffs() const { return diffs_; }
  const std::vector<std::uint64_t>& digests() const { return digests_; }
  const MpcOptions& options() const { return options_; }
  std::size_t fallback_count() const { return fallbacks_; }

 private:
  ActionVector MaximumBraking(const StateVector& x, std::size_t node) const;

  const RouteBundle& bundle_;
  const Powertrain& pt_;
  MpcOptions options_;
  std::shared_ptr<const TerminalCostField> terminal_;
  EcoDrivingModel model_;
  MpcDecision last_;
  std::vector<BackendDiff> diffs_;
  std::vector<std::uint64_t> digests_;
  std::size_t fallbacks_ = 0;
};

struct TrajectoryRecord {
  std::size_t node = 0;
  double position = 0.0;
  StateVector state;
  double departure = 0.0;
  ActionVector action;
  double fuel_g = 0.0;
  double solve_ms = 0.0;
  bool fallback = false;
  std::string backend;
};

struct ClosedLoopTrajectory {
  std::string controller;
  std::vector<TrajectoryRecord> records;  // one per node; last has no action
  double total_fuel = 0.0;
  bool completed = true;
  std::string diagnostic;

  double TravelTime() const { return records.empty() ? 0.0 : records.back().state.t; }
  double SocStart() const { return records.empty() ? 0.0 : records.front().state.soc; }
  double SocEnd() const { return records.empty() ? 0.0 : records.back().state.soc; }
};

ClosedLoopTrajectory SimulateClosedLoop(const RouteBundle& bundle, const Powertrain& pt,
                                        Controller& controller, const StateVector& x1);

/// Column order: node,position_m,velocity_mps,soc,time_s,departure_s,
/// t_eng_nm,t_bsg_nm,fuel_g,cumulative_fuel_g,fallback
void WriteTrajectoryCsv(std::ostream& os, const ClosedLoopTrajectory& traj);
/// Inverse of WriteTrajectoryCsv (solve times and backend are not stored
/// there and come back empty). Throws std::runtime_error on malformed input.
ClosedLoopTrajectory ReadTrajectoryCsv(std::istream& is, const std::string& controller);
/// Column order: node,solve_ms,backend
void WriteTimingCsv(std::ostream& os, const ClosedLoopTrajectory& traj);

struct ComplianceReport {
  std::size_t red_crossings = 0;
  std::size_t signal_crossings = 0;
  std::size_t stop_sign_violations = 0;
  std::size_t speed_violations = 0;
  std::size_t soc_violations = 0;
  std::size_t accel_violations = 0;

  bool Clean() const {
    return red_crossings + stop_sign_violations + speed_violations + soc_violations +
               accel_violations ==
           0;
  }
};

/// Post-hoc check of a trajectory against the route: every signal crossing
/// must happen on green (departure time for a vehicle that stopped there).
ComplianceReport CheckCompliance(const ClosedLoopTrajectory& traj, const RouteBundle& bundle,
                                 const Powertrain& pt, double tol = 1e-9);

}  // namespace ecodrive
