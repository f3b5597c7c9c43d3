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
 * @file dp_core.hpp
 * @brief Serial reference dynamic programming over the (v, SoC, t) grid.
 *
 * The recursion is
 *   J_N(x)   = c_T(x) + phi_T(x)
 *   F_k(x,u) = c_k(x,u) + phi_k(x) + J_{k+1}(f_k(x,u))
 *   J_k(x)   = min_u F_k(x,u)
 * with hard constraints encoded as the sentinel J_inf. Tables are laid out
 * row-major (v, SoC, t) with t fastest.
 *
 * The per-(v, action) quantities are produced by MakeStepEntry and the
 * per-state action loop by ProcessRowSegment. Both backends call exactly
 * these two functions, which is what makes their tables bit-identical.
 **/

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ecodrive/grid.hpp"
#include "ecodrive/powertrain.hpp"

namespace ecodrive {

struct GridSizes {
  std::size_t n_v = 35;
  std::size_t n_soc = 26;
  std::size_t n_t = 40;
  std::size_t n_eng = 23;
  std::size_t n_bsg = 30;
};

struct PenaltyConfig {
  double j_inf = 1e6;
  double soc_weight = 5000.0;  // terminal (SoC - target)^2 weight, scaled by gamma
  double soc_target = 0.55;
  double time_weight = 0.0;    // terminal cost per second past the horizon base
};

/// Velocity-only part of a DP move, independent of SoC and time.
struct Transition {
  bool feasible = false;
  double v_next = 0.0;
  double move_time = 0.0;
  double fuel_rate = 0.0;
  double p_bat = 0.0;
};

/// Plant abstraction the DP optimizes over. Implementations must be pure.
class TransitionModel {
 public:
  virtual ~TransitionModel() = default;
  /// Move out of absolute route node `node` at speed v under action u.
  virtual Transition Evaluate(std::size_t node, double v, const ActionVector& u) const = 0;
  virtual std::optional<double> NextSoc(double soc, const Transition& tr) const = 0;
};

/// Node data sampled on the horizon time grid.
struct StepNode {
  std::vector<std::uint8_t> moving_ok;    // may a moving vehicle be here at sample m
  std::vector<double> stopped_departure;  // departure of a stopped vehicle; NaN if blocked
  std::vector<std::uint8_t> stopped_open;  // !isnan(stopped_departure[m])
  bool stopped_trivial = true;            // stopped_departure[m] == t_m for all m
};

/// Departure time of a vehicle in state x at horizon step k, nullopt when
/// the state violates a node constraint (moving through red, rolling a stop).
using DepartureFn = std::function<std::optional<double>(std::size_t step, const StateVector& x)>;
using TerminalFn = std::function<double(double v, double soc)>;

/// Everything one horizon solve needs, assembled once before the recursion.
struct HorizonProblem {
  const TransitionModel* model = nullptr;
  std::size_t first_node = 0;
  std::size_t steps = 0;
  std::vector<Axis> v_axes;  // steps + 1 axes, one per node in the horizon
  Axis soc_axis;
  TimeGrid time;
  Axis eng_axis;
  Axis bsg_axis;
  std::vector<StepNode> nodes;  // steps + 1
  DepartureFn departure;
  TerminalFn terminal;
  double gamma = 0.5;
  PenaltyConfig penalty;
  bool prefer_last_on_tie = false;  // debug: perturbed tie-breaking

  std::size_t ActionCount() const { return eng_axis.size() * bsg_axis.size(); }
  ActionVector Action(std::size_t a) const {
    return {eng_axis[a / bsg_axis.size()], bsg_axis[a % bsg_axis.size()]};
  }
  std::size_t StateCount(std::size_t step) const {
    return v_axes[step].size() * soc_axis.size() * time.count;
  }
  /// Samples `departure` on the time grid to fill `nodes`.
  void FillStepNodes();
  void Validate() const;
};

struct CostToGoTable {
  std::size_t step = 0;
  std::size_t n_v = 0;
  std::size_t n_soc = 0;
  std::size_t n_t = 0;
  std::vector<double> values;

  std::size_t Index(std::size_t iv, std::size_t is, std::size_t m) const {
    return (iv * n_soc + is) * n_t + m;
  }
  double At(std::size_t iv, std::size_t is, std::size_t m) const { return values[Index(iv, is, m)]; }
};

struct PolicyTable {
  static constexpr std::int32_t kUndefined = -1;

  std::size_t step = 0;
  std::size_t n_v = 0;
  std::size_t n_soc = 0;
  std::size_t n_t = 0;
  std::size_t n_bsg = 1;
  std::vector<std::int32_t> action;  // flat action index, T_eng-major

  std::int32_t At(std::size_t iv, std::size_t is, std::size_t m) const {
    return action[(iv * n_soc + is) * n_t + m];
  }
  /// (T_eng index, T_bsg index) or nullopt where the policy is undefined.
  std::optional<std::pair<std::size_t, std::size_t>> Pair(std::size_t iv, std::size_t is,
                                                         std::size_t m) const;
};

/// Stage-1 record for one (v node, action) pair.
struct StepEntry {
  bool feasible = false;
  Transition tr;
  Bracket v_next;       // on the next step's v-axis
  double cost = 0.0;    // stage cost of the move
  std::size_t t_off = 0;  // plain-row time shift on the grid: off + w
  double t_w = 0.0;
};

class StartStateInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StartDecision {
  std::size_t action_index = 0;
  ActionVector action;
  double cost = 0.0;
  StateVector predicted;
};

struct HorizonSolution {
  std::vector<CostToGoTable> cost_to_go;  // steps + 1, the last one terminal
  std::vector<PolicyTable> policy;        // steps
  StartDecision start;
};

/// (gamma * fuel + (1 - gamma)) * dt.
double StageCost(double fuel_rate, double dt, double gamma);

/// Trilinear interpolation; J_inf if any corner with non-zero weight is
/// J_inf, J_inf outside the grid hull.
double InterpolateValue(const CostToGoTable& table, const Axis& v_axis, const Axis& soc_axis,
                        const TimeGrid& time, const StateVector& x, double j_inf);

StepEntry MakeStepEntry(const HorizonProblem& p, std::size_t step, double v, std::size_t action);

/// Minimizes over the action grid for the states (iv, is, m), m in [m0, m1).
/// `entries` holds MakeStepEntry for v node iv and every action.
void ProcessRowSegment(const HorizonProblem& p, std::size_t step, std::size_t iv,
                       std::size_t is, std::size_t m0, std::size_t m1,
                       std::span<const StepEntry> entries, const CostToGoTable& next,
                       CostToGoTable& out, PolicyTable& policy);

CostToGoTable MakeTable(const HorizonProblem& p, std::size_t step, double fill);
PolicyTable MakePolicy(const HorizonProblem& p, std::size_t step);

CostToGoTable TerminalTable(const HorizonProblem& p);

/// One backward recursion step, serial: loops v, SoC, T_eng, T_bsg, t.
std::pair<CostToGoTable, PolicyTable> BackwardStep(const CostToGoTable& next, std::size_t step,
                                                   const HorizonProblem& p);

/// Minimizes F_0 at the exact (off-grid) start state against J_1. Throws
/// StartStateInfeasible when every action is infeasible.
StartDecision EvaluateStart(const HorizonProblem& p, const CostToGoTable& next,
                            const StateVector& x);

HorizonSolution SolveHorizon(const StateVector& x, const HorizonProblem& p);

/// F_k(x, u) at grid state (iv, is, m) for one action, recomputed from
/// scratch. Used to check Bellman consistency of stored tables.
double ReevaluateNode(const HorizonProblem& p, std::size_t step, std::size_t iv,
                      std::size_t is, std::size_t m, std::size_t action,
                      const CostToGoTable& next);

/// FNV-1a over the value and policy arrays.
std::uint64_t TableDigest(const CostToGoTable& table, const PolicyTable* policy = nullptr);

/// Little-endian dump: "EDPT", u32 version, u32 step, u32 n_v, u32 n_soc,
/// u32 n_t, f64 values[n], i32 policy[n] (policy omitted when null and
/// flagged by version 2).
void WriteTableDump(std::ostream& os, const CostToGoTable& table, const PolicyTable* policy);

}  // namespace ecodrive
