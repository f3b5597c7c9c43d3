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

#include "ecodrive/mpc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "ecodrive/dp_parallel.hpp"

namespace ecodrive {

namespace {

Axis SafeLinspace(double lo, double hi, std::size_t n) {
  if (lo == hi || n == 1) return Axis({lo});
  return Axis::Linspace(lo, hi, n);
}

double AbsorbingBilinear(double a0, double a1, double b0, double b1, double ws, double wv,
                         double j_inf) {
  if (std::max(std::max(a0, a1), std::max(b0, b1)) >= j_inf) return j_inf;
  return Blend(Blend(a0, a1, ws), Blend(b0, b1, ws), wv);
}

double Now() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

void AppendCsvNumber(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

// ---------------------------------------------------------------------------

Transition EcoDrivingModel::Evaluate(std::size_t node, double v, const ActionVector& u) const {
  Transition tr;
  if (node + 1 >= route_.node_count()) return tr;
  if (!ActionLimits(v, pt_).Contains(u)) return tr;
  const MoveResult m = EvaluateMove(v, u, route_.step, route_.grade[node],
                                    route_.AdmitsStop(node + 1), pt_);
  if (m.status != MoveStatus::kOk) return tr;
  const double accel = (m.v_next * m.v_next - v * v) / (2.0 * route_.step);
  if (accel < route_.accel_min || accel > route_.accel_max) return tr;
  if (m.v_next < route_.v_min[node + 1] || m.v_next > route_.v_max[node + 1]) return tr;
  tr.feasible = true;
  tr.v_next = m.v_next;
  tr.move_time = m.move_time;
  tr.fuel_rate = m.fuel_rate;
  tr.p_bat = m.p_bat;
  return tr;
}

std::optional<double> EcoDrivingModel::NextSoc(double soc, const Transition& tr) const {
  return SocAfterMove(soc, tr.p_bat, tr.move_time, pt_.battery);
}

Axis NodeSpeedAxis(const Route& route, std::size_t node, std::size_t n_v) {
  return SafeLinspace(route.v_min[node], route.v_max[node], n_v);
}

Axis SocAxis(const BatteryModel& battery, std::size_t n_soc) {
  return SafeLinspace(battery.soc_min, battery.soc_max, n_soc);
}

Axis EngineTorqueAxis(const EngineModel& engine, std::size_t n_eng) {
  return SafeLinspace(engine.torque_min.Min(), engine.torque_max.Max(), n_eng);
}

Axis BsgTorqueAxis(const BsgModel& bsg, std::size_t n_bsg) {
  return SafeLinspace(bsg.torque_min.Min(), bsg.torque_max.Max(), n_bsg);
}

// ---------------------------------------------------------------------------

double TerminalCostField::Eval(std::size_t node, double v, double soc) const {
  const auto bv = v_axes[node].Locate(v);
  const auto bs = soc_axis.Locate(soc);
  if (!bv || !bs) return j_inf;
  return AbsorbingBilinear(At(node, bv->lo, bs->lo), At(node, bv->lo, bs->hi),
                           At(node, bv->hi, bs->lo), At(node, bv->hi, bs->hi), bs->w, bv->w,
                           j_inf);
}

double TerminalSocPenalty(double soc, const SolverSettings& s) {
  const double d = soc - s.penalty.soc_target;
  return s.gamma * s.penalty.soc_weight * d * d;
}

TerminalCostField BuildTerminalCost(const Route& route, const Powertrain& pt,
                                    const SolverSettings& settings, std::size_t workers) {
  const std::size_t n = route.node_count();
  if (n == 0) throw std::invalid_argument("route has no nodes");
  const double j_inf = settings.penalty.j_inf;
  const double gamma = settings.gamma;

  TerminalCostField field;
  field.route_id = route.name;
  field.gamma = gamma;
  field.j_inf = j_inf;
  field.soc_axis = SocAxis(pt.battery, settings.grid.n_soc);
  for (std::size_t s = 0; s < n; ++s) field.v_axes.push_back(NodeSpeedAxis(route, s, settings.grid.n_v));
  field.values.resize(n);

  const Axis& sa = field.soc_axis;
  const std::size_t ns = sa.size();
  {
    const Axis& va = field.v_axes[n - 1];
    auto& dest = field.values[n - 1];
    dest.resize(va.size() * ns);
    for (std::size_t iv = 0; iv < va.size(); ++iv) {
      for (std::size_t is = 0; is < ns; ++is) {
        const double c = TerminalSocPenalty(sa[is], settings);
        dest[iv * ns + is] = c >= j_inf ? j_inf : c;
      }
    }
  }

  const EcoDrivingModel model(pt, route);
  const Axis eng = EngineTorqueAxis(pt.engine, settings.grid.n_eng);
  const Axis bsg = BsgTorqueAxis(pt.bsg, settings.grid.n_bsg);
  const std::size_t n_actions = eng.size() * bsg.size();
  const int threads = static_cast<int>(std::max<std::size_t>(workers, 1));

  for (std::size_t s = n - 1; s-- > 0;) {
    const Axis& va = field.v_axes[s];
    const Axis& vn = field.v_axes[s + 1];
    const auto& next = field.values[s + 1];
    auto& out = field.values[s];
    out.assign(va.size() * ns, j_inf);
    const NodeKind kind = route.Kind(s);
    const auto nv = static_cast<long>(va.size());

#pragma omp parallel for num_threads(threads) schedule(static, 1)
    for (long iv_l = 0; iv_l < nv; ++iv_l) {
      const auto iv = static_cast<std::size_t>(iv_l);
      const double v = va[iv];
      // Signals are treated as always green here; stop signs still bind.
      if (kind == NodeKind::kStopSign && v != 0.0) continue;
      const double wait_cost =
          kind == NodeKind::kStopSign ? StageCost(0.0, route.stop_dwell, gamma) : 0.0;
      for (std::size_t a = 0; a < n_actions; ++a) {
        const ActionVector u{eng[a / bsg.size()], bsg[a % bsg.size()]};
        const Transition tr = model.Evaluate(s, v, u);
        if (!tr.feasible) continue;
        const auto bv = vn.Locate(tr.v_next);
        if (!bv) continue;
        const double stage = StageCost(tr.fuel_rate, tr.move_time, gamma);
        for (std::size_t is = 0; is < ns; ++is) {
          const auto soc_next = model.NextSoc(sa[is], tr);
          if (!soc_next) continue;
          const auto bs = sa.Locate(*soc_next);
          if (!bs) continue;
          const double r = AbsorbingBilinear(
              next[bv->lo * ns + bs->lo], next[bv->lo * ns + bs->hi], next[bv->hi * ns + bs->lo],
              next[bv->hi * ns + bs->hi], bs->w, bv->w, j_inf);
          if (r >= j_inf) continue;
          const double f = (stage + wait_cost) + r;
          double& best = out[iv * ns + is];
          if (f < best) best = f;
        }
      }
    }
  }
  return field;
}

// ---------------------------------------------------------------------------

HorizonProblem MakeHorizonProblem(const RouteBundle& bundle, const EcoDrivingModel& model,
                                  const TerminalCostField& terminal, std::size_t node,
                                  double t_s, const SolverSettings& settings) {
  const Route& route = bundle.route;
  const std::size_t n = route.node_count();
  if (node + 1 >= n) throw std::invalid_argument("no route left after this node");
  if (terminal.values.size() != n) throw std::invalid_argument("terminal field does not cover the route");

  HorizonProblem p;
  p.model = &model;
  p.first_node = node;
  p.steps = std::min(settings.horizon_steps, n - 1 - node);
  for (std::size_t k = 0; k <= p.steps; ++k) {
    p.v_axes.push_back(NodeSpeedAxis(route, node + k, settings.grid.n_v));
  }
  p.soc_axis = SocAxis(model.powertrain().battery, settings.grid.n_soc);
  const double dt = settings.horizon_time / static_cast<double>(settings.grid.n_t);
  p.time = TimeGrid{SnapHorizonBase(t_s, dt) + dt, dt, settings.grid.n_t};
  p.eng_axis = EngineTorqueAxis(model.powertrain().engine, settings.grid.n_eng);
  p.bsg_axis = BsgTorqueAxis(model.powertrain().bsg, settings.grid.n_bsg);
  p.gamma = settings.gamma;
  p.penalty = settings.penalty;
  p.prefer_last_on_tie = settings.prefer_last_on_tie;

  const RouteBundle* b = &bundle;
  const bool teleport = settings.teleport;
  p.departure = [b, node, teleport](std::size_t step,
                                    const StateVector& x) -> std::optional<double> {
    const std::size_t s = node + step;
    switch (b->route.Kind(s)) {
      case NodeKind::kPlain:
        return x.t;
      case NodeKind::kStopSign:
        if (x.v != 0.0) return std::nullopt;
        return x.t + b->route.stop_dwell;
      case NodeKind::kTrafficLight: {
        const std::string& id = *b->route.SignalAt(s);
        if (b->spat.PhaseAt(id, x.t) == Phase::kGreen) return x.t;
        if (x.v != 0.0 || !teleport) return std::nullopt;
        return b->spat.NextGreenStart(id, x.t);
      }
    }
    return std::nullopt;
  };
  const TerminalCostField* field = &terminal;
  const std::size_t last = node + p.steps;
  p.terminal = [field, last](double v, double soc) { return field->Eval(last, v, soc); };
  p.FillStepNodes();
  return p;
}

const char* BackendName(Backend b) { return b == Backend::kSerial ? "serial" : "parallel"; }

BackendDiff CompareSolutions(const HorizonSolution& serial, const HorizonSolution& parallel) {
  BackendDiff d;
  if (serial.cost_to_go.size() != parallel.cost_to_go.size()) {
    throw std::invalid_argument("solutions have different horizon lengths");
  }
  for (std::size_t k = 0; k < serial.cost_to_go.size(); ++k) {
    const auto& a = serial.cost_to_go[k].values;
    const auto& b = parallel.cost_to_go[k].values;
    if (a.size() != b.size()) throw std::invalid_argument("table size mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) {
      d.max_abs_diff = std::max(d.max_abs_diff, std::abs(a[i] - b[i]));
    }
    const bool has_policy = k < serial.policy.size();
    d.serial_digests.push_back(
        TableDigest(serial.cost_to_go[k], has_policy ? &serial.policy[k] : nullptr));
    d.parallel_digests.push_back(
        TableDigest(parallel.cost_to_go[k], has_policy ? &parallel.policy[k] : nullptr));
    if (!has_policy) continue;
    const auto& pa = serial.policy[k].action;
    const auto& pb = parallel.policy[k].action;
    for (std::size_t i = 0; i < pa.size(); ++i) d.policy_mismatches += pa[i] != pb[i] ? 1 : 0;
  }
  d.start_action_equal = serial.start.action_index == parallel.start.action_index;
  return d;
}

// ---------------------------------------------------------------------------

MpcController::MpcController(const RouteBundle& bundle, const Powertrain& pt,
                             MpcOptions options,
                             std::shared_ptr<const TerminalCostField> terminal)
    : bundle_(bundle),
      pt_(pt),
      options_(std::move(options)),
      terminal_(std::move(terminal)),
      model_(pt, bundle.route) {
  if (!terminal_) throw std::invalid_argument("MPC needs a terminal cost field");
  if (options_.workers == 0) options_.workers = 1;
}

MpcDecision MpcController::Step(const StateVector& x, std::size_t node) {
  MpcDecision out;
  const HorizonProblem p =
      MakeHorizonProblem(bundle_, model_, *terminal_, node, x.t, options_.settings);

  auto solve = [&](Backend b, const HorizonProblem& prob) {
    return b == Backend::kSerial ? SolveHorizon(x, prob)
                                 : SolveHorizonParallel(x, prob, options_.workers);
  };

  // The tie-breaking perturbation, a negative control, only touches the
  // parallel backend.
  HorizonProblem perturbed;
  const HorizonProblem* par = &p;
  if (options_.perturb_parallel_ties) {
    perturbed = p;
    perturbed.prefer_last_on_tie = true;
    par = &perturbed;
  }
  const HorizonProblem& own = options_.backend == Backend::kSerial ? p : *par;

  try {
    const double t0 = Now();
    HorizonSolution sol = solve(options_.backend, own);
    out.solve_ms = Now() - t0;
    if (options_.cross_check) {
      const Backend other =
          options_.backend == Backend::kSerial ? Backend::kParallel : Backend::kSerial;
      HorizonSolution alt = solve(other, other == Backend::kSerial ? p : *par);
      BackendDiff d = options_.backend == Backend::kSerial ? CompareSolutions(sol, alt)
                                                           : CompareSolutions(alt, sol);
      d.node = node;
      diffs_.push_back(std::move(d));
    }
    if (options_.record_digests) {
      for (std::size_t k = 0; k < sol.cost_to_go.size(); ++k) {
        digests_.push_back(TableDigest(sol.cost_to_go[k],
                                       k < sol.policy.size() ? &sol.policy[k] : nullptr));
      }
    }
    out.action = sol.start.action;
    out.cost = sol.start.cost;
    out.predicted = sol.start.predicted;
  } catch (const StartStateInfeasible&) {
    out.fallback = true;
    out.action = MaximumBraking(x, node);
    ++fallbacks_;
    std::fprintf(stderr, "mpc: infeasible start at node %zu (v=%.3f soc=%.4f t=%.2f), braking\n",
                 node, x.v, x.soc, x.t);
  }
  last_ = out;
  return out;
}

ActionVector MpcController::Decide(const StateVector& x, std::size_t node) {
  return Step(x, node).action;
}

ActionVector MpcController::MaximumBraking(const StateVector& x, std::size_t node) const {
  const Route& route = bundle_.route;
  const SolverSettings& s = options_.settings;
  const Axis eng = EngineTorqueAxis(pt_.engine, s.grid.n_eng);
  const Axis bsg = BsgTorqueAxis(pt_.bsg, s.grid.n_bsg);
  const TorqueLimits lim = ActionLimits(x.v, pt_);
  ActionVector best{lim.eng_min, 0.0};
  double best_v = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < eng.size(); ++i) {
    for (std::size_t j = 0; j < bsg.size(); ++j) {
      const ActionVector u{eng[i], bsg[j]};
      if (!lim.Contains(u)) continue;
      const MoveResult m =
          EvaluateMove(x.v, u, route.step, route.grade[node], route.AdmitsStop(node + 1), pt_);
      if (m.status != MoveStatus::kOk) continue;
      const auto soc = SocAfterMove(x.soc, m.p_bat, m.move_time, pt_.battery);
      if (!soc || *soc < pt_.battery.soc_min || *soc > pt_.battery.soc_max) continue;
      if (m.v_next < best_v) {
        best_v = m.v_next;
        best = u;
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------

ClosedLoopTrajectory SimulateClosedLoop(const RouteBundle& bundle, const Powertrain& pt,
                                        Controller& controller, const StateVector& x1) {
  ClosedLoopTrajectory traj;
  traj.controller = controller.Tag();
  const Route& route = bundle.route;
  const std::size_t n = route.node_count();
  if (n <= 1) return traj;

  StateVector x = x1;
  for (std::size_t s = 0; s + 1 < n; ++s) {
    TrajectoryRecord rec;
    rec.node = s;
    rec.position = route.Position(s);
    rec.state = x;
    rec.action = controller.Decide(x, s);
    rec.solve_ms = controller.LastSolveMs();
    rec.fallback = controller.LastWasFallback();
    rec.backend = controller.Tag();
    const NodeContext ctx = MakeNodeContext(s, route, bundle.spat);
    const PropagationResult r =
        PropagateState(x, rec.action, route.step, route.grade[s], ctx, pt);
    if (!r.ok()) {
      traj.completed = false;
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "infeasible plant state leaving node %zu (v=%.4f soc=%.5f t=%.3f)", s, x.v,
                    x.soc, x.t);
      traj.diagnostic = buf;
      traj.records.push_back(rec);
      return traj;
    }
    rec.departure = x.t + r.wait;
    rec.fuel_g = r.fuel_g;
    traj.total_fuel += r.fuel_g;
    traj.records.push_back(rec);
    x = r.next;
  }
  TrajectoryRecord end;
  end.node = n - 1;
  end.position = route.Position(n - 1);
  end.state = x;
  end.departure = x.t;
  end.backend = controller.Tag();
  traj.records.push_back(end);
  return traj;
}

void WriteTrajectoryCsv(std::ostream& os, const ClosedLoopTrajectory& traj) {
  os << "node,position_m,velocity_mps,soc,time_s,departure_s,t_eng_nm,t_bsg_nm,fuel_g,"
        "cumulative_fuel_g,fallback\n";
  double cum = 0.0;
  std::string line;
  for (const auto& r : traj.records) {
    cum += r.fuel_g;
    line.clear();
    line += std::to_string(r.node);
    for (double v : {r.position, r.state.v, r.state.soc, r.state.t, r.departure, r.action.t_eng,
                     r.action.t_bsg, r.fuel_g, cum}) {
      line += ',';
      AppendCsvNumber(line, v);
    }
    line += r.fallback ? ",1\n" : ",0\n";
    os << line;
  }
}

ClosedLoopTrajectory ReadTrajectoryCsv(std::istream& is, const std::string& controller) {
  ClosedLoopTrajectory traj;
  traj.controller = controller;
  std::string line;
  if (!std::getline(is, line) || line.rfind("node,", 0) != 0) {
    throw std::runtime_error("trajectory CSV: missing header");
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> f;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t comma = std::min(line.find(',', pos), line.size());
      f.push_back(std::strtod(line.c_str() + pos, nullptr));
      pos = comma + 1;
    }
    if (f.size() != 11) throw std::runtime_error("trajectory CSV: expected 11 columns");
    TrajectoryRecord r;
    r.node = static_cast<std::size_t>(f[0]);
    r.position = f[1];
    r.state = {f[2], f[3], f[4]};
    r.departure = f[5];
    r.action = {f[6], f[7]};
    r.fuel_g = f[8];
    r.fallback = f[10] != 0.0;
    traj.total_fuel += r.fuel_g;
    traj.records.push_back(r);
  }
  return traj;
}

void WriteTimingCsv(std::ostream& os, const ClosedLoopTrajectory& traj) {
  os << "node,solve_ms,backend\n";
  std::string line;
  for (std::size_t i = 0; i + 1 < traj.records.size(); ++i) {
    const auto& r = traj.records[i];
    line = std::to_string(r.node) + ',';
    AppendCsvNumber(line, r.solve_ms);
    line += ',' + r.backend + '\n';
    os << line;
  }
}

ComplianceReport CheckCompliance(const ClosedLoopTrajectory& traj, const RouteBundle& bundle,
                                 const Powertrain& pt, double tol) {
  ComplianceReport rep;
  const Route& route = bundle.route;
  const auto& recs = traj.records;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const TrajectoryRecord& r = recs[i];
    const std::size_t s = r.node;
    const bool departs = i + 1 < recs.size();
    if (r.state.v < route.v_min[s] - tol || r.state.v > route.v_max[s] + tol) {
      ++rep.speed_violations;
    }
    if (r.state.soc < pt.battery.soc_min - tol || r.state.soc > pt.battery.soc_max + tol) {
      ++rep.soc_violations;
    }
    if (!departs) continue;
    switch (route.Kind(s)) {
      case NodeKind::kTrafficLight:
        ++rep.signal_crossings;
        if (bundle.spat.PhaseAt(*route.SignalAt(s), r.departure) != Phase::kGreen) {
          ++rep.red_crossings;
        }
        break;
      case NodeKind::kStopSign:
        if (r.state.v != 0.0 || r.departure < r.state.t + route.stop_dwell - tol) {
          ++rep.stop_sign_violations;
        }
        break;
      case NodeKind::kPlain:
        break;
    }
    const double vn = recs[i + 1].state.v;
    const double a = (vn * vn - r.state.v * r.state.v) / (2.0 * route.step);
    if (a < route.accel_min - tol || a > route.accel_max + tol) ++rep.accel_violations;
  }
  return rep;
}

}  // namespace ecodrive
