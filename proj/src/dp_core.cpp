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

#include "ecodrive/dp_core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

namespace ecodrive {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Blend over (SoC, v) at one time index, and the largest of its corners.
inline double PlaneBlend(const double* p00, const double* p01, const double* p10,
                         const double* p11, std::size_t i, double ws, double wv) {
  return Blend(Blend(p00[i], p01[i], ws), Blend(p10[i], p11[i], ws), wv);
}
inline double Max(double a, double b) { return a < b ? b : a; }
inline double PlaneMax(const double* p00, const double* p01, const double* p10,
                       const double* p11, std::size_t i) {
  return Max(Max(p00[i], p01[i]), Max(p10[i], p11[i]));
}

void FillPlane(const double* __restrict p00, const double* __restrict p01,
               const double* __restrict p10, const double* __restrict p11, std::size_t i0,
               std::size_t i1, double ws, double wv, double* __restrict plane,
               double* __restrict plane_max) {
  for (std::size_t i = i0; i < i1; ++i) {
    plane[i] = PlaneBlend(p00, p01, p10, p11, i, ws, wv);
    plane_max[i] = PlaneMax(p00, p01, p10, p11, i);
  }
}

/// Eight-corner blend: SoC, then v, then t. Corners with zero weight alias
/// their partner, so the max only sees active corners.
inline double Trilinear(const double* p00, const double* p01, const double* p10,
                        const double* p11, std::size_t i0, std::size_t i1, double wt,
                        double ws, double wv, double j_inf) {
  const double mx = std::max(PlaneMax(p00, p01, p10, p11, i0), PlaneMax(p00, p01, p10, p11, i1));
  if (mx >= j_inf) return j_inf;
  return Blend(PlaneBlend(p00, p01, p10, p11, i0, ws, wv),
               PlaneBlend(p00, p01, p10, p11, i1, ws, wv), wt);
}

inline bool Better(double f, double best, bool prefer_last) {
  return prefer_last ? f <= best : f < best;
}

void Fnv(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* b = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= b[i];
    h *= 1099511628211ULL;
  }
}

template <typename T>
void PutLe(std::ostream& os, T value) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

}  // namespace

void HorizonProblem::FillStepNodes() {
  nodes.assign(steps + 1, StepNode{});
  for (std::size_t k = 0; k <= steps; ++k) {
    StepNode& n = nodes[k];
    n.moving_ok.resize(time.count);
    n.stopped_departure.resize(time.count);
    n.stopped_open.resize(time.count);
    for (std::size_t m = 0; m < time.count; ++m) {
      const double t = time.Sample(m);
      // Any positive speed stands for "moving"; constraints only look at v > 0.
      n.moving_ok[m] = departure(k, {1.0, soc_axis.front(), t}).has_value() ? 1 : 0;
      const auto dep = departure(k, {0.0, soc_axis.front(), t});
      n.stopped_departure[m] = dep ? *dep : kNaN;
      n.stopped_open[m] = dep ? 1 : 0;
      if (!dep || *dep != t) n.stopped_trivial = false;
    }
  }
}

void HorizonProblem::Validate() const {
  if (model == nullptr) throw std::invalid_argument("horizon problem has no model");
  if (steps == 0) throw std::invalid_argument("horizon needs at least one step");
  if (v_axes.size() != steps + 1 || nodes.size() != steps + 1) {
    throw std::invalid_argument("horizon needs steps + 1 v-axes and nodes");
  }
  if (time.count == 0 || !(time.step > 0.0)) throw std::invalid_argument("bad time grid");
  if (soc_axis.empty() || eng_axis.empty() || bsg_axis.empty()) {
    throw std::invalid_argument("empty SoC or action axis");
  }
  for (const auto& n : nodes) {
    if (n.moving_ok.size() != time.count || n.stopped_departure.size() != time.count ||
        n.stopped_open.size() != time.count) {
      throw std::invalid_argument("step node samples do not match the time grid");
    }
  }
  if (!terminal || !departure) throw std::invalid_argument("missing terminal or departure");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma outside [0, 1]");
}

std::optional<std::pair<std::size_t, std::size_t>> PolicyTable::Pair(std::size_t iv,
                                                                    std::size_t is,
                                                                    std::size_t m) const {
  const std::int32_t a = At(iv, is, m);
  if (a == kUndefined) return std::nullopt;
  const auto ua = static_cast<std::size_t>(a);
  return std::make_pair(ua / n_bsg, ua % n_bsg);
}

double StageCost(double fuel_rate, double dt, double gamma) {
  return (gamma * fuel_rate + (1.0 - gamma)) * dt;
}

double InterpolateValue(const CostToGoTable& tb, const Axis& v_axis, const Axis& soc_axis,
                        const TimeGrid& time, const StateVector& x, double j_inf) {
  const auto bv = v_axis.Locate(x.v);
  const auto bs = soc_axis.Locate(x.soc);
  const auto bt = time.Locate(x.t);
  if (!bv || !bs || !bt) return j_inf;
  const double* base = tb.values.data();
  return Trilinear(base + tb.Index(bv->lo, bs->lo, 0), base + tb.Index(bv->lo, bs->hi, 0),
                   base + tb.Index(bv->hi, bs->lo, 0), base + tb.Index(bv->hi, bs->hi, 0),
                   bt->lo, bt->hi, bt->w, bs->w, bv->w, j_inf);
}

StepEntry MakeStepEntry(const HorizonProblem& p, std::size_t step, double v, std::size_t action) {
  StepEntry e;
  e.tr = p.model->Evaluate(p.first_node + step, v, p.Action(action));
  if (!e.tr.feasible) return e;
  const auto bv = p.v_axes[step + 1].Locate(e.tr.v_next);
  if (!bv) return e;
  const double q = e.tr.move_time / p.time.step;
  const double f = std::floor(q);
  if (!(f < static_cast<double>(p.time.count))) return e;
  e.v_next = *bv;
  e.t_off = static_cast<std::size_t>(f);
  e.t_w = q - f;
  e.cost = StageCost(e.tr.fuel_rate, e.tr.move_time, p.gamma);
  e.feasible = true;
  return e;
}

CostToGoTable MakeTable(const HorizonProblem& p, std::size_t step, double fill) {
  CostToGoTable t;
  t.step = step;
  t.n_v = p.v_axes[step].size();
  t.n_soc = p.soc_axis.size();
  t.n_t = p.time.count;
  t.values.assign(t.n_v * t.n_soc * t.n_t, fill);
  return t;
}

PolicyTable MakePolicy(const HorizonProblem& p, std::size_t step) {
  PolicyTable t;
  t.step = step;
  t.n_v = p.v_axes[step].size();
  t.n_soc = p.soc_axis.size();
  t.n_t = p.time.count;
  t.n_bsg = p.bsg_axis.size();
  t.action.assign(t.n_v * t.n_soc * t.n_t, PolicyTable::kUndefined);
  return t;
}

void ProcessRowSegment(const HorizonProblem& p, std::size_t step, std::size_t iv,
                       std::size_t is, std::size_t m0, std::size_t m1,
                       std::span<const StepEntry> entries, const CostToGoTable& next,
                       CostToGoTable& out, PolicyTable& policy) {
  const double j_inf = p.penalty.j_inf;
  const std::size_t nt = p.time.count;
  const double soc = p.soc_axis[is];
  const StepNode& node = p.nodes[step];
  const bool stopped = p.v_axes[step][iv] == 0.0;
  const bool shifted = stopped && !node.stopped_trivial;
  const bool prefer_last = p.prefer_last_on_tie;
  const std::uint8_t* open = stopped ? node.stopped_open.data() : node.moving_ok.data();
  thread_local std::vector<double> plane, plane_max;
  if (plane.size() < nt) {
    plane.resize(nt);
    plane_max.resize(nt);
  }

  double* best = out.values.data() + out.Index(iv, is, 0);
  std::int32_t* arg = policy.action.data() + out.Index(iv, is, 0);
  for (std::size_t m = m0; m < m1; ++m) {
    best[m] = j_inf;
    arg[m] = PolicyTable::kUndefined;
  }

  // phi_k: states that violate a node constraint keep J_inf.
  bool any_open = false;
  for (std::size_t m = m0; m < m1 && !any_open; ++m) any_open = open[m] != 0;
  if (!any_open) return;

  const double* jn = next.values.data();
  const std::size_t n_actions = entries.size();
  for (std::size_t a = 0; a < n_actions; ++a) {
    const StepEntry& e = entries[a];
    if (!e.feasible) continue;
    const auto soc_next = p.model->NextSoc(soc, e.tr);
    if (!soc_next) continue;
    const auto bs = p.soc_axis.Locate(*soc_next);
    if (!bs) continue;
    const double* p00 = jn + next.Index(e.v_next.lo, bs->lo, 0);
    const double* p01 = jn + next.Index(e.v_next.lo, bs->hi, 0);
    const double* p10 = jn + next.Index(e.v_next.hi, bs->lo, 0);
    const double* p11 = jn + next.Index(e.v_next.hi, bs->hi, 0);
    const auto action = static_cast<std::int32_t>(a);

    if (!shifted) {
      // The time shift is the same for the whole row, so the (SoC, v) blend
      // of each next-table column is computed once and reused by the two
      // neighbouring t samples. Same arithmetic as Trilinear.
      const std::size_t bump = e.t_w > 0.0 ? 1 : 0;
      if (e.t_off + bump >= nt) continue;
      const std::size_t m_end = std::min(m1, nt - e.t_off - bump);
      if (m_end <= m0) continue;
      const std::size_t i_lo = m0 + e.t_off;
      const std::size_t i_hi = m_end - 1 + e.t_off + bump;  // inclusive
      FillPlane(p00, p01, p10, p11, i_lo, i_hi + 1, bs->w, e.v_next.w, plane.data(),
                plane_max.data());
      const double wt = e.t_w;
      const double cost = e.cost + 0.0;
      for (std::size_t m = m0; m < m_end; ++m) {
        if (open[m] == 0) continue;
        const std::size_t i0 = m + e.t_off;
        const std::size_t i1 = i0 + bump;
        if (std::max(plane_max[i0], plane_max[i1]) >= j_inf) continue;
        const double f = cost + Blend(plane[i0], plane[i1], wt);
        if (Better(f, best[m], prefer_last)) {
          best[m] = f;
          arg[m] = action;
        }
      }
    } else {
      for (std::size_t m = m0; m < m1; ++m) {
        const double dep = node.stopped_departure[m];
        if (std::isnan(dep)) continue;
        const double q = (dep + e.tr.move_time - p.time.first) / p.time.step;
        const double fl = std::floor(q);
        if (!(fl < static_cast<double>(nt))) continue;
        const auto i0 = static_cast<std::size_t>(fl);
        const double wt = q - fl;
        const std::size_t i1 = wt > 0.0 ? i0 + 1 : i0;
        if (i1 >= nt) continue;
        const double r = Trilinear(p00, p01, p10, p11, i0, i1, wt, bs->w, e.v_next.w, j_inf);
        if (r >= j_inf) continue;
        const double wait_cost = StageCost(0.0, dep - p.time.Sample(m), p.gamma);
        const double f = (e.cost + wait_cost) + r;
        if (Better(f, best[m], prefer_last)) {
          best[m] = f;
          arg[m] = action;
        }
      }
    }
  }
}

CostToGoTable TerminalTable(const HorizonProblem& p) {
  const std::size_t k = p.steps;
  CostToGoTable t = MakeTable(p, k, p.penalty.j_inf);
  const Axis& va = p.v_axes[k];
  for (std::size_t iv = 0; iv < va.size(); ++iv) {
    for (std::size_t is = 0; is < p.soc_axis.size(); ++is) {
      const double c = p.terminal(va[iv], p.soc_axis[is]);
      for (std::size_t m = 0; m < p.time.count; ++m) {
        double v = c;
        if (p.penalty.time_weight != 0.0) {
          v = c + p.penalty.time_weight * (p.time.Sample(m) - p.time.Base());
        }
        t.values[t.Index(iv, is, m)] = v >= p.penalty.j_inf ? p.penalty.j_inf : v;
      }
    }
  }
  return t;
}

std::pair<CostToGoTable, PolicyTable> BackwardStep(const CostToGoTable& next, std::size_t step,
                                                   const HorizonProblem& p) {
  CostToGoTable out = MakeTable(p, step, p.penalty.j_inf);
  PolicyTable policy = MakePolicy(p, step);
  const Axis& va = p.v_axes[step];
  const std::size_t n_actions = p.ActionCount();
  std::vector<StepEntry> entries(n_actions);
  for (std::size_t iv = 0; iv < va.size(); ++iv) {
    // v-only quantities are loop-invariant in SoC and t.
    for (std::size_t a = 0; a < n_actions; ++a) entries[a] = MakeStepEntry(p, step, va[iv], a);
    for (std::size_t is = 0; is < p.soc_axis.size(); ++is) {
      ProcessRowSegment(p, step, iv, is, 0, p.time.count, entries, next, out, policy);
    }
  }
  return {std::move(out), std::move(policy)};
}

StartDecision EvaluateStart(const HorizonProblem& p, const CostToGoTable& next,
                            const StateVector& x) {
  const double j_inf = p.penalty.j_inf;
  const auto dep = p.departure(0, x);
  if (!dep) throw StartStateInfeasible("start state violates a node constraint");
  const double wait_cost = StageCost(0.0, *dep - x.t, p.gamma);
  const Axis& v_next_axis = p.v_axes[1];
  StartDecision best;
  best.cost = j_inf;
  bool found = false;
  for (std::size_t a = 0; a < p.ActionCount(); ++a) {
    const ActionVector u = p.Action(a);
    const Transition tr = p.model->Evaluate(p.first_node, x.v, u);
    if (!tr.feasible) continue;
    const auto soc_next = p.model->NextSoc(x.soc, tr);
    if (!soc_next) continue;
    const StateVector xn{tr.v_next, *soc_next, *dep + tr.move_time};
    const double r = InterpolateValue(next, v_next_axis, p.soc_axis, p.time, xn, j_inf);
    if (r >= j_inf) continue;
    const double f = (StageCost(tr.fuel_rate, tr.move_time, p.gamma) + wait_cost) + r;
    if (!found || Better(f, best.cost, p.prefer_last_on_tie)) {
      found = true;
      best.action_index = a;
      best.action = u;
      best.cost = f;
      best.predicted = xn;
    }
  }
  if (!found) throw StartStateInfeasible("no admissible action from the start state");
  return best;
}

HorizonSolution SolveHorizon(const StateVector& x, const HorizonProblem& p) {
  p.Validate();
  HorizonSolution sol;
  sol.cost_to_go.resize(p.steps + 1);
  sol.policy.resize(p.steps);
  sol.cost_to_go[p.steps] = TerminalTable(p);
  for (std::size_t k = p.steps; k-- > 0;) {
    auto [j, mu] = BackwardStep(sol.cost_to_go[k + 1], k, p);
    sol.cost_to_go[k] = std::move(j);
    sol.policy[k] = std::move(mu);
  }
  sol.start = EvaluateStart(p, sol.cost_to_go[1], x);
  return sol;
}

double ReevaluateNode(const HorizonProblem& p, std::size_t step, std::size_t iv,
                      std::size_t is, std::size_t m, std::size_t action,
                      const CostToGoTable& next) {
  const double j_inf = p.penalty.j_inf;
  const double v = p.v_axes[step][iv];
  const double t = p.time.Sample(m);
  const StateVector x{v, p.soc_axis[is], t};
  const auto dep = p.departure(step, x);
  if (!dep) return j_inf;
  const Transition tr = p.model->Evaluate(p.first_node + step, v, p.Action(action));
  if (!tr.feasible) return j_inf;
  const auto soc_next = p.model->NextSoc(x.soc, tr);
  if (!soc_next) return j_inf;
  const StateVector xn{tr.v_next, *soc_next, *dep + tr.move_time};
  const double r = InterpolateValue(next, p.v_axes[step + 1], p.soc_axis, p.time, xn, j_inf);
  if (r >= j_inf) return j_inf;
  return (StageCost(tr.fuel_rate, tr.move_time, p.gamma) + StageCost(0.0, *dep - t, p.gamma)) +
         r;
}

std::uint64_t TableDigest(const CostToGoTable& table, const PolicyTable* policy) {
  std::uint64_t h = 14695981039346656037ULL;
  Fnv(h, table.values.data(), table.values.size() * sizeof(double));
  if (policy != nullptr) {
    Fnv(h, policy->action.data(), policy->action.size() * sizeof(std::int32_t));
  }
  return h;
}

void WriteTableDump(std::ostream& os, const CostToGoTable& table, const PolicyTable* policy) {
  os.write("EDPT", 4);
  PutLe<std::uint32_t>(os, policy != nullptr ? 1U : 2U);
  PutLe<std::uint32_t>(os, static_cast<std::uint32_t>(table.step));
  PutLe<std::uint32_t>(os, static_cast<std::uint32_t>(table.n_v));
  PutLe<std::uint32_t>(os, static_cast<std::uint32_t>(table.n_soc));
  PutLe<std::uint32_t>(os, static_cast<std::uint32_t>(table.n_t));
  for (double v : table.values) PutLe<double>(os, v);
  if (policy != nullptr) {
    for (std::int32_t a : policy->action) PutLe<std::int32_t>(os, a);
  }
}

}  // namespace ecodrive
