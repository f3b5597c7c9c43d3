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

// Small randomized DP instances whose transitions land exactly on grid
// nodes, plus a brute-force oracle that enumerates every action sequence.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <tuple>
#include <vector>

#include "ecodrive/dp_core.hpp"
#include "ecodrive/dp_parallel.hpp"

namespace ecodrive::testing {

inline long Draw(std::mt19937_64& rng, long lo, long hi) {
  return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

/// Table-driven plant. Speeds are integers, SoC moves in quarters and
/// move times are whole seconds, so nothing ever needs interpolating.
class ToyModel : public TransitionModel {
 public:
  std::map<std::tuple<std::size_t, long, long, long>, Transition> table;

  Transition Evaluate(std::size_t node, double v, const ActionVector& u) const override {
    const auto it = table.find({node, std::lround(v), std::lround(u.t_eng), std::lround(u.t_bsg)});
    return it == table.end() ? Transition{} : it->second;
  }
  std::optional<double> NextSoc(double soc, const Transition& tr) const override {
    return soc - tr.p_bat;
  }
};

struct ToyInstance {
  std::unique_ptr<ToyModel> model;
  HorizonProblem problem;
  // Shared by the departure/terminal closures.
  std::shared_ptr<std::vector<std::vector<std::uint8_t>>> moving_ok;
  std::shared_ptr<std::vector<std::vector<int>>> stop_wait;  // -1 = blocked
  std::shared_ptr<std::map<std::pair<long, long>, double>> terminal;
};

/// Sizes stay within 5x4x6 states, 3x3 actions and 3 steps.
inline ToyInstance MakeToy(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ToyInstance toy;
  toy.model = std::make_unique<ToyModel>();
  HorizonProblem& p = toy.problem;
  p.model = toy.model.get();
  p.first_node = 0;
  p.steps = static_cast<std::size_t>(Draw(rng, 1, 3));
  const long n_v = Draw(rng, 2, 5);
  const long n_soc = Draw(rng, 2, 4);
  const auto n_t = static_cast<std::size_t>(Draw(rng, 3, 6));
  const long n_eng = Draw(rng, 1, 3);
  const long n_bsg = Draw(rng, 1, 3);

  std::vector<double> vs, socs, eng, bsg;
  for (long i = 0; i < n_v; ++i) vs.push_back(static_cast<double>(i));
  for (long i = 0; i < n_soc; ++i) socs.push_back(0.25 * static_cast<double>(i));
  for (long i = 0; i < n_eng; ++i) eng.push_back(static_cast<double>(i));
  for (long i = 0; i < n_bsg; ++i) bsg.push_back(static_cast<double>(i));
  p.v_axes.assign(p.steps + 1, Axis(vs));
  p.soc_axis = Axis(socs);
  p.time = TimeGrid{static_cast<double>(Draw(rng, 0, 3)), 1.0, n_t};
  p.eng_axis = Axis(eng);
  p.bsg_axis = Axis(bsg);
  const double gammas[] = {0.25, 0.5, 0.75, 1.0, 0.0};
  p.gamma = gammas[Draw(rng, 0, 4)];

  for (std::size_t k = 0; k < p.steps; ++k) {
    for (long iv = 0; iv < n_v; ++iv) {
      for (long e = 0; e < n_eng; ++e) {
        for (long b = 0; b < n_bsg; ++b) {
          if (Draw(rng, 0, 9) < 2) continue;  // infeasible action
          Transition tr;
          tr.feasible = true;
          // Occasionally leave the next v-axis to exercise the range check.
          tr.v_next = static_cast<double>(Draw(rng, 0, n_v));
          tr.move_time = static_cast<double>(Draw(rng, 1, 2));
          tr.fuel_rate = static_cast<double>(Draw(rng, 0, 8)) / 8.0;
          tr.p_bat = 0.25 * static_cast<double>(Draw(rng, -1, 1));
          toy.model->table[{k, iv, e, b}] = tr;
        }
      }
    }
  }

  toy.moving_ok = std::make_shared<std::vector<std::vector<std::uint8_t>>>();
  toy.stop_wait = std::make_shared<std::vector<std::vector<int>>>();
  for (std::size_t k = 0; k <= p.steps; ++k) {
    std::vector<std::uint8_t> ok(n_t);
    std::vector<int> wait(n_t);
    for (std::size_t m = 0; m < n_t; ++m) {
      ok[m] = Draw(rng, 0, 9) < 8 ? 1 : 0;
      const long w = Draw(rng, 0, 9);
      wait[m] = w < 2 ? -1 : (w < 6 ? 0 : static_cast<int>(Draw(rng, 1, 2)));
    }
    toy.moving_ok->push_back(ok);
    toy.stop_wait->push_back(wait);
  }
  const auto ok = toy.moving_ok;
  const auto sw = toy.stop_wait;
  const TimeGrid grid = p.time;
  p.departure = [ok, sw, grid](std::size_t step, const StateVector& x) -> std::optional<double> {
    const double q = x.t - grid.first;
    if (q < 0.0 || q != std::floor(q) || q >= static_cast<double>(grid.count)) return std::nullopt;
    const auto m = static_cast<std::size_t>(q);
    if (x.v != 0.0) {
      if ((*ok)[step][m] == 0) return std::nullopt;
      return x.t;
    }
    const int w = (*sw)[step][m];
    if (w < 0) return std::nullopt;
    return x.t + static_cast<double>(w);
  };

  toy.terminal = std::make_shared<std::map<std::pair<long, long>, double>>();
  for (long iv = 0; iv < n_v; ++iv) {
    for (long is = 0; is < n_soc; ++is) {
      (*toy.terminal)[{iv, is}] =
          Draw(rng, 0, 9) == 0 ? 1e6 : static_cast<double>(Draw(rng, 0, 12)) / 4.0;
    }
  }
  const auto term = toy.terminal;
  p.terminal = [term](double v, double soc) {
    return term->at({std::lround(v), std::lround(soc * 4.0)});
  };
  p.FillStepNodes();
  return toy;
}

/// Full backward recursion without a start state (which may be infeasible).
struct Tables {
  std::vector<CostToGoTable> j;  // steps + 1
  std::vector<PolicyTable> pi;   // steps
};

inline Tables SerialTables(const HorizonProblem& p) {
  Tables t;
  t.j.resize(p.steps + 1);
  t.pi.resize(p.steps);
  t.j[p.steps] = TerminalTable(p);
  for (std::size_t k = p.steps; k-- > 0;) {
    std::tie(t.j[k], t.pi[k]) = BackwardStep(t.j[k + 1], k, p);
  }
  return t;
}

inline Tables ParallelTables(const HorizonProblem& p, std::size_t workers) {
  Tables t;
  t.j.resize(p.steps + 1);
  t.pi.resize(p.steps);
  t.j[p.steps] = TerminalTable(p);
  for (std::size_t k = p.steps; k-- > 0;) {
    const Stage1Table s1 = Stage1Evaluate(p, k, workers);
    std::tie(t.j[k], t.pi[k]) =
        Stage2Update(t.j[k + 1], s1, k, p, WorkPartition::Even(p.StateCount(k), workers));
  }
  return t;
}

inline bool SameTables(const Tables& a, const Tables& b) {
  for (std::size_t k = 0; k < a.j.size(); ++k) {
    if (a.j[k].values != b.j[k].values) return false;
  }
  for (std::size_t k = 0; k < a.pi.size(); ++k) {
    if (a.pi[k].action != b.pi[k].action) return false;
  }
  return true;
}

struct OracleResult {
  double cost = 0.0;
  std::int32_t first_action = PolicyTable::kUndefined;  // lowest index attaining the optimum
};

/// Enumerates every action sequence from x at step 0 and folds each
/// sequence's costs from the back, the same association the recursion uses.
inline OracleResult Enumerate(const HorizonProblem& p, const StateVector& x) {
  const double j_inf = p.penalty.j_inf;
  const std::size_t n_a = p.ActionCount();
  std::size_t sequences = 1;
  for (std::size_t k = 0; k < p.steps; ++k) sequences *= n_a;

  OracleResult best{j_inf, PolicyTable::kUndefined};
  std::vector<std::size_t> seq(p.steps);
  for (std::size_t code = 0; code < sequences; ++code) {
    std::size_t c = code;
    for (std::size_t k = p.steps; k-- > 0;) {
      seq[k] = c % n_a;
      c /= n_a;
    }
    std::vector<double> step_cost(p.steps);
    StateVector s = x;
    bool ok = true;
    for (std::size_t k = 0; k < p.steps && ok; ++k) {
      const auto dep = p.departure(k, s);
      if (!dep) {
        ok = false;
        break;
      }
      const Transition tr = p.model->Evaluate(p.first_node + k, s.v, p.Action(seq[k]));
      if (!tr.feasible) {
        ok = false;
        break;
      }
      const auto soc = p.model->NextSoc(s.soc, tr);
      const StateVector n{tr.v_next, soc.value_or(-1.0), *dep + tr.move_time};
      if (!soc || !p.v_axes[k + 1].Locate(n.v) || !p.soc_axis.Locate(n.soc) ||
          !p.time.Locate(n.t)) {
        ok = false;
        break;
      }
      step_cost[k] = StageCost(tr.fuel_rate, tr.move_time, p.gamma) + StageCost(0.0, *dep - s.t, p.gamma);
      s = n;
    }
    if (!ok) continue;
    double total = p.terminal(s.v, s.soc);
    if (total >= j_inf) continue;
    for (std::size_t k = p.steps; k-- > 0;) total = step_cost[k] + total;
    if (total >= j_inf) continue;
    if (total < best.cost) {
      best.cost = total;
      best.first_action = static_cast<std::int32_t>(seq[0]);
    }
  }
  return best;
}

}  // namespace ecodrive::testing
