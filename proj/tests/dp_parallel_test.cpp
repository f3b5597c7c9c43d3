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

#include "doctest.h"
#include "ecodrive/dp_parallel.hpp"
#include "toy_problem.hpp"

namespace ecodrive {
namespace {

using testing::SameTables;

bool SameSolution(const HorizonSolution& a, const HorizonSolution& b) {
  if (a.cost_to_go.size() != b.cost_to_go.size()) return false;
  for (std::size_t k = 0; k < a.cost_to_go.size(); ++k) {
    if (a.cost_to_go[k].values != b.cost_to_go[k].values) return false;
  }
  for (std::size_t k = 0; k < a.policy.size(); ++k) {
    if (a.policy[k].action != b.policy[k].action) return false;
  }
  return true;
}

TEST_CASE("even partitions cover the range without overlap") {
  for (std::size_t total : {0u, 1u, 7u, 64u, 1000u}) {
    for (std::size_t w : {1u, 2u, 3u, 8u, 13u}) {
      const auto part = WorkPartition::Even(total, w);
      CHECK(part.Valid(total));
      std::size_t covered = 0;
      for (const auto& [lo, hi] : part.ranges) covered += hi - lo;
      CHECK(covered == total);
    }
  }
  WorkPartition gap;
  gap.ranges = {{0, 3}, {4, 10}};
  CHECK_FALSE(gap.Valid(10));
  WorkPartition overlap;
  overlap.ranges = {{0, 5}, {4, 10}};
  CHECK_FALSE(overlap.Valid(10));
}

TEST_CASE("stage 2 writes every state exactly once") {
  const auto toy = testing::MakeToy(11);
  const HorizonProblem& p = toy.problem;
  const CostToGoTable term = TerminalTable(p);
  const std::size_t k = p.steps - 1;
  const Stage1Table s1 = Stage1Evaluate(p, k, 3);
  WriteShadow shadow;
  Stage2Update(term, s1, k, p, WorkPartition::Even(p.StateCount(k), 3), &shadow);
  REQUIRE(shadow.writes.size() == p.StateCount(k));
  for (auto w : shadow.writes) CHECK(w == 1u);
}

TEST_CASE("parallel tables are bit-identical to serial on toy instances") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    CAPTURE(seed);
    const auto toy = testing::MakeToy(seed);
    const HorizonProblem& p = toy.problem;
    const testing::Tables ref = testing::SerialTables(p);
    for (std::size_t w : {1u, 2u, 3u, 7u}) CHECK(SameTables(ref, testing::ParallelTables(p, w)));
    const StateVector x{p.v_axes[0][0], p.soc_axis[0], p.time.first};
    bool serial_threw = false;
    HorizonSolution serial;
    try {
      serial = SolveHorizon(x, p);
    } catch (const StartStateInfeasible&) {
      serial_threw = true;
    }
    for (std::size_t w : {1u, 2u, 5u}) {
      if (serial_threw) {
        CHECK_THROWS_AS(SolveHorizonParallel(x, p, w), StartStateInfeasible);
        continue;
      }
      const HorizonSolution par = SolveHorizonParallel(x, p, w);
      CHECK(SameSolution(serial, par));
      CHECK(serial.start.action_index == par.start.action_index);
      CHECK(serial.start.cost == par.start.cost);
    }
  }
}

TEST_CASE("perturbed tie-breaking is visible to the comparison") {
  // Duplicate actions force ties; flipping the tie rule must change the policy.
  testing::ToyModel model;
  Transition tr;
  tr.feasible = true;
  tr.v_next = 1.0;
  tr.move_time = 1.0;
  model.table[{0, 1, 0, 0}] = tr;
  model.table[{0, 1, 0, 1}] = tr;
  HorizonProblem p;
  p.model = &model;
  p.steps = 1;
  p.v_axes = {Axis({0.0, 1.0}), Axis({0.0, 1.0})};
  p.soc_axis = Axis({0.0, 0.5});
  p.time = TimeGrid{1.0, 1.0, 3};
  p.eng_axis = Axis({0.0});
  p.bsg_axis = Axis({0.0, 1.0});
  p.departure = [](std::size_t, const StateVector& x) { return std::optional<double>(x.t); };
  p.terminal = [](double, double) { return 0.0; };
  p.FillStepNodes();
  const StateVector x{1.0, 0.5, 1.0};
  const HorizonSolution serial = SolveHorizon(x, p);
  HorizonProblem q = p;
  q.prefer_last_on_tie = true;
  const HorizonSolution par = SolveHorizonParallel(x, q, 2);
  CHECK_FALSE(SameSolution(serial, par));
}

}  // namespace
}  // namespace ecodrive
