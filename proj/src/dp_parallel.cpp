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

#include "ecodrive/dp_parallel.hpp"

#include <algorithm>
#include <stdexcept>

#include <omp.h>

namespace ecodrive {

WorkPartition WorkPartition::Even(std::size_t total, std::size_t workers) {
  WorkPartition part;
  if (total == 0) return part;
  const std::size_t w = std::clamp<std::size_t>(workers, 1, total);
  const std::size_t base = total / w;
  const std::size_t extra = total % w;
  std::size_t lo = 0;
  for (std::size_t i = 0; i < w; ++i) {
    const std::size_t len = base + (i < extra ? 1 : 0);
    part.ranges.emplace_back(lo, lo + len);
    lo += len;
  }
  return part;
}

bool WorkPartition::Valid(std::size_t total) const {
  std::size_t expect = 0;
  for (const auto& [lo, hi] : ranges) {
    if (lo != expect || hi <= lo) return false;
    expect = hi;
  }
  return expect == total;
}

Stage1Table Stage1Evaluate(const HorizonProblem& p, std::size_t step, std::size_t workers) {
  Stage1Table s;
  s.step = step;
  s.n_v = p.v_axes[step].size();
  s.n_actions = p.ActionCount();
  s.entries.resize(s.n_v * s.n_actions);
  const WorkPartition part = WorkPartition::Even(s.entries.size(), workers);
  const auto n_parts = static_cast<std::int64_t>(part.workers());
  const Axis& va = p.v_axes[step];
#pragma omp parallel for num_threads(static_cast<int>(part.workers())) schedule(static, 1)
  for (std::int64_t w = 0; w < n_parts; ++w) {
    const auto [lo, hi] = part.ranges[static_cast<std::size_t>(w)];
    for (std::size_t i = lo; i < hi; ++i) {
      s.entries[i] = MakeStepEntry(p, step, va[i / s.n_actions], i % s.n_actions);
    }
  }
  return s;
}

std::pair<CostToGoTable, PolicyTable> Stage2Update(const CostToGoTable& next,
                                                   const Stage1Table& stage1, std::size_t step,
                                                   const HorizonProblem& p,
                                                   const WorkPartition& partition,
                                                   WriteShadow* shadow) {
  if (stage1.step != step || next.step != step + 1) {
    throw std::invalid_argument("stage-2 inputs belong to different steps");
  }
  CostToGoTable out = MakeTable(p, step, p.penalty.j_inf);
  PolicyTable policy = MakePolicy(p, step);
  const std::size_t total = out.values.size();
  if (!partition.Valid(total)) throw std::invalid_argument("partition does not cover the grid");
  if (shadow != nullptr) shadow->writes.assign(total, 0);

  const std::size_t nt = out.n_t;
  const auto n_parts = static_cast<std::int64_t>(partition.workers());
#pragma omp parallel for num_threads(static_cast<int>(partition.workers())) schedule(static, 1)
  for (std::int64_t w = 0; w < n_parts; ++w) {
    const auto [lo, hi] = partition.ranges[static_cast<std::size_t>(w)];
    std::size_t idx = lo;
    while (idx < hi) {
      const std::size_t row = idx / nt;
      const std::size_t m0 = idx % nt;
      const std::size_t m1 = std::min(nt, m0 + (hi - idx));
      const std::size_t iv = row / out.n_soc;
      const std::size_t is = row % out.n_soc;
      ProcessRowSegment(p, step, iv, is, m0, m1, stage1.Row(iv), next, out, policy);
      if (shadow != nullptr) {
        for (std::size_t m = m0; m < m1; ++m) ++shadow->writes[row * nt + m];
      }
      idx += m1 - m0;
    }
  }
  return {std::move(out), std::move(policy)};
}

HorizonSolution SolveHorizonParallel(const StateVector& x, const HorizonProblem& p,
                                     std::size_t workers) {
  p.Validate();
  HorizonSolution sol;
  sol.cost_to_go.resize(p.steps + 1);
  sol.policy.resize(p.steps);
  sol.cost_to_go[p.steps] = TerminalTable(p);
  for (std::size_t k = p.steps; k-- > 0;) {
    const Stage1Table s1 = Stage1Evaluate(p, k, workers);
    const WorkPartition part = WorkPartition::Even(p.StateCount(k), workers);
    auto [j, mu] = Stage2Update(sol.cost_to_go[k + 1], s1, k, p, part);
    sol.cost_to_go[k] = std::move(j);
    sol.policy[k] = std::move(mu);
  }
  sol.start = EvaluateStart(p, sol.cost_to_go[1], x);
  return sol;
}

}  // namespace ecodrive
