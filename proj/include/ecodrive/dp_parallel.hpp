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
 * @file dp_parallel.hpp
 * @brief Two-stage data-parallel DP backend.
 *
 * Stage 1 evaluates the (v x T_eng x T_bsg) cross product once per step.
 * Stage 2 assigns each (v, SoC, t) state node to exactly one worker, which
 * loops over the actions serially using the stage-1 records. Workers share
 * the immutable problem and J_{k+1}; each owns a disjoint output range.
 **/

#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "ecodrive/dp_core.hpp"

namespace ecodrive {

/// Laid out (v, T_eng, T_bsg) with T_bsg fastest.
struct Stage1Table {
  std::size_t step = 0;
  std::size_t n_v = 0;
  std::size_t n_actions = 0;
  std::vector<StepEntry> entries;

  const StepEntry& At(std::size_t iv, std::size_t action) const {
    return entries[iv * n_actions + action];
  }
  std::span<const StepEntry> Row(std::size_t iv) const {
    return {entries.data() + iv * n_actions, n_actions};
  }
};

/// Contiguous, disjoint, covering, non-empty ranges over [0, total).
struct WorkPartition {
  std::vector<std::pair<std::size_t, std::size_t>> ranges;

  static WorkPartition Even(std::size_t total, std::size_t workers);
  std::size_t workers() const { return ranges.size(); }
  bool Valid(std::size_t total) const;
};

/// Per-cell write counter for checking that no output cell is shared.
struct WriteShadow {
  std::vector<std::uint32_t> writes;
};

Stage1Table Stage1Evaluate(const HorizonProblem& p, std::size_t step, std::size_t workers);

std::pair<CostToGoTable, PolicyTable> Stage2Update(const CostToGoTable& next,
                                                   const Stage1Table& stage1, std::size_t step,
                                                   const HorizonProblem& p,
                                                   const WorkPartition& partition,
                                                   WriteShadow* shadow = nullptr);

HorizonSolution SolveHorizonParallel(const StateVector& x, const HorizonProblem& p,
                                     std::size_t workers);

}  // namespace ecodrive
