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
 * @file experiment.hpp
 * @brief Experiment configuration and the run / diff-backends / bench /
 * make-fixtures commands behind the command-line tool.
 **/

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ecodrive/baseline.hpp"
#include "ecodrive/mpc.hpp"

namespace ecodrive {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitInfeasible = 2,
  kExitBackendsDiffer = 3,
};

struct ExperimentConfig {
  std::filesystem::path route;
  std::vector<std::filesystem::path> bench_routes;  // defaults to {route}
  std::filesystem::path vehicle;
  SolverSettings solver;
  double step = 10.0;  // must match the route's node spacing
  Backend backend = Backend::kSerial;
  std::size_t workers = 1;
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 7;
  std::vector<std::string> controllers = {"baseline", "mpc"};
  double start_velocity = 0.0;
  double start_time = 0.0;
  std::optional<double> start_soc;  // defaults to the SoC target
  DriverParams driver;
  SplitParams split;
  std::size_t bench_reps = 100;
  std::size_t bench_warmup = 5;
  // Debug switches.
  bool cross_check = false;
  bool record_digests = false;
  bool perturb_parallel_ties = false;
  std::size_t max_nodes = 0;  // 0 = whole route

  /// Relative paths resolve against the config file's directory.
  static ExperimentConfig Load(const std::filesystem::path& path);
  static ExperimentConfig Parse(const std::string& json_text,
                                const std::filesystem::path& base_dir);
  /// Throws ConfigError; returns non-fatal warnings.
  std::vector<std::string> Validate() const;
};

Backend ParseBackend(const std::string& name);

struct TimingStats {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  double max = 0.0;

  static TimingStats From(const std::vector<double>& samples);
};

struct ControllerRun {
  std::string route;
  ClosedLoopTrajectory trajectory;
  ComplianceReport compliance;
  TimingStats timing;
  std::size_t fallbacks = 0;
  std::vector<BackendDiff> diffs;
  std::vector<std::uint64_t> digests;
};

/// Route truncated to its first `nodes` nodes (signals pruned).
RouteBundle TruncateRoute(const RouteBundle& bundle, std::size_t nodes);

StateVector StartState(const ExperimentConfig& cfg);

ControllerRun RunBaseline(const RouteBundle& bundle, const Powertrain& pt,
                          const ExperimentConfig& cfg);
ControllerRun RunMpc(const RouteBundle& bundle, const Powertrain& pt,
                     const ExperimentConfig& cfg,
                     std::shared_ptr<const TerminalCostField> terminal = nullptr);

/// JSON summary of one route: per-controller metrics plus, when both ran,
/// the percentage deltas of MPC against the baseline.
std::string SummaryJson(const std::vector<ControllerRun>& runs);

int CmdRun(const ExperimentConfig& cfg, std::ostream& out);
int CmdDiffBackends(const ExperimentConfig& cfg, std::ostream& out);
int CmdBench(const ExperimentConfig& cfg, std::ostream& out);
int CmdMakeFixtures(const std::filesystem::path& dir, std::uint64_t seed, std::ostream& out);

struct BenchRow {
  std::string route;
  std::string backend;
  std::size_t workers = 1;
  TimingStats stats;
};

/// Full-size solves at states sampled along a baseline drive of the route.
std::vector<BenchRow> BenchRoute(const RouteBundle& bundle, const Powertrain& pt,
                                 const ExperimentConfig& cfg);
void WriteBenchTable(std::ostream& os, const std::vector<BenchRow>& rows,
                     const ExperimentConfig& cfg);
void WriteBenchCsv(std::ostream& os, const std::vector<BenchRow>& rows);
std::string MachineInfo();

}  // namespace ecodrive
