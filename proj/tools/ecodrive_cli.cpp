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

// Command-line front end: run, diff-backends, bench, make-fixtures.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ecodrive/experiment.hpp"

namespace {

struct Overrides {
  std::string config;
  std::string route;
  std::vector<std::string> bench_routes;
  std::string vehicle;
  std::optional<double> gamma;
  std::string backend;
  std::optional<std::size_t> workers;
  std::optional<std::size_t> reps;
  std::optional<std::size_t> warmup;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string controllers;
  std::optional<std::size_t> max_nodes;
  bool cross_check = false;
  bool digests = false;
};

void AddCommon(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config, "Experiment config JSON")
      ->default_str(ECODRIVE_DATA_DIR "/experiment.json");
  cmd->add_option("--route", o.route, "Route JSON (overrides the config)");
  cmd->add_option("--vehicle", o.vehicle, "Vehicle JSON (overrides the config)");
  cmd->add_option("--gamma", o.gamma, "Fuel/time weight in [0, 1]");
  cmd->add_option("--backend", o.backend, "serial or parallel");
  cmd->add_option("--workers", o.workers, "Worker threads for the parallel backend");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--seed", o.seed, "Seed for randomized fixtures");
  cmd->add_option("--max-nodes", o.max_nodes, "Debug: truncate the route");
}

ecodrive::ExperimentConfig Build(const Overrides& o) {
  const std::string path = o.config.empty() ? ECODRIVE_DATA_DIR "/experiment.json" : o.config;
  ecodrive::ExperimentConfig c = ecodrive::ExperimentConfig::Load(path);
  if (!o.route.empty()) c.route = o.route;
  if (!o.bench_routes.empty()) {
    c.bench_routes.assign(o.bench_routes.begin(), o.bench_routes.end());
  }
  if (!o.vehicle.empty()) c.vehicle = o.vehicle;
  if (o.gamma) c.solver.gamma = *o.gamma;
  if (!o.backend.empty()) c.backend = ecodrive::ParseBackend(o.backend);
  if (o.workers) c.workers = *o.workers;
  if (o.reps) c.bench_reps = *o.reps;
  if (o.warmup) c.bench_warmup = *o.warmup;
  if (!o.out.empty()) c.out_dir = o.out;
  if (o.seed) c.seed = *o.seed;
  if (!o.controllers.empty()) {
    c.controllers.clear();
    if (o.controllers == "both") {
      c.controllers = {"baseline", "mpc"};
    } else {
      c.controllers.push_back(o.controllers);
    }
  }
  if (o.max_nodes) c.max_nodes = *o.max_nodes;
  c.cross_check = c.cross_check || o.cross_check;
  c.record_digests = c.record_digests || o.digests;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eco-driving DP/MPC for a 48 V mild hybrid"};
  app.require_subcommand(1);
  Overrides o;

  auto* run = app.add_subcommand("run", "Closed-loop simulation of baseline and/or MPC");
  AddCommon(run, o);
  run->add_option("--controller", o.controllers, "baseline, mpc or both");
  run->add_flag("--cross-check", o.cross_check, "Debug: solve with both backends every step");
  run->add_flag("--digests", o.digests, "Debug: write per-step table digests");

  auto* diff = app.add_subcommand("diff-backends", "Step-locked serial vs parallel comparison");
  AddCommon(diff, o);
  bool perturb = false;
  diff->add_flag("--perturb-ties", perturb, "Debug: prefer the last action on ties (parallel only)");

  auto* bench = app.add_subcommand("bench", "Solver timing in Table-I format");
  AddCommon(bench, o);
  bench->add_option("--reps", o.reps, "Timed solves per backend and route (>= 30)");
  bench->add_option("--warmup", o.warmup, "Untimed warm-up solves");
  bench->add_option("--bench-route", o.bench_routes, "Route JSON; repeat for several routes");

  auto* fixtures = app.add_subcommand("make-fixtures", "Regenerate synthetic vehicle and routes");
  std::string fixture_dir = ECODRIVE_DATA_DIR;
  std::uint64_t fixture_seed = 7;
  fixtures->add_option("--out", fixture_dir, "Data directory");
  fixtures->add_option("--seed", fixture_seed, "Seed for signal timings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : ecodrive::kExitConfig;
  }

  try {
    if (*fixtures) return ecodrive::CmdMakeFixtures(fixture_dir, fixture_seed, std::cout);
    ecodrive::ExperimentConfig cfg = Build(o);
    if (*run) return ecodrive::CmdRun(cfg, std::cout);
    if (*diff) {
      cfg.perturb_parallel_ties = perturb;
      return ecodrive::CmdDiffBackends(cfg, std::cout);
    }
    if (*bench) return ecodrive::CmdBench(cfg, std::cout);
  } catch (const ecodrive::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ecodrive::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ecodrive::kExitConfig;
  }
  return ecodrive::kExitOk;
}
