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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ecodrive/experiment.hpp"
#include "ecodrive/fixtures.hpp"

namespace fs = std::filesystem;

namespace ecodrive {
namespace {

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path ScratchDir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("ecodrive_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

ExperimentConfig SmallConfig(const fs::path& out) {
  ExperimentConfig cfg = ExperimentConfig::Load(fs::path(ECODRIVE_DATA_DIR) / "experiment.json");
  cfg.route = fs::path(ECODRIVE_DATA_DIR) / "routes" / "mixed.json";
  cfg.solver.grid = GridSizes{12, 7, 40, 10, 6};
  cfg.max_nodes = 25;
  cfg.out_dir = out;
  return cfg;
}

TEST_CASE("bundled experiment config loads and validates") {
  const ExperimentConfig cfg =
      ExperimentConfig::Load(fs::path(ECODRIVE_DATA_DIR) / "experiment.json");
  CHECK(cfg.solver.grid.n_v == 35);
  CHECK(cfg.solver.grid.n_soc == 26);
  CHECK(cfg.solver.grid.n_t == 40);
  CHECK(cfg.solver.grid.n_eng == 23);
  CHECK(cfg.solver.grid.n_bsg == 30);
  CHECK(cfg.solver.horizon_steps == 20);
  CHECK(cfg.solver.horizon_time == 80.0);
  CHECK(fs::exists(cfg.route));
  CHECK(fs::exists(cfg.vehicle));
  CHECK_NOTHROW(cfg.Validate());
}

TEST_CASE("config errors are reported") {
  ExperimentConfig cfg = SmallConfig(ScratchDir("cfg"));
  cfg.route = "/nonexistent/route.json";
  std::ostringstream out;
  CHECK_THROWS_AS(CmdRun(cfg, out), ConfigError);
  CHECK_THROWS_AS(ParseBackend("gpu"), ConfigError);
  CHECK(ParseBackend("parallel") == Backend::kParallel);
  CHECK_THROWS_AS(ExperimentConfig::Parse("{\"route\": 3}", "."), ConfigError);
  ExperimentConfig bad = SmallConfig(ScratchDir("cfg2"));
  bad.solver.gamma = 1.5;
  CHECK_THROWS_AS(bad.Validate(), ConfigError);
}

TEST_CASE("timing statistics") {
  const TimingStats s = TimingStats::From({1.0, 2.0, 3.0, 6.0});
  CHECK(s.count == 4);
  CHECK(s.mean == 3.0);
  CHECK(s.variance == doctest::Approx(14.0 / 3.0));
  CHECK(s.max == 6.0);
  CHECK(TimingStats::From({}).count == 0);
}

TEST_CASE("route truncation keeps the prefix") {
  const RouteBundle u = MakeUrbanRoute(7);
  const RouteBundle t = TruncateRoute(u, 120);
  CHECK(t.route.node_count() == 120);
  CHECK(t.route.traffic_lights.size() == 1);
  CHECK_NOTHROW(t.route.Validate(t.spat));
}

TEST_CASE("backend choice does not change the trajectory") {
  const fs::path a = ScratchDir("serial");
  const fs::path b = ScratchDir("parallel");
  ExperimentConfig cfg = SmallConfig(a);
  std::ostringstream log;
  REQUIRE(CmdRun(cfg, log) == kExitOk);
  cfg.out_dir = b;
  cfg.backend = Backend::kParallel;
  cfg.workers = 3;
  REQUIRE(CmdRun(cfg, log) == kExitOk);
  for (const char* f : {"mixed_mpc.csv", "mixed_baseline.csv"}) {
    CAPTURE(f);
    const std::string sa = Slurp(a / f);
    CHECK_FALSE(sa.empty());
    CHECK(sa == Slurp(b / f));
  }
  CHECK(fs::exists(a / "mixed_summary.json"));
  CHECK(fs::exists(a / "mixed_mpc_timing.csv"));
}

TEST_CASE("diff-backends reports agreement") {
  ExperimentConfig cfg = SmallConfig(ScratchDir("diff"));
  cfg.max_nodes = 8;
  cfg.workers = 2;
  std::ostringstream out;
  CHECK(CmdDiffBackends(cfg, out) == kExitOk);
  CHECK(out.str().find("node,max_abs_diff") != std::string::npos);
}

TEST_CASE("fixture files regenerate identically") {
  const fs::path d = ScratchDir("fixtures");
  std::ostringstream out;
  REQUIRE(CmdMakeFixtures(d, 7, out) == kExitOk);
  for (const char* f : {"vehicle.json", "routes/urban.json", "routes/mixed.json",
                        "routes/redwall.json"}) {
    CAPTURE(f);
    CHECK(Slurp(d / f) == Slurp(fs::path(ECODRIVE_DATA_DIR) / f));
  }
}

}  // namespace
}  // namespace ecodrive
