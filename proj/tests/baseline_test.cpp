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
#include "ecodrive/baseline.hpp"
#include "ecodrive/fixtures.hpp"

namespace ecodrive {
namespace {

TEST_CASE("green time left") {
  SpatSchedule s;
  s.Add("A", SignalTiming{60.0, 0.0, {{0.0, 30.0}}});
  CHECK(GreenTimeLeft(s, "A", 10.0) == doctest::Approx(20.0));
  CHECK(GreenTimeLeft(s, "A", 40.0) == 0.0);
}

TEST_CASE("driver cruises toward the limit and brakes for a red light") {
  const RouteBundle b = MakeRedWallRoute();
  const DriverParams d;
  // Red until t = 55; 40 m before the light at 12 m/s the driver must slow down.
  CHECK(DriverDemand({12.0, 0.55, 0.0}, 1, b, d) < 0.0);
  // Past the light, below the limit: accelerate.
  CHECK(DriverDemand({8.0, 0.55, 60.0}, 8, b, d) > 0.0);
  // Green with lots of time left: no braking for the light.
  CHECK(DriverDemand({8.0, 0.55, 60.0}, 2, b, d) > 0.0);
}

TEST_CASE("driver parameter validation") {
  DriverParams d;
  CHECK_NOTHROW(d.Validate(13.9));
  d.decel = 1.0;
  CHECK_THROWS_AS(d.Validate(13.9), ConfigError);
  d = DriverParams{};
  d.line_of_sight = 5.0;
  CHECK_THROWS_AS(d.Validate(13.9), ConfigError);
  SplitParams s;
  CHECK_NOTHROW(s.Validate());
  s.soc_lo = 0.6;
  CHECK_THROWS_AS(s.Validate(), ConfigError);
}

TEST_CASE("rule-based split") {
  const Powertrain pt = MakeSyntheticPowertrain();
  const SplitParams sp;
  SUBCASE("no demand, no torque") {
    const SplitResult r = RuleBasedTorqueSplit(0.0, {10.0, 0.55, 0.0}, pt, sp);
    CHECK(r.action.t_eng == 0.0);
    CHECK(r.action.t_bsg == 0.0);
  }
  SUBCASE("braking regenerates unless the battery is full") {
    const SplitResult r = RuleBasedTorqueSplit(-2000.0, {10.0, 0.55, 0.0}, pt, sp);
    CHECK(r.action.t_bsg < 0.0);
    CHECK(r.action.t_eng <= 0.0);
    const SplitResult full = RuleBasedTorqueSplit(-2000.0, {10.0, 0.60, 0.0}, pt, sp);
    CHECK(full.action.t_bsg == 0.0);
    CHECK(full.action.t_eng < 0.0);
  }
  SUBCASE("heavy demand gets assist, low SoC gets charge") {
    const SplitResult heavy = RuleBasedTorqueSplit(3000.0, {10.0, 0.55, 0.0}, pt, sp);
    CHECK(heavy.action.t_bsg > 0.0);
    const SplitResult low = RuleBasedTorqueSplit(500.0, {10.0, 0.50, 0.0}, pt, sp);
    CHECK(low.action.t_bsg < 0.0);
    CHECK(low.action.t_eng > 0.0);
  }
  SUBCASE("the split delivers the requested wheel force when unsaturated") {
    const double force = 900.0;
    const StateVector x{10.0, 0.55, 0.0};
    const SplitResult r = RuleBasedTorqueSplit(force, x, pt, sp);
    REQUIRE_FALSE(r.saturated);
    CHECK(TractiveForce(x.v, r.action, pt) == doctest::Approx(force).epsilon(1e-9));
  }
}

TEST_CASE("baseline drives the urban fixture legally") {
  const Powertrain pt = MakeSyntheticPowertrain();
  const RouteBundle b = MakeUrbanRoute(7);
  BaselineController ctl(b, pt, DriverParams{}, SplitParams{});
  const ClosedLoopTrajectory t = SimulateClosedLoop(b, pt, ctl, {0.0, 0.55, 0.0});
  REQUIRE(t.completed);
  CHECK(t.records.size() == b.route.node_count());
  const ComplianceReport rep = CheckCompliance(t, b, pt);
  CHECK(rep.Clean());
  CHECK(rep.signal_crossings == 5);
  CHECK(t.total_fuel > 0.0);
  // Stop signs are honoured with a full stop.
  for (std::size_t n : b.route.stop_signs) CHECK(t.records[n].state.v == 0.0);
}

}  // namespace
}  // namespace ecodrive
