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

#include <sstream>

#include "doctest.h"
#include "ecodrive/fixtures.hpp"
#include "ecodrive/route_spat.hpp"

namespace ecodrive {
namespace {

SpatSchedule OneSignal(double offset) {
  SpatSchedule s;
  s.Add("S", SignalTiming{90.0, offset, {{10.0, 40.0}, {60.0, 70.0}}});
  return s;
}

TEST_CASE("phase follows cycle-local windows") {
  const SpatSchedule s = OneSignal(0.0);
  CHECK(s.PhaseAt("S", 9.999) == Phase::kRed);
  CHECK(s.PhaseAt("S", 10.0) == Phase::kGreen);
  CHECK(s.PhaseAt("S", 40.0) == Phase::kRed);
  CHECK(s.PhaseAt("S", 65.0) == Phase::kGreen);
  CHECK(s.PhaseAt("S", 100.0) == Phase::kGreen);
  CHECK(s.PhaseAt("S", -80.0) == Phase::kGreen);
  const SpatSchedule shifted = OneSignal(5.0);
  CHECK(shifted.PhaseAt("S", 5.0) == Phase::kGreen);
  CHECK_THROWS_AS(s.PhaseAt("nope", 0.0), std::out_of_range);
}

TEST_CASE("next green start") {
  const SpatSchedule s = OneSignal(0.0);
  CHECK(s.NextGreenStart("S", 0.0) == 10.0);
  CHECK(s.NextGreenStart("S", 45.0) == 60.0);
  CHECK(s.NextGreenStart("S", 75.0) == 100.0);
  CHECK(s.NextGreenStart("S", 275.5) == 280.0);
  CHECK_THROWS_AS(s.NextGreenStart("S", 20.0), std::logic_error);
}

TEST_CASE("timing validation") {
  SpatSchedule s;
  CHECK_THROWS_AS(s.Add("X", SignalTiming{60.0, 0.0, {{10.0, 70.0}}}), ConfigError);
  CHECK_THROWS_AS(s.Add("X", SignalTiming{60.0, 0.0, {{0.0, 20.0}, {10.0, 30.0}}}),
                  ConfigError);
  CHECK_THROWS_AS(s.Add("X", SignalTiming{60.0, 0.0, {}}), ConfigError);
}

TEST_CASE("indicator vector and feasible time set") {
  RouteBundle b = MakeEmptyRoute(5, 10.0);
  b.route.traffic_lights[2] = "S";
  b.spat = OneSignal(0.0);
  const auto ind = IndicatorVector(2, 0.0, 80.0, 2.0, b.route, b.spat);
  REQUIRE(ind.values.size() == 40);
  CHECK(ind.values[3] == 0);  // t = 8
  CHECK(ind.values[4] == 1);  // t = 10
  CHECK(ind.values[19] == 0);  // t = 40
  const auto plain = IndicatorVector(1, 0.0, 80.0, 2.0, b.route, b.spat);
  for (auto v : plain.values) CHECK(v == 1);
  const auto times = FeasibleTimeSet(2, 0.0, 80.0, 2.0, b.route, b.spat);
  CHECK(times.front() == 10.0);
  CHECK(times.back() == 68.0);
  CHECK_THROWS_AS(IndicatorVector(2, 0.0, 81.0, 2.0, b.route, b.spat), std::invalid_argument);
  std::ostringstream os;
  WriteIndicatorCsv(os, ind);
  CHECK(os.str().find("10") != std::string::npos);
}

TEST_CASE("horizon base snaps to the sample lattice") {
  CHECK(SnapHorizonBase(0.0, 2.0) == -2.0);
  CHECK(SnapHorizonBase(5.3, 2.0) == 2.0);
  CHECK(SnapHorizonBase(6.0, 2.0) == 4.0);
}

TEST_CASE("route validation") {
  RouteBundle b = MakeUrbanRoute(7);
  CHECK_NOTHROW(b.route.Validate(b.spat));
  RouteBundle bad = b;
  bad.route.traffic_lights[3] = "missing";
  CHECK_THROWS_WITH_AS(bad.route.Validate(bad.spat), doctest::Contains("missing"), ConfigError);
  bad = b;
  bad.route.v_min[10] = bad.route.v_max[10];
  CHECK_THROWS_AS(bad.route.Validate(bad.spat), ConfigError);
  bad = b;
  bad.route.stop_signs.insert(b.route.traffic_lights.begin()->first);
  CHECK_THROWS_AS(bad.route.Validate(bad.spat), ConfigError);
}

TEST_CASE("route json round trip") {
  for (const RouteBundle& b : {MakeUrbanRoute(7), MakeMixedRoute(7), MakeRedWallRoute()}) {
    const std::string text = SerializeRoute(b);
    CHECK(SerializeRoute(ParseRoute(text)) == text);
  }
  CHECK_THROWS_AS(ParseRoute("{\"name\": \"x\"}"), ConfigError);
  CHECK_THROWS_AS(ParseRoute("not json"), ConfigError);
}

TEST_CASE("fixtures are reproducible per seed") {
  CHECK(SerializeRoute(MakeUrbanRoute(7)) == SerializeRoute(MakeUrbanRoute(7)));
  CHECK(SerializeRoute(MakeUrbanRoute(7)) != SerializeRoute(MakeUrbanRoute(8)));
  const RouteBundle u = MakeUrbanRoute(7);
  CHECK(u.route.traffic_lights.size() == 5);
}

}  // namespace
}  // namespace ecodrive
