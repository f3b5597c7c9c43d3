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

#include <stdexcept>

#include "doctest.h"
#include "ecodrive/grid.hpp"

namespace ecodrive {
namespace {

TEST_CASE("axis rejects non-increasing points") {
  CHECK_THROWS_AS(Axis({1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Axis({2.0, 1.0}), std::invalid_argument);
  CHECK_NOTHROW(Axis({1.0}));
}

TEST_CASE("linspace hits both ends exactly") {
  const Axis a = Axis::Linspace(0.35, 0.75, 26);
  CHECK(a.size() == 26);
  CHECK(a.front() == 0.35);
  CHECK(a.back() == 0.75);
  CHECK(Axis::Linspace(3.0, 9.0, 1).size() == 1);
}

TEST_CASE("locate brackets and flags nodes") {
  const Axis a({0.0, 1.0, 3.0});
  auto b = a.Locate(2.0);
  REQUIRE(b);
  CHECK(b->lo == 1);
  CHECK(b->hi == 2);
  CHECK(b->w == 0.5);
  b = a.Locate(3.0);
  REQUIRE(b);
  CHECK(b->lo == 2);
  CHECK(b->hi == 2);
  CHECK(b->w == 0.0);
  CHECK_FALSE(a.Locate(-1e-12));
  CHECK_FALSE(a.Locate(3.0 + 1e-12));
  bool clamped = false;
  CHECK(a.LocateClamped(7.0, &clamped).lo == 2);
  CHECK(clamped);
}

TEST_CASE("time grid") {
  const TimeGrid g{4.0, 2.0, 40};
  CHECK(g.Base() == 2.0);
  CHECK(g.Last() == 82.0);
  auto b = g.Locate(7.0);
  REQUIRE(b);
  CHECK(b->lo == 1);
  CHECK(b->hi == 2);
  CHECK(b->w == 0.5);
  CHECK_FALSE(g.Locate(3.9));
  CHECK_FALSE(g.Locate(82.5));
}

TEST_CASE("curve and map interpolation") {
  const Curve1D c(Axis({0.0, 10.0}), {1.0, 3.0});
  CHECK(c(5.0) == 2.0);
  bool clamped = false;
  CHECK(c(20.0, &clamped) == 3.0);
  CHECK(clamped);
  const Map2D m(Axis({0.0, 1.0}), Axis({0.0, 2.0}), {0.0, 2.0, 10.0, 12.0});
  CHECK(m(0.5, 1.0) == 6.0);
  CHECK(m(1.0, 2.0) == 12.0);
  CHECK_THROWS(Map2D(Axis({0.0, 1.0}), Axis({0.0}), {1.0}));
}

}  // namespace
}  // namespace ecodrive
