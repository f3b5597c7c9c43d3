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
 * @file fixtures.hpp
 * @brief Synthetic vehicle and route data. Everything is generated from
 * closed-form maps and a seeded engine, so regenerated files are identical.
 **/

#pragma once

#include <cstdint>
#include <filesystem>

#include "ecodrive/powertrain.hpp"
#include "ecodrive/route_spat.hpp"

namespace ecodrive {

/// 1700 kg sedan, 6-speed, 240 N m engine, 48 V belt starter-generator.
Powertrain MakeSyntheticPowertrain();

/// Same vehicle with the electric machine removed (zero torque limits).
Powertrain MakeConventionalPowertrain();

/// 7 km urban arterial, 5 fixed-time signals and 2 stop signs.
RouteBundle MakeUrbanRoute(std::uint64_t seed);

/// 6 km mixed route: urban, a 22.2 m/s section, urban again.
RouteBundle MakeMixedRoute(std::uint64_t seed);

/// 200 m approach to a light that stays red for the first 55 s, with a
/// minimum speed everywhere except at the light itself.
RouteBundle MakeRedWallRoute();

/// Flat route without signals; node 0 admits a standing start.
RouteBundle MakeEmptyRoute(std::size_t nodes, double v_max, double v_min = 1.0);

/// Writes vehicle.json and routes/{urban,mixed,redwall}.json under `dir`.
void WriteFixtureFiles(const std::filesystem::path& dir, std::uint64_t seed);

}  // namespace ecodrive
