// SPDX-License-Identifier: Apache-2.0
//
// risim - link-level simulator for reconfigurable intelligent surfaces
// Copyright (C) 2026 The risim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "risim/baselines.hpp"
#include "risim/propagation.hpp"
#include "risim/scene.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace risim::runner
{
    struct AreaSweep
    {
        std::vector<double> areas_m2;   // Square surfaces, side = sqrt(area)
        std::vector<double> se_targets; // Required-area queries
    };

    struct PathlossSweep
    {
        std::vector<double> distances_m; // Receiver distance along the placement's receiver direction
        double side_x_m = 2.0;
        double side_y_m = 2.0;
    };

    struct BeamPatternSweep
    {
        std::vector<double> apertures_wavelengths; // Square apertures, side in wavelengths
        std::vector<double> azimuths_deg;          // Cut through normal and x-axis
    };

    struct EstimationSweep
    {
        double side_x_m = 2.0;
        double side_y_m = 2.0;
        std::vector<int> groupings;          // Square tile side in elements
        std::vector<int> oversampling;       // T = oversampling x unknowns
        std::vector<double> pilot_power_dbm; // +inf gives the noiseless row
        int pilot_symbols_per_config = 1;
        int num_seeds = 100;
        long long coherence_block_symbols = 100000;
    };

    struct Scenario
    {
        CarrierSpec<double> carrier = CarrierSpec<double>::from_wavelength(0.1);
        Placement<double> placement;
        LinkBudget<double> budget;
        double element_side_fraction = 0.2;
        double antenna_spacing_fraction = 0.5;
        int max_grid_per_side = 1000; // Decimation cap for exact element sums
        bool cosine_factors = false;
        double max_area_m2 = 1e4;
        std::uint64_t seed = 0;
        std::string output_dir = "out";

        AreaSweep area_sweep;
        PathlossSweep pathloss;
        BeamPatternSweep beam_pattern;
        EstimationSweep estimation;

        double d1() const { return placement.tx_distance(); }
        double d2() const { return placement.rx_distance(); }
    };

    // Built-in scenario: transmitter 300 m away at 30 degrees off the normal, user 10 m away on the normal
    Scenario default_scenario();

    Scenario scenario_from_json(const nlohmann::json &j);
    Scenario load_scenario(const std::string &path);

    // Fully expanded form, also the input to the scenario hash
    nlohmann::json scenario_to_json(const Scenario &s);

    // FNV-1a 64 over the canonical dump of `scenario_to_json`
    std::uint64_t scenario_hash(const Scenario &s);

    void validate(const Scenario &s);

    // Sweep value list: explicit array, or {"start", "stop", "points", "scale": "linear" | "log"}
    std::vector<double> parse_sweep(const nlohmann::json &j, const std::string &where);

    SizingScenario<double> sizing_scenario(const Scenario &s);
}
