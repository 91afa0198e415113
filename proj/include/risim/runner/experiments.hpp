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

#include "risim/runner/output.hpp"
#include "risim/runner/scenario.hpp"
#include "risim/surface.hpp"

#include <exception>
#include <functional>
#include <string>
#include <vector>

namespace risim::runner
{
    // 0 selects the hardware concurrency
    int resolve_threads(int requested);

    // Runs fn(0..n-1) on up to `threads` workers. The first failing index (lowest) is rethrown.
    void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)> &fn);

    // Evaluation grid for exact element sums. Elements are the configured fraction of a wavelength,
    // enlarged so that no side holds more than `max_grid_per_side` of them (the decimation cap).
    // Square surfaces keep their area exactly.
    RisArray<double> evaluation_array(const Scenario &s, const Placement<double> &placement, double side_x_m,
                                      double side_y_m);

    // Optimal-configuration link through a surface of the given size, exact element sum
    LinkMetrics<double> ris_optimal_link(const Scenario &s, const Placement<double> &placement, double side_x_m,
                                         double side_y_m);

    // Far-field closed form for the same evaluation grid
    double ris_closed_form_snr(const Scenario &s, const RisArray<double> &array, const Placement<double> &placement);

    Placement<double> placement_at_rx_distance(const Placement<double> &p, double d2_m);

    ExperimentOutput experiment_area_vs_se(const Scenario &s, int threads = 0);
    ExperimentOutput experiment_snr_vs_area(const Scenario &s, int threads = 0);
    ExperimentOutput experiment_pathloss_vs_distance(const Scenario &s, int threads = 0);
    ExperimentOutput experiment_beam_pattern(const Scenario &s, int threads = 0);
    ExperimentOutput experiment_estimation(const Scenario &s, int threads = 0);

    // Names accepted by `run_experiment`, in `run_all` order
    const std::vector<std::string> &experiment_names();
    ExperimentOutput run_experiment(const std::string &name, const Scenario &s, int threads = 0);
    Manifest run_all(const Scenario &s, int threads = 0);
    Manifest run_selected(const std::vector<std::string> &names, const Scenario &s, int threads = 0);

    struct SaturationRow
    {
        double side_m = 0;
        double area_m2 = 0;
        long long num_elements = 0;
        double snr_db = 0;
        double doubling_ratio = 0; // SNR(area) / SNR(area / 2), 0 on the first row
    };

    // Square surfaces from max_side / 2^(doublings/2) up to max_side, the area doubling at each step.
    // Every surface uses the same grid_per_side x grid_per_side element grid.
    std::vector<SaturationRow> saturation_sweep(const Scenario &s, double max_side_m, int doublings,
                                                int grid_per_side, bool cosine_factors, int threads = 0);

    // log-log least-squares slope
    double loglog_slope(const std::vector<double> &x, const std::vector<double> &y);
}
