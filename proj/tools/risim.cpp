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

// risim command line: runs the reproduction experiments and writes CSV plus manifest.json.
//
//   risim run scenario.json --out out/
//   risim fig-pathloss --seed 7 --threads 4
//
// Exit codes: 0 success, 2 invalid scenario or arguments, 3 numeric failure.

#include "risim/errors.hpp"
#include "risim/runner/experiments.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

int main(int argc, char **argv)
{
    CLI::App app{"risim - link-level simulator for reconfigurable intelligent surfaces"};
    app.set_version_flag("--version", std::string(RISIM_VERSION));
    app.require_subcommand(1);

    std::string scenario_path, out_dir;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    bool cosine = false;

    const auto common = [&](CLI::App *sub)
    {
        sub->add_option("--out", out_dir, "Output directory (default: the scenario's output_dir)");
        sub->add_option("--seed", seed, "Override the scenario seed");
        sub->add_option("--threads", threads, "Worker threads, 0 = hardware concurrency")->check(CLI::NonNegativeNumber);
        sub->add_flag("--cosine-factors", cosine, "Include element obliquity factors in the channel");
    };

    CLI::App *run = app.add_subcommand("run", "Run every experiment of a scenario file");
    run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    common(run);

    const std::vector<std::pair<std::string, std::string>> figs{
        {"fig-area-se", "area_vs_se"},
        {"fig-snr-area", "snr_vs_area"},
        {"fig-pathloss", "pathloss_vs_distance"},
        {"fig-beampattern", "beam_pattern"},
        {"fig-estimation", "estimation"}};
    std::vector<CLI::App *> fig_cmds;
    for (const auto &[cmd, exp] : figs)
    {
        CLI::App *sub = app.add_subcommand(cmd, "Run the " + exp + " experiment");
        sub->add_option("--scenario", scenario_path, "Scenario JSON file (default: built-in scenario)");
        common(sub);
        fig_cmds.push_back(sub);
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try
    {
        using namespace risim::runner;
        Scenario s = scenario_path.empty() ? default_scenario() : load_scenario(scenario_path);
        if (seed)
            s.seed = *seed;
        if (cosine)
            s.cosine_factors = true;
        if (!out_dir.empty())
            s.output_dir = out_dir;

        std::vector<std::string> names;
        if (run->parsed())
            names = experiment_names();
        for (std::size_t i = 0; i < figs.size(); ++i)
            if (fig_cmds[i]->parsed())
                names.push_back(figs[i].second);

        const Manifest m = run_selected(names, s, threads);
        write_outputs(s.output_dir, m);
        for (const auto &e : m.experiments)
            for (const auto &[file, table] : e.files)
                std::cout << s.output_dir << "/" << file << " (" << table.rows.size() << " rows)\n";
        std::cout << s.output_dir << "/manifest.json\n";
        return 0;
    }
    catch (const risim::invalid_input &e)
    {
        std::cerr << "risim: invalid input: " << e.what() << "\n";
        return 2;
    }
    catch (const risim::numeric_failure &e)
    {
        std::cerr << "risim: numeric failure: " << e.what() << "\n";
        return 3;
    }
    catch (const std::exception &e)
    {
        std::cerr << "risim: " << e.what() << "\n";
        return 1;
    }
}
