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

#include "risim/runner/scenario.hpp"

#include "risim/errors.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace risim::runner
{
    using nlohmann::json;

    namespace
    {
        void check_keys(const json &j, const std::string &where, const std::set<std::string> &allowed)
        {
            if (!j.is_object())
                throw invalid_input(where + ": expected an object");
            for (const auto &[key, value] : j.items())
                if (!allowed.count(key))
                    throw invalid_input(where + ": unknown key '" + key + "'");
        }

        double number(const json &j, const std::string &where)
        {
            if (j.is_string())
            {
                const std::string v = j.get<std::string>();
                if (v == "inf")
                    return std::numeric_limits<double>::infinity();
                if (v == "-inf")
                    return -std::numeric_limits<double>::infinity();
            }
            if (!j.is_number())
                throw invalid_input(where + ": expected a number");
            return j.get<double>();
        }

        long long integer(const json &j, const std::string &where)
        {
            if (!j.is_number_integer())
                throw invalid_input(where + ": expected an integer");
            return j.get<long long>();
        }

        Vec3<double> vec3(const json &j, const std::string &where)
        {
            if (!j.is_array() || j.size() != 3)
                throw invalid_input(where + ": expected an array of 3 numbers");
            return {number(j[0], where + "[0]"), number(j[1], where + "[1]"), number(j[2], where + "[2]")};
        }

        json number_json(double v)
        {
            if (std::isinf(v))
                return v > 0 ? "inf" : "-inf";
            return v;
        }

        json vec3_json(const Vec3<double> &v) { return json::array({v(0), v(1), v(2)}); }

        template <typename F>
        void with(const json &j, const char *key, F &&f)
        {
            if (j.contains(key))
                f(j.at(key));
        }

        std::vector<int> int_list(const json &j, const std::string &where)
        {
            if (!j.is_array())
                throw invalid_input(where + ": expected an array of integers");
            std::vector<int> v;
            for (std::size_t i = 0; i < j.size(); ++i)
                v.push_back(int(integer(j[i], where + "[" + std::to_string(i) + "]")));
            return v;
        }

        template <typename V>
        void check_increasing(const std::vector<V> &v, const std::string &where)
        {
            if (v.empty())
                throw invalid_input(where + ": sweep list is empty");
            for (std::size_t i = 1; i < v.size(); ++i)
                if (!(v[i] > v[i - 1]))
                    throw invalid_input(where + ": sweep list must be strictly increasing (entry " +
                                        std::to_string(i) + ")");
        }

        PenetrationHop parse_hop(const json &j)
        {
            if (!j.is_string())
                throw invalid_input("budget.penetration_on: expected a string");
            const std::string v = j.get<std::string>();
            if (v == "tx_side")
                return PenetrationHop::tx_side;
            if (v == "rx_side")
                return PenetrationHop::rx_side;
            if (v == "both")
                return PenetrationHop::both;
            throw invalid_input("budget.penetration_on: expected tx_side, rx_side or both");
        }

        const char *hop_name(PenetrationHop h)
        {
            switch (h)
            {
            case PenetrationHop::rx_side:
                return "rx_side";
            case PenetrationHop::both:
                return "both";
            default:
                return "tx_side";
            }
        }
    }

    std::vector<double> parse_sweep(const json &j, const std::string &where)
    {
        std::vector<double> v;
        if (j.is_array())
        {
            for (std::size_t i = 0; i < j.size(); ++i)
                v.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
            return v;
        }
        check_keys(j, where, {"start", "stop", "points", "scale"});
        if (!j.contains("start") || !j.contains("stop") || !j.contains("points"))
            throw invalid_input(where + ": range needs start, stop and points");
        const double a = number(j.at("start"), where + ".start");
        const double b = number(j.at("stop"), where + ".stop");
        const long long n = integer(j.at("points"), where + ".points");
        const std::string scale = j.value("scale", std::string("linear"));
        if (n < 1)
            throw invalid_input(where + ".points must be >= 1");
        if (scale != "linear" && scale != "log")
            throw invalid_input(where + ".scale must be linear or log");
        if (scale == "log" && !(a > 0 && b > 0))
            throw invalid_input(where + ": log range needs positive bounds");
        for (long long i = 0; i < n; ++i)
        {
            const double u = n == 1 ? 0.0 : double(i) / double(n - 1);
            v.push_back(scale == "log" ? a * std::pow(b / a, u) : a + (b - a) * u);
        }
        if (n > 1)
            v.back() = b;
        return v;
    }

    Scenario default_scenario()
    {
        Scenario s;
        s.placement.surface_center = Vec3<double>::Zero();
        s.placement.surface_normal = Vec3<double>::UnitZ();
        s.placement.surface_x_axis = Vec3<double>::UnitX();
        s.placement.tx_position = Vec3<double>(0.0, 150.0, 259.8076211353316); // 300 m, 30 degrees off normal
        s.placement.rx_position = Vec3<double>(0.0, 0.0, 10.0);

        s.area_sweep.areas_m2 = parse_sweep(json{{"start", 0.01}, {"stop", 100.0}, {"points", 41}, {"scale", "log"}},
                                            "area_sweep.areas_m2");
        s.area_sweep.se_targets = parse_sweep(json{{"start", 1.0}, {"stop", 12.0}, {"points", 12}}, "se_targets");

        s.pathloss.distances_m = parse_sweep(json{{"start", 1.0}, {"stop", 1000.0}, {"points", 61}, {"scale", "log"}},
                                             "pathloss.distances_m");

        s.beam_pattern.apertures_wavelengths = {10.0, 20.0};
        s.beam_pattern.azimuths_deg = parse_sweep(json{{"start", -30.0}, {"stop", 30.0}, {"points", 1201}}, "azimuths");

        s.estimation.groupings = {1, 2, 4, 5, 10};
        s.estimation.oversampling = {1, 2};
        s.estimation.pilot_power_dbm = {20.0, 30.0, 40.0, 50.0, 60.0, std::numeric_limits<double>::infinity()};
        return s;
    }

    Scenario scenario_from_json(const json &j)
    {
        check_keys(j, "scenario", {"carrier", "placement", "budget", "surface", "relay", "seed", "output_dir",
                                   "area_sweep", "pathloss", "beam_pattern", "estimation"});
        Scenario s = default_scenario();

        with(j, "carrier", [&](const json &c) {
            check_keys(c, "carrier", {"frequency_hz", "wavelength_m"});
            if (c.contains("frequency_hz") == c.contains("wavelength_m"))
                throw invalid_input("carrier: give exactly one of frequency_hz or wavelength_m");
            s.carrier = c.contains("frequency_hz")
                            ? CarrierSpec<double>::from_frequency(number(c.at("frequency_hz"), "carrier.frequency_hz"))
                            : CarrierSpec<double>::from_wavelength(number(c.at("wavelength_m"), "carrier.wavelength_m"));
        });

        with(j, "placement", [&](const json &p) {
            check_keys(p, "placement", {"tx_position", "rx_position", "surface_center", "surface_normal", "surface_x_axis"});
            with(p, "tx_position", [&](const json &v) { s.placement.tx_position = vec3(v, "placement.tx_position"); });
            with(p, "rx_position", [&](const json &v) { s.placement.rx_position = vec3(v, "placement.rx_position"); });
            with(p, "surface_center", [&](const json &v) { s.placement.surface_center = vec3(v, "placement.surface_center"); });
            with(p, "surface_normal", [&](const json &v) { s.placement.surface_normal = vec3(v, "placement.surface_normal"); });
            with(p, "surface_x_axis", [&](const json &v) { s.placement.surface_x_axis = vec3(v, "placement.surface_x_axis"); });
        });

        with(j, "budget", [&](const json &b) {
            check_keys(b, "budget", {"tx_power_w", "relay_tx_power_w", "tx_gain_dbi", "rx_gain_dbi", "relay_gain_dbi",
                                     "penetration_loss_db", "bandwidth_hz", "noise_figure_db", "penetration_on",
                                     "element_amplitude"});
            auto &d = s.budget;
            with(b, "tx_power_w", [&](const json &v) { d.tx_power_w = number(v, "budget.tx_power_w"); });
            with(b, "relay_tx_power_w", [&](const json &v) { d.relay_tx_power_w = number(v, "budget.relay_tx_power_w"); });
            with(b, "tx_gain_dbi", [&](const json &v) { d.tx_gain_dbi = number(v, "budget.tx_gain_dbi"); });
            with(b, "rx_gain_dbi", [&](const json &v) { d.rx_gain_dbi = number(v, "budget.rx_gain_dbi"); });
            with(b, "relay_gain_dbi", [&](const json &v) { d.relay_gain_dbi = number(v, "budget.relay_gain_dbi"); });
            with(b, "penetration_loss_db", [&](const json &v) { d.penetration_loss_db = number(v, "budget.penetration_loss_db"); });
            with(b, "bandwidth_hz", [&](const json &v) { d.bandwidth_hz = number(v, "budget.bandwidth_hz"); });
            with(b, "noise_figure_db", [&](const json &v) { d.noise_figure_db = number(v, "budget.noise_figure_db"); });
            with(b, "penetration_on", [&](const json &v) { d.penetration_on = parse_hop(v); });
            with(b, "element_amplitude", [&](const json &v) { d.element_amplitude = number(v, "budget.element_amplitude"); });
        });

        with(j, "surface", [&](const json &f) {
            check_keys(f, "surface", {"element_side_fraction", "max_grid_per_side", "cosine_factors", "max_area_m2"});
            with(f, "element_side_fraction", [&](const json &v) { s.element_side_fraction = number(v, "surface.element_side_fraction"); });
            with(f, "max_grid_per_side", [&](const json &v) { s.max_grid_per_side = int(integer(v, "surface.max_grid_per_side")); });
            with(f, "max_area_m2", [&](const json &v) { s.max_area_m2 = number(v, "surface.max_area_m2"); });
            with(f, "cosine_factors", [&](const json &v) {
                if (!v.is_boolean())
                    throw invalid_input("surface.cosine_factors: expected a boolean");
                s.cosine_factors = v.get<bool>();
            });
        });

        with(j, "relay", [&](const json &r) {
            check_keys(r, "relay", {"antenna_spacing_fraction"});
            with(r, "antenna_spacing_fraction", [&](const json &v) { s.antenna_spacing_fraction = number(v, "relay.antenna_spacing_fraction"); });
        });

        with(j, "seed", [&](const json &v) {
            if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
                throw invalid_input("seed: expected a non-negative integer");
            s.seed = v.get<std::uint64_t>();
        });
        with(j, "output_dir", [&](const json &v) {
            if (!v.is_string())
                throw invalid_input("output_dir: expected a string");
            s.output_dir = v.get<std::string>();
        });

        with(j, "area_sweep", [&](const json &a) {
            check_keys(a, "area_sweep", {"areas_m2", "se_targets"});
            with(a, "areas_m2", [&](const json &v) { s.area_sweep.areas_m2 = parse_sweep(v, "area_sweep.areas_m2"); });
            with(a, "se_targets", [&](const json &v) { s.area_sweep.se_targets = parse_sweep(v, "area_sweep.se_targets"); });
        });

        with(j, "pathloss", [&](const json &p) {
            check_keys(p, "pathloss", {"distances_m", "side_x_m", "side_y_m"});
            with(p, "distances_m", [&](const json &v) { s.pathloss.distances_m = parse_sweep(v, "pathloss.distances_m"); });
            with(p, "side_x_m", [&](const json &v) { s.pathloss.side_x_m = number(v, "pathloss.side_x_m"); });
            with(p, "side_y_m", [&](const json &v) { s.pathloss.side_y_m = number(v, "pathloss.side_y_m"); });
        });

        with(j, "beam_pattern", [&](const json &b) {
            check_keys(b, "beam_pattern", {"apertures_wavelengths", "azimuths_deg"});
            with(b, "apertures_wavelengths", [&](const json &v) { s.beam_pattern.apertures_wavelengths = parse_sweep(v, "beam_pattern.apertures_wavelengths"); });
            with(b, "azimuths_deg", [&](const json &v) { s.beam_pattern.azimuths_deg = parse_sweep(v, "beam_pattern.azimuths_deg"); });
        });

        with(j, "estimation", [&](const json &e) {
            check_keys(e, "estimation", {"side_x_m", "side_y_m", "groupings", "oversampling", "pilot_power_dbm",
                                         "pilot_symbols_per_config", "num_seeds", "coherence_block_symbols"});
            auto &d = s.estimation;
            with(e, "side_x_m", [&](const json &v) { d.side_x_m = number(v, "estimation.side_x_m"); });
            with(e, "side_y_m", [&](const json &v) { d.side_y_m = number(v, "estimation.side_y_m"); });
            with(e, "groupings", [&](const json &v) { d.groupings = int_list(v, "estimation.groupings"); });
            with(e, "oversampling", [&](const json &v) { d.oversampling = int_list(v, "estimation.oversampling"); });
            with(e, "pilot_power_dbm", [&](const json &v) { d.pilot_power_dbm = parse_sweep(v, "estimation.pilot_power_dbm"); });
            with(e, "pilot_symbols_per_config", [&](const json &v) { d.pilot_symbols_per_config = int(integer(v, "estimation.pilot_symbols_per_config")); });
            with(e, "num_seeds", [&](const json &v) { d.num_seeds = int(integer(v, "estimation.num_seeds")); });
            with(e, "coherence_block_symbols", [&](const json &v) { d.coherence_block_symbols = integer(v, "estimation.coherence_block_symbols"); });
        });

        validate(s);
        return s;
    }

    Scenario load_scenario(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw invalid_input("cannot open scenario file '" + path + "'");
        json j;
        try
        {
            in >> j;
        }
        catch (const json::parse_error &e)
        {
            throw invalid_input("scenario file '" + path + "' is not valid JSON: " + e.what());
        }
        return scenario_from_json(j);
    }

    void validate(const Scenario &s)
    {
        if (!(s.carrier.wavelength_m > 0) || !(s.carrier.frequency_hz > 0))
            throw invalid_input("carrier: wavelength and frequency must be positive");
        risim::validate(s.placement);
        risim::validate(s.budget);
        if (!(s.element_side_fraction > 0) || s.element_side_fraction > 1)
            throw invalid_input("surface.element_side_fraction must lie in (0, 1]");
        if (!(s.antenna_spacing_fraction > 0))
            throw invalid_input("relay.antenna_spacing_fraction must be positive");
        if (s.max_grid_per_side < 1)
            throw invalid_input("surface.max_grid_per_side must be >= 1");
        if (!(s.max_area_m2 > 0))
            throw invalid_input("surface.max_area_m2 must be positive");

        check_increasing(s.area_sweep.areas_m2, "area_sweep.areas_m2");
        check_increasing(s.area_sweep.se_targets, "area_sweep.se_targets");
        if (!(s.area_sweep.areas_m2.front() > 0))
            throw invalid_input("area_sweep.areas_m2: areas must be positive");
        if (!(s.area_sweep.se_targets.front() > 0))
            throw invalid_input("area_sweep.se_targets: targets must be positive");

        check_increasing(s.pathloss.distances_m, "pathloss.distances_m");
        if (!(s.pathloss.distances_m.front() > 0))
            throw invalid_input("pathloss.distances_m: distances must be positive");
        if (!(s.pathloss.side_x_m > 0) || !(s.pathloss.side_y_m > 0))
            throw invalid_input("pathloss: surface sides must be positive");

        check_increasing(s.beam_pattern.apertures_wavelengths, "beam_pattern.apertures_wavelengths");
        check_increasing(s.beam_pattern.azimuths_deg, "beam_pattern.azimuths_deg");
        if (!(s.beam_pattern.apertures_wavelengths.front() > 0))
            throw invalid_input("beam_pattern.apertures_wavelengths: apertures must be positive");
        if (s.beam_pattern.azimuths_deg.front() < -90 || s.beam_pattern.azimuths_deg.back() > 90)
            throw invalid_input("beam_pattern.azimuths_deg: azimuths must lie in [-90, 90]");

        const auto &e = s.estimation;
        check_increasing(e.groupings, "estimation.groupings");
        check_increasing(e.oversampling, "estimation.oversampling");
        check_increasing(e.pilot_power_dbm, "estimation.pilot_power_dbm");
        if (e.groupings.front() < 1)
            throw invalid_input("estimation.groupings: tile sides must be >= 1");
        if (e.oversampling.front() < 1)
            throw invalid_input("estimation.oversampling: factors must be >= 1");
        if (!(e.side_x_m > 0) || !(e.side_y_m > 0))
            throw invalid_input("estimation: surface sides must be positive");
        if (e.pilot_symbols_per_config < 1 || e.num_seeds < 1 || e.coherence_block_symbols < 1)
            throw invalid_input("estimation: pilot_symbols_per_config, num_seeds and coherence_block_symbols must be >= 1");
    }

    json scenario_to_json(const Scenario &s)
    {
        json j;
        j["carrier"] = {{"wavelength_m", s.carrier.wavelength_m}};
        j["placement"] = {{"tx_position", vec3_json(s.placement.tx_position)},
                          {"rx_position", vec3_json(s.placement.rx_position)},
                          {"surface_center", vec3_json(s.placement.surface_center)},
                          {"surface_normal", vec3_json(s.placement.surface_normal)},
                          {"surface_x_axis", vec3_json(s.placement.surface_x_axis)}};
        const auto &b = s.budget;
        j["budget"] = {{"tx_power_w", b.tx_power_w},
                       {"relay_tx_power_w", b.relay_tx_power_w},
                       {"tx_gain_dbi", b.tx_gain_dbi},
                       {"rx_gain_dbi", b.rx_gain_dbi},
                       {"relay_gain_dbi", b.relay_gain_dbi},
                       {"penetration_loss_db", b.penetration_loss_db},
                       {"bandwidth_hz", b.bandwidth_hz},
                       {"noise_figure_db", b.noise_figure_db},
                       {"penetration_on", hop_name(b.penetration_on)},
                       {"element_amplitude", b.element_amplitude}};
        j["surface"] = {{"element_side_fraction", s.element_side_fraction},
                        {"max_grid_per_side", s.max_grid_per_side},
                        {"cosine_factors", s.cosine_factors},
                        {"max_area_m2", s.max_area_m2}};
        j["relay"] = {{"antenna_spacing_fraction", s.antenna_spacing_fraction}};
        j["seed"] = s.seed;
        j["output_dir"] = s.output_dir;
        j["area_sweep"] = {{"areas_m2", s.area_sweep.areas_m2}, {"se_targets", s.area_sweep.se_targets}};
        j["pathloss"] = {{"distances_m", s.pathloss.distances_m},
                         {"side_x_m", s.pathloss.side_x_m},
                         {"side_y_m", s.pathloss.side_y_m}};
        j["beam_pattern"] = {{"apertures_wavelengths", s.beam_pattern.apertures_wavelengths},
                             {"azimuths_deg", s.beam_pattern.azimuths_deg}};
        json powers = json::array();
        for (double p : s.estimation.pilot_power_dbm)
            powers.push_back(number_json(p));
        const auto &e = s.estimation;
        j["estimation"] = {{"side_x_m", e.side_x_m},
                           {"side_y_m", e.side_y_m},
                           {"groupings", e.groupings},
                           {"oversampling", e.oversampling},
                           {"pilot_power_dbm", powers},
                           {"pilot_symbols_per_config", e.pilot_symbols_per_config},
                           {"num_seeds", e.num_seeds},
                           {"coherence_block_symbols", e.coherence_block_symbols}};
        return j;
    }

    std::uint64_t scenario_hash(const Scenario &s)
    {
        // output_dir does not change any result
        json j = scenario_to_json(s);
        j.erase("output_dir");
        const std::string text = j.dump();
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : text)
        {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    SizingScenario<double> sizing_scenario(const Scenario &s)
    {
        SizingScenario<double> z;
        z.d1 = s.d1();
        z.d2 = s.d2();
        z.budget = s.budget;
        z.carrier = s.carrier;
        z.element_side_fraction = s.element_side_fraction;
        z.antenna_spacing_fraction = s.antenna_spacing_fraction;
        z.max_area_m2 = s.max_area_m2;
        return z;
    }
}
