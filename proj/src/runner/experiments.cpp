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

#include "risim/runner/experiments.hpp"

#include "risim/baselines.hpp"
#include "risim/errors.hpp"
#include "risim/estimation.hpp"
#include "risim/propagation.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#ifndef RISIM_VERSION
#define RISIM_VERSION "unknown"
#endif

namespace risim::runner
{
    using nlohmann::json;

    namespace
    {
        // Rethrow module errors with the sweep point prepended
        template <typename F>
        auto in_context(const std::string &ctx, F &&f) -> decltype(f())
        {
            try
            {
                return f();
            }
            catch (const invalid_input &e)
            {
                throw invalid_input(ctx + ": " + e.what());
            }
            catch (const numeric_failure &e)
            {
                throw numeric_failure(ctx + ": " + e.what());
            }
        }

        std::string ctx_of(const char *key, double v) { return std::string(key) + "=" + format_number(v); }

        std::string num(double v) { return format_number(v); }

        // Linear interpolation of the zero of (b - a) between two sweep points, in log x
        double log_crossing(double x0, double g0, double x1, double g1)
        {
            const double t = g0 / (g0 - g1);
            return std::exp(std::log(x0) + t * (std::log(x1) - std::log(x0)));
        }
    }

    int resolve_threads(int requested)
    {
        if (requested > 0)
            return requested;
        const unsigned hc = std::thread::hardware_concurrency();
        return hc ? int(hc) : 1;
    }

    void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)> &fn)
    {
        const std::size_t workers = std::min<std::size_t>(std::size_t(resolve_threads(threads)), n);
        std::vector<std::exception_ptr> errors(n);
        std::atomic<std::size_t> next{0};
        const auto work = [&]
        {
            for (std::size_t i = next++; i < n; i = next++)
            {
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    errors[i] = std::current_exception();
                }
            }
        };
        if (workers <= 1)
            work();
        else
        {
            std::vector<std::thread> pool;
            for (std::size_t w = 0; w < workers; ++w)
                pool.emplace_back(work);
            for (auto &t : pool)
                t.join();
        }
        for (auto &e : errors)
            if (e)
                std::rethrow_exception(e);
    }

    RisArray<double> evaluation_array(const Scenario &s, const Placement<double> &placement, double side_x_m,
                                      double side_y_m)
    {
        if (!(side_x_m > 0) || !(side_y_m > 0))
            throw invalid_input("surface side lengths must be positive");
        const double lambda = s.carrier.wavelength_m;
        const double nominal = s.element_side_fraction * lambda;
        const double longest = std::max(side_x_m, side_y_m);
        const double n_long = std::min(std::ceil(longest / nominal * (1.0 - 1e-12)), double(s.max_grid_per_side));
        const double elem = longest / n_long;
        const double fraction = elem / lambda;
        if (fraction > 1.0)
            throw invalid_input("surface of " + num(longest) + " m needs elements larger than a wavelength at " +
                                std::to_string(s.max_grid_per_side) + " elements per side");
        // Shorter side snaps to the nearest whole number of elements
        const double shortest = std::min(side_x_m, side_y_m);
        const double fit_short = std::max(1.0, std::round(shortest / elem)) * elem;
        const double sx = side_x_m >= side_y_m ? side_x_m : fit_short;
        const double sy = side_x_m >= side_y_m ? fit_short : side_y_m;
        return build_planar_ris(placement, s.carrier, sx, sy, fraction);
    }

    LinkMetrics<double> ris_optimal_link(const Scenario &s, const Placement<double> &placement, double side_x_m,
                                         double side_y_m)
    {
        const RisArray<double> a = evaluation_array(s, placement, side_x_m, side_y_m);
        const CascadedChannel<double> g = cascaded_channel(a, placement, s.budget, s.carrier, s.cosine_factors);
        return evaluate(g, config_optimal(g), s.budget);
    }

    double ris_closed_form_snr(const Scenario &s, const RisArray<double> &array, const Placement<double> &placement)
    {
        const double amp = far_field_amplitude_sum(array, placement, s.budget, s.cosine_factors);
        return s.budget.tx_power_w * amp * amp / noise_power(s.budget);
    }

    Placement<double> placement_at_rx_distance(const Placement<double> &p, double d2_m)
    {
        Placement<double> q = p;
        q.rx_position = p.surface_center + d2_m * p.rx_direction();
        return q;
    }

    double loglog_slope(const std::vector<double> &x, const std::vector<double> &y)
    {
        if (x.size() != y.size() || x.size() < 2)
            throw invalid_input("loglog_slope: need at least two matching points");
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < x.size(); ++i)
            mx += std::log(x[i]), my += std::log(y[i]);
        mx /= double(x.size()), my /= double(y.size());
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            const double dx = std::log(x[i]) - mx;
            sxy += dx * (std::log(y[i]) - my);
            sxx += dx * dx;
        }
        return sxy / sxx;
    }

    // ---------------------------------------------------------------- area sweeps

    namespace
    {
        struct AreaPoint
        {
            double area = 0;
            LinkMetrics<double> ris;
            RelayMetrics<double> df;
            double closed_form_snr = 0;
            double diagonal = 0;
        };

        std::vector<AreaPoint> area_points(const Scenario &s, int threads)
        {
            const auto &areas = s.area_sweep.areas_m2;
            std::vector<AreaPoint> pts(areas.size());
            parallel_for(areas.size(), threads, [&](std::size_t i) {
                in_context(ctx_of("area_m2", areas[i]), [&] {
                    const double side = std::sqrt(areas[i]);
                    const RisArray<double> a = evaluation_array(s, s.placement, side, side);
                    const auto g = cascaded_channel(a, s.placement, s.budget, s.carrier, s.cosine_factors);
                    AreaPoint &p = pts[i];
                    p.area = areas[i];
                    p.ris = evaluate(g, config_optimal(g), s.budget);
                    p.df = df_relay_se(areas[i], s.d1(), s.d2(), s.budget, s.carrier, s.antenna_spacing_fraction);
                    p.closed_form_snr = ris_closed_form_snr(s, a, s.placement);
                    p.diagonal = std::hypot(a.side_x_m(), a.side_y_m());
                });
            });
            return pts;
        }
    }

    ExperimentOutput experiment_area_vs_se(const Scenario &s, int threads)
    {
        const std::vector<AreaPoint> pts = area_points(s, threads);
        ExperimentOutput out;
        out.name = "area_vs_se";

        CsvTable t{{"area_m2", "se_ris", "se_df"}, {}};
        for (const auto &p : pts)
            t.add_row({num(p.area), num(p.ris.se_bits_per_hz), num(p.df.link.se_bits_per_hz)});

        // Crossover from the table: first sign change of se_ris - se_df
        json crossings = json::array();
        for (std::size_t i = 1; i < pts.size(); ++i)
        {
            const double g0 = pts[i - 1].ris.se_bits_per_hz - pts[i - 1].df.link.se_bits_per_hz;
            const double g1 = pts[i].ris.se_bits_per_hz - pts[i].df.link.se_bits_per_hz;
            if ((g0 < 0) != (g1 < 0))
            {
                const double x = log_crossing(pts[i - 1].area, g0, pts[i].area, g1);
                const double w = (std::log(x) - std::log(pts[i - 1].area)) /
                                 (std::log(pts[i].area) - std::log(pts[i - 1].area));
                const double se = (1 - w) * pts[i - 1].df.link.se_bits_per_hz + w * pts[i].df.link.se_bits_per_hz;
                crossings.push_back({{"area_m2", x}, {"se_bits_per_hz", se}, {"row", i}});
            }
        }
        out.summary["table_crossings"] = crossings;

        // Closed-form validation where min(d1, d2) >= 100 x surface diagonal
        int checked = 0;
        double worst = 0, worst_all = 0;
        for (const auto &p : pts)
        {
            const double dev = std::abs(p.ris.snr_db() - linear_to_db(p.closed_form_snr));
            worst_all = std::max(worst_all, dev);
            if (std::min(s.d1(), s.d2()) >= 100 * p.diagonal)
            {
                ++checked;
                worst = std::max(worst, dev);
            }
        }
        if (worst > 0.1)
            throw numeric_failure("closed-form validation: exact and far-field SNR differ by " + num(worst) +
                                  " dB inside the far-field regime");
        out.summary["closed_form_validation"] = {{"rows_checked", checked},
                                                 {"max_divergence_db", worst},
                                                 {"max_divergence_all_rows_db", worst_all}};

        // Required area per SE target, closed forms in the bisection, exact sum at the RIS answer
        const SizingScenario<double> z = sizing_scenario(s);
        const auto &targets = s.area_sweep.se_targets;
        std::vector<std::array<double, 3>> req(targets.size());
        parallel_for(targets.size(), threads, [&](std::size_t i) {
            in_context(ctx_of("target_se", targets[i]), [&] {
                const auto ris = required_area(targets[i], Technology::ris, z);
                const auto df = required_area(targets[i], Technology::df_relay, z);
                const double side = std::sqrt(ris.area_m2);
                req[i] = {ris.area_m2, df.area_m2, ris_optimal_link(s, s.placement, side, side).se_bits_per_hz};
            });
        });
        CsvTable r{{"target_se", "area_ris_m2", "area_df_m2", "se_ris_exact"}, {}};
        for (std::size_t i = 0; i < targets.size(); ++i)
            r.add_row({num(targets[i]), num(req[i][0]), num(req[i][1]), num(req[i][2])});

        // Closed-form crossover of the two required-area curves, null if the targets do not bracket it
        out.summary["required_area_crossover"] = nullptr;
        if (targets.size() >= 2)
        {
            try
            {
                const auto c = required_area_crossover(z, targets.front(), targets.back());
                out.summary["required_area_crossover"] = {{"se_bits_per_hz", c.se_bits_per_hz},
                                                          {"area_m2", c.area_m2}};
            }
            catch (const numeric_failure &)
            {
            }
        }

        out.files.emplace_back("area_vs_se.csv", std::move(t));
        out.files.emplace_back("required_area.csv", std::move(r));
        return out;
    }

    ExperimentOutput experiment_snr_vs_area(const Scenario &s, int threads)
    {
        const std::vector<AreaPoint> pts = area_points(s, threads);
        ExperimentOutput out;
        out.name = "snr_vs_area";
        CsvTable t{{"area_m2", "snr_ris_db", "snr_df_db"}, {}};
        bool df_dominates = true;
        for (const auto &p : pts)
        {
            t.add_row({num(p.area), num(p.ris.snr_db()), num(p.df.link.snr_db())});
            df_dominates = df_dominates && p.df.link.snr_linear >= p.ris.snr_linear;
        }

        // Slopes over the smallest decade of the sweep
        std::vector<double> a, ris, df;
        for (const auto &p : pts)
            if (p.area <= pts.front().area * 10 * (1 + 1e-9))
            {
                a.push_back(p.area);
                ris.push_back(p.ris.snr_linear);
                df.push_back(p.df.link.snr_linear);
            }
        if (a.size() >= 2)
            out.summary["smallest_decade_slope"] = {{"ris", loglog_slope(a, ris)}, {"df", loglog_slope(a, df)}};
        else
            out.summary["smallest_decade_slope"] = nullptr;
        out.summary["df_snr_at_least_ris_everywhere"] = df_dominates;
        out.files.emplace_back("snr_vs_area.csv", std::move(t));
        return out;
    }

    // ---------------------------------------------------------------- pathloss

    namespace
    {
        struct PathlossPoint
        {
            double optimal_db = 0, mimicking_db = 0, mirror_db = 0;
        };

        PathlossPoint pathloss_point(const Scenario &s, const RisArray<double> &a, double d2)
        {
            const Placement<double> p = placement_at_rx_distance(s.placement, d2);
            const auto g = cascaded_channel(a, p, s.budget, s.carrier, s.cosine_factors);
            PathlossPoint r;
            r.optimal_db = evaluate(g, config_optimal(g), s.budget).end_to_end_gain_db;
            r.mimicking_db = evaluate(g, config_mirror_mimicking(a, p, s.carrier), s.budget).end_to_end_gain_db;
            r.mirror_db = linear_to_db(mirror_end_to_end_gain(s.d1(), d2, s.budget, s.carrier));
            return r;
        }
    }

    ExperimentOutput experiment_pathloss_vs_distance(const Scenario &s, int threads)
    {
        const RisArray<double> a = evaluation_array(s, s.placement, s.pathloss.side_x_m, s.pathloss.side_y_m);
        const auto &d = s.pathloss.distances_m;
        std::vector<PathlossPoint> pts(d.size());
        parallel_for(d.size(), threads, [&](std::size_t i) {
            in_context(ctx_of("d2_m", d[i]), [&] { pts[i] = pathloss_point(s, a, d[i]); });
        });

        ExperimentOutput out;
        out.name = "pathloss_vs_distance";
        CsvTable t{{"d2_m", "gain_optimal_db", "gain_mirror_mimicking_db", "gain_ideal_mirror_db"}, {}};
        for (std::size_t i = 0; i < d.size(); ++i)
            t.add_row({num(d[i]), num(pts[i].optimal_db), num(pts[i].mimicking_db), num(pts[i].mirror_db)});

        // Refine every sign change of (optimal - mirror) by bisection in log distance
        json crossings = json::array();
        for (std::size_t i = 1; i < d.size(); ++i)
        {
            const double g0 = pts[i - 1].optimal_db - pts[i - 1].mirror_db;
            const double g1 = pts[i].optimal_db - pts[i].mirror_db;
            if ((g0 < 0) == (g1 < 0))
                continue;
            double lo = std::log(d[i - 1]), hi = std::log(d[i]);
            const bool lo_above = g0 >= 0;
            for (int it = 0; it < 60; ++it)
            {
                const double mid = 0.5 * (lo + hi);
                const PathlossPoint p = pathloss_point(s, a, std::exp(mid));
                ((p.optimal_db - p.mirror_db >= 0) == lo_above ? lo : hi) = mid;
            }
            crossings.push_back(std::exp(0.5 * (lo + hi)));
        }
        out.summary["crossing_distances_m"] = crossings;
        out.summary["surface_side_x_m"] = a.side_x_m();
        out.summary["surface_side_y_m"] = a.side_y_m();
        out.files.emplace_back("pathloss_vs_distance.csv", std::move(t));
        return out;
    }

    // ---------------------------------------------------------------- beam pattern

    ExperimentOutput experiment_beam_pattern(const Scenario &s, int threads)
    {
        const auto &ap = s.beam_pattern.apertures_wavelengths;
        const auto &az = s.beam_pattern.azimuths_deg;
        std::vector<VecX<double>> patterns(ap.size());
        std::vector<double> widths(ap.size(), std::numeric_limits<double>::quiet_NaN());
        parallel_for(ap.size(), threads, [&](std::size_t i) {
            in_context(ctx_of("aperture_wavelengths", ap[i]), [&] {
                const double side = ap[i] * s.carrier.wavelength_m;
                const RisArray<double> a = evaluation_array(s, s.placement, side, side);
                // Normal incidence, specular (boresight) beam: all phases equal
                const PhaseConfig<double> c = uniform_config<double>(a.num_elements());
                patterns[i] = beam_pattern(a, c, Vec3<double>(a.surface_normal), az, s.carrier);
                try
                {
                    widths[i] = hpbw(patterns[i], az);
                }
                catch (const numeric_failure &)
                {
                    // Main lobe wider than the azimuth window; reported as null
                }
            });
        });

        ExperimentOutput out;
        out.name = "beam_pattern";
        CsvTable t{{"aperture_wavelengths", "azimuth_deg", "power_norm", "power_norm_db"}, {}};
        json hp = json::array();
        for (std::size_t i = 0; i < ap.size(); ++i)
        {
            for (std::size_t k = 0; k < az.size(); ++k)
                t.add_row({num(ap[i]), num(az[k]), num(patterns[i](Eigen::Index(k))),
                           num(linear_to_db(patterns[i](Eigen::Index(k))))});
            hp.push_back({{"aperture_wavelengths", ap[i]},
                          {"hpbw_deg", std::isnan(widths[i]) ? json(nullptr) : json(widths[i])}});
        }
        out.summary["hpbw"] = hp;
        out.files.emplace_back("beam_pattern.csv", std::move(t));
        return out;
    }

    // ---------------------------------------------------------------- estimation

    ExperimentOutput experiment_estimation(const Scenario &s, int threads)
    {
        const auto &e = s.estimation;
        const RisArray<double> a = evaluation_array(s, s.placement, e.side_x_m, e.side_y_m);
        const CascadedChannel<double> g = cascaded_channel(a, s.placement, s.budget, s.carrier, s.cosine_factors);
        const double sigma2 = noise_power(s.budget);

        std::vector<GroupLayout> layouts;
        for (int k : e.groupings)
            layouts.push_back(in_context("grouping=" + std::to_string(k), [&] { return make_group_layout(a, k, k); }));

        struct Row
        {
            std::size_t grouping, oversampling, power;
        };
        std::vector<Row> rows;
        for (std::size_t gi = 0; gi < e.groupings.size(); ++gi)
            for (std::size_t oi = 0; oi < e.oversampling.size(); ++oi)
                for (std::size_t wi = 0; wi < e.pilot_power_dbm.size(); ++wi)
                    rows.push_back({gi, oi, wi});

        const std::size_t seeds = std::size_t(e.num_seeds);
        std::vector<EstimationTrial<double>> trials(rows.size() * seeds);
        std::vector<long long> slots(rows.size());
        parallel_for(trials.size(), threads, [&](std::size_t idx) {
            const Row &r = rows[idx / seeds];
            const std::uint64_t seed = s.seed + std::uint64_t(idx % seeds);
            const double p_dbm = e.pilot_power_dbm[r.power];
            const bool noiseless = std::isinf(p_dbm);
            in_context("grouping=" + std::to_string(e.groupings[r.grouping]) + " pilot_power_dbm=" + num(p_dbm), [&] {
                const GroupLayout &layout = layouts[r.grouping];
                const SweepPlan<double> plan =
                    dft_sweep<double>(layout.num_groups(), e.oversampling[r.oversampling],
                                      noiseless ? 1.0 : dbm_to_watt(p_dbm), e.pilot_symbols_per_config, seed);
                trials[idx] = run_estimation_trial(g, layout, plan, s.budget, noiseless ? 0.0 : sigma2,
                                                   e.coherence_block_symbols);
                if (idx % seeds == 0)
                    slots[idx / seeds] = plan.pilot_slots();
            });
        });

        ExperimentOutput out;
        out.name = "estimation";
        CsvTable agg{{"grouping", "oversampling", "pilot_power_dbm", "pilot_slots", "snr_loss_db", "effective_se"}, {}};
        CsvTable per{{"seed", "T", "grouping", "pilot_power_dbm", "snr_loss_db", "effective_se"}, {}};
        for (std::size_t ri = 0; ri < rows.size(); ++ri)
        {
            const Row &r = rows[ri];
            double loss = 0, eff = 0;
            for (std::size_t k = 0; k < seeds; ++k)
            {
                const auto &tr = trials[ri * seeds + k];
                loss += tr.result.snr_loss_vs_perfect_csi_db;
                eff += tr.effective.se_bits_per_hz;
                const long long T = slots[ri] / e.pilot_symbols_per_config;
                per.add_row({format_integer((long long)(s.seed + k)), format_integer(T),
                             format_integer(e.groupings[r.grouping]), num(e.pilot_power_dbm[r.power]),
                             num(tr.result.snr_loss_vs_perfect_csi_db), num(tr.effective.se_bits_per_hz)});
            }
            agg.add_row({format_integer(e.groupings[r.grouping]), format_integer(e.oversampling[r.oversampling]),
                         num(e.pilot_power_dbm[r.power]), format_integer(slots[ri]), num(loss / double(seeds)),
                         num(eff / double(seeds))});
        }
        out.summary["num_elements"] = a.num_elements();
        out.summary["perfect_csi_snr_db"] = evaluate(g, config_optimal(g), s.budget).snr_db();
        out.summary["num_seeds"] = e.num_seeds;
        out.files.emplace_back("estimation.csv", std::move(agg));
        out.files.emplace_back("estimation_trials.csv", std::move(per));
        return out;
    }

    // ---------------------------------------------------------------- orchestration

    const std::vector<std::string> &experiment_names()
    {
        static const std::vector<std::string> names{"area_vs_se", "snr_vs_area", "pathloss_vs_distance",
                                                    "beam_pattern", "estimation"};
        return names;
    }

    ExperimentOutput run_experiment(const std::string &name, const Scenario &s, int threads)
    {
        if (name == "area_vs_se")
            return experiment_area_vs_se(s, threads);
        if (name == "snr_vs_area")
            return experiment_snr_vs_area(s, threads);
        if (name == "pathloss_vs_distance")
            return experiment_pathloss_vs_distance(s, threads);
        if (name == "beam_pattern")
            return experiment_beam_pattern(s, threads);
        if (name == "estimation")
            return experiment_estimation(s, threads);
        throw invalid_input("unknown experiment '" + name + "'");
    }

    Manifest run_selected(const std::vector<std::string> &names, const Scenario &s, int threads)
    {
        validate(s);
        Manifest m;
        m.tool_version = RISIM_VERSION;
        m.scenario_hash = scenario_hash(s);
        m.seed = s.seed;
        for (const auto &n : names)
            m.experiments.push_back(run_experiment(n, s, threads));
        return m;
    }

    Manifest run_all(const Scenario &s, int threads) { return run_selected(experiment_names(), s, threads); }

    // ---------------------------------------------------------------- saturation

    std::vector<SaturationRow> saturation_sweep(const Scenario &s, double max_side_m, int doublings,
                                                int grid_per_side, bool cosine_factors, int threads)
    {
        if (!(max_side_m > 0) || doublings < 1 || grid_per_side < 1)
            throw invalid_input("saturation_sweep: need a positive side, >= 1 doubling and >= 1 element per side");
        std::vector<SaturationRow> rows(std::size_t(doublings) + 1);
        parallel_for(rows.size(), threads, [&](std::size_t i) {
            const double side = max_side_m * std::pow(2.0, -0.5 * double(doublings - int(i)));
            in_context(ctx_of("side_m", side), [&] {
                const double fraction = side / double(grid_per_side) / s.carrier.wavelength_m;
                const RisArray<double> a = build_planar_ris(s.placement, s.carrier, side, side, fraction);
                const auto g = cascaded_channel(a, s.placement, s.budget, s.carrier, cosine_factors);
                const auto m = evaluate(g, config_optimal(g), s.budget);
                rows[i] = {side, side * side, (long long)a.num_elements(), m.snr_db(), 0.0};
            });
        });
        for (std::size_t i = 1; i < rows.size(); ++i)
            rows[i].doubling_ratio = db_to_linear(rows[i].snr_db - rows[i - 1].snr_db);
        return rows;
    }
}
