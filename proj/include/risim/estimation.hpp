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

#include "risim/errors.hpp"
#include "risim/propagation.hpp"
#include "risim/random.hpp"
#include "risim/surface.hpp"
#include "risim/units.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace risim
{
    enum class PlanKind
    {
        dft,    // Row t applies phases 2 pi t k / T
        on_off, // Row 0 all on, row t switches off unknown t - 1
        custom  // Explicit weight matrix
    };

    // Sequence of T surface configurations, each observed with repeated pilots. The K unknowns
    // are either the N elements or the tiles of a grouping layout.
    template <typename T>
    struct SweepPlan
    {
        PlanKind kind = PlanKind::dft;
        Eigen::Index num_unknowns = 0;
        Eigen::Index num_configs = 0;
        int oversampling = 1;
        CMatX<T> weights;                // Only populated for PlanKind::custom
        T pilot_power_w = T(10);
        int pilot_symbols_per_config = 1;
        std::uint64_t seed = 0;

        // Complex weight of unknown k in configuration t
        std::complex<T> weight(Eigen::Index t, Eigen::Index k) const
        {
            switch (kind)
            {
            case PlanKind::dft:
            {
                // Integer reduction keeps the phase argument small and exact
                const long long r = (long long)((t * k) % num_configs);
                return std::polar(T(1), two_pi<T> * T(r) / T(num_configs));
            }
            case PlanKind::on_off:
                return (t > 0 && k == t - 1) ? std::complex<T>(0) : std::complex<T>(1);
            case PlanKind::custom:
                break;
            }
            return weights(t, k);
        }

        // Phase configuration applied in slot t (switched-off unknowns report phase 0)
        PhaseConfig<T> config(Eigen::Index t) const
        {
            PhaseConfig<T> c;
            c.phases_rad.resize(num_unknowns);
            for (Eigen::Index k = 0; k < num_unknowns; ++k)
            {
                const std::complex<T> w = weight(t, k);
                c.phases_rad(k) = std::abs(w) > T(0) ? wrap_phase(std::arg(w)) : T(0);
            }
            return c;
        }

        long long pilot_slots() const { return (long long)num_configs * pilot_symbols_per_config; }
    };

    template <typename T>
    CMatX<T> pattern_matrix(const SweepPlan<T> &plan)
    {
        if (plan.kind == PlanKind::custom)
            return plan.weights;
        CMatX<T> m(plan.num_configs, plan.num_unknowns);
        for (Eigen::Index t = 0; t < plan.num_configs; ++t)
            for (Eigen::Index k = 0; k < plan.num_unknowns; ++k)
                m(t, k) = plan.weight(t, k);
        return m;
    }

    // Ratio of the largest to the smallest singular value of the T x K pattern
    template <typename T>
    T condition_number(const SweepPlan<T> &plan)
    {
        const Eigen::JacobiSVD<CMatX<T>> svd(pattern_matrix(plan));
        const VecX<T> &s = svd.singularValues();
        if (s.size() == 0)
            return T(0);
        return s(s.size() - 1) > T(0) ? s(0) / s(s.size() - 1) : std::numeric_limits<T>::infinity();
    }

    template <typename T>
    SweepPlan<T> dft_sweep(Eigen::Index num_unknowns, int oversampling = 1, T pilot_power_w = T(10),
                           int pilot_symbols_per_config = 1, std::uint64_t seed = 0)
    {
        if (num_unknowns < 1)
            throw invalid_input("dft_sweep: at least one unknown is required");
        if (oversampling < 1 || pilot_symbols_per_config < 1 || !(pilot_power_w > T(0)))
            throw invalid_input("dft_sweep: oversampling, pilot repetitions and pilot power must be positive");
        SweepPlan<T> p;
        p.kind = PlanKind::dft;
        p.num_unknowns = num_unknowns;
        p.num_configs = num_unknowns * oversampling;
        p.oversampling = oversampling;
        p.pilot_power_w = pilot_power_w;
        p.pilot_symbols_per_config = pilot_symbols_per_config;
        p.seed = seed;
        return p;
    }

    // T = K + 1 on/off patterns; the condition number grows roughly linearly with K
    template <typename T>
    SweepPlan<T> on_off_sweep(Eigen::Index num_unknowns, T pilot_power_w = T(10), int pilot_symbols_per_config = 1,
                              std::uint64_t seed = 0)
    {
        SweepPlan<T> p = dft_sweep<T>(num_unknowns, 1, pilot_power_w, pilot_symbols_per_config, seed);
        p.kind = PlanKind::on_off;
        p.num_configs = num_unknowns + 1;
        return p;
    }

    template <typename T>
    SweepPlan<T> custom_sweep(CMatX<T> weights, T pilot_power_w = T(10), int pilot_symbols_per_config = 1,
                              std::uint64_t seed = 0)
    {
        if (weights.rows() < weights.cols() || weights.cols() < 1)
            throw invalid_input("custom_sweep: need at least as many configurations as unknowns");
        SweepPlan<T> p = dft_sweep<T>(weights.cols(), 1, pilot_power_w, pilot_symbols_per_config, seed);
        p.kind = PlanKind::custom;
        p.num_configs = weights.rows();
        p.weights = std::move(weights);
        return p;
    }

    // sqrt(P) * sum_k w_tk s_k for every slot t
    template <typename T>
    CVecX<T> noiseless_samples(const CVecX<T> &unknowns, const SweepPlan<T> &plan)
    {
        if (unknowns.size() != plan.num_unknowns)
            throw invalid_input("sweep plan expects " + std::to_string(plan.num_unknowns) + " unknowns, got " +
                                std::to_string(unknowns.size()));
        const T amp = std::sqrt(plan.pilot_power_w);
        CVecX<T> y(plan.num_configs);
        if (plan.kind == PlanKind::dft)
        {
            // Unscaled inverse DFT of the zero-padded unknowns
            std::vector<std::complex<T>> in(std::size_t(plan.num_configs), std::complex<T>(0)), out;
            for (Eigen::Index k = 0; k < unknowns.size(); ++k)
                in[std::size_t(k)] = unknowns(k);
            Eigen::FFT<T> fft;
            fft.SetFlag(Eigen::FFT<T>::Unscaled);
            fft.inv(out, in);
            for (Eigen::Index t = 0; t < plan.num_configs; ++t)
                y(t) = amp * out[std::size_t(t)];
            return y;
        }
        for (Eigen::Index t = 0; t < plan.num_configs; ++t)
        {
            std::complex<T> acc(0);
            for (Eigen::Index k = 0; k < plan.num_unknowns; ++k)
                acc += plan.weight(t, k) * unknowns(k);
            y(t) = amp * acc;
        }
        return y;
    }

    // Adds receiver noise to each slot: the average over the slot's repeated pilots of
    // CN(0, noise_power_w) draws from sub-stream (plan.seed, t)
    template <typename T>
    void add_pilot_noise(CVecX<T> &samples, const SweepPlan<T> &plan, T noise_power_w)
    {
        if (noise_power_w < T(0))
            throw invalid_input("noise power must be non-negative");
        if (noise_power_w == T(0))
            return;
        const int reps = plan.pilot_symbols_per_config;
        for (Eigen::Index t = 0; t < samples.size(); ++t)
        {
            ComplexGaussian<T> gauss(substream_seed(plan.seed, std::uint64_t(t)));
            std::complex<T> acc(0);
            for (int r = 0; r < reps; ++r)
                acc += gauss(noise_power_w);
            samples(t) += acc / T(reps);
        }
    }

    // Received pilot samples, one per configuration; the unknowns are the tile sums of the layout
    template <typename T>
    CVecX<T> simulate_sweep(const CascadedChannel<T> &channel, const GroupLayout &layout, const SweepPlan<T> &plan,
                            T noise_power_w)
    {
        CVecX<T> y = noiseless_samples(group_sums(channel.coefficients, layout), plan);
        add_pilot_noise(y, plan, noise_power_w);
        return y;
    }

    template <typename T>
    CVecX<T> simulate_sweep(const CascadedChannel<T> &channel, const SweepPlan<T> &plan, T noise_power_w)
    {
        CVecX<T> y = noiseless_samples(channel.coefficients, plan);
        add_pilot_noise(y, plan, noise_power_w);
        return y;
    }

    // Least-squares recovery of the K unknowns. DFT plans have orthogonal columns, so the
    // solution is a forward FFT; other plans go through a rank-checked QR solve.
    template <typename T>
    CVecX<T> ls_estimate(const CVecX<T> &samples, const SweepPlan<T> &plan)
    {
        if (samples.size() != plan.num_configs)
            throw invalid_input("ls_estimate: expected " + std::to_string(plan.num_configs) + " samples, got " +
                                std::to_string(samples.size()));
        const T amp = std::sqrt(plan.pilot_power_w);
        if (plan.kind == PlanKind::dft)
        {
            std::vector<std::complex<T>> in(samples.data(), samples.data() + samples.size()), out;
            Eigen::FFT<T> fft;
            fft.fwd(out, in);
            CVecX<T> g(plan.num_unknowns);
            const T scale = T(1) / (T(plan.num_configs) * amp);
            for (Eigen::Index k = 0; k < plan.num_unknowns; ++k)
                g(k) = out[std::size_t(k)] * scale;
            return g;
        }
        const CMatX<T> a = pattern_matrix(plan);
        if (condition_number(plan) >= T(1e6))
            throw numeric_failure("ls_estimate: rank-deficient sweep plan");
        const Eigen::ColPivHouseholderQR<CMatX<T>> qr(a);
        return qr.solve(samples) / amp;
    }

    template <typename T>
    struct EstimationResult
    {
        CVecX<T> estimated_coefficients;
        PhaseConfig<T> selected_config;
        long long pilot_slots_used = 0;
        T post_config_snr_db = T(0);
        T snr_loss_vs_perfect_csi_db = T(0);
    };

    // Configuration fed back to the surface: co-phasing of the estimated unknowns, expanded over
    // tiles, scored on the true channel against perfect-CSI element-wise co-phasing.
    template <typename T>
    EstimationResult<T> select_and_score(const CascadedChannel<T> &channel, const CVecX<T> &estimate,
                                         const LinkBudget<T> &budget, const GroupLayout &layout,
                                         long long pilot_slots_used)
    {
        VecX<T> phases(estimate.size());
        for (Eigen::Index k = 0; k < estimate.size(); ++k)
            phases(k) = wrap_phase(-std::arg(estimate(k)));

        EstimationResult<T> r;
        r.estimated_coefficients = estimate;
        r.selected_config = expand_group_phases(phases, layout);
        if (layout.group_rows == 1 && layout.group_cols == 1)
            r.selected_config.group_rows = r.selected_config.group_cols = std::nullopt;
        r.pilot_slots_used = pilot_slots_used;
        r.post_config_snr_db = evaluate(channel, r.selected_config, budget).snr_db();
        const T perfect_db = evaluate(channel, config_optimal(channel), budget).snr_db();
        r.snr_loss_vs_perfect_csi_db = std::max(T(0), perfect_db - r.post_config_snr_db);
        return r;
    }

    // Element-wise (ungrouped) variant
    template <typename T>
    EstimationResult<T> select_and_score(const CascadedChannel<T> &channel, const CVecX<T> &estimate,
                                         const LinkBudget<T> &budget, long long pilot_slots_used)
    {
        if (estimate.size() != channel.size())
            throw invalid_input("select_and_score: estimate length does not match the channel");
        GroupLayout identity;
        identity.groups_per_row = int(channel.size());
        identity.groups_per_col = 1;
        identity.group_of.resize(std::size_t(channel.size()));
        for (Eigen::Index n = 0; n < channel.size(); ++n)
            identity.group_of[std::size_t(n)] = n;
        return select_and_score(channel, estimate, budget, identity, pilot_slots_used);
    }

    template <typename T>
    struct EffectiveSe
    {
        T se_bits_per_hz = T(0);
        bool overhead_exceeded = false; // Pilots fill the whole coherence block
    };

    // SE left after charging the pilot slots against the coherence block
    template <typename T>
    EffectiveSe<T> effective_se(T se, long long pilot_slots, long long coherence_block_symbols)
    {
        if (coherence_block_symbols < 1 || pilot_slots < 0)
            throw invalid_input("effective_se: coherence block must be positive and pilot slots non-negative");
        if (pilot_slots >= coherence_block_symbols)
            return {T(0), true};
        return {(T(1) - T(pilot_slots) / T(coherence_block_symbols)) * se, false};
    }

    template <typename T>
    struct EstimationTrial
    {
        EstimationResult<T> result;
        EffectiveSe<T> effective;
    };

    // One pass of the pilot-sweep protocol: sweep, estimate, feed back, score
    template <typename T>
    EstimationTrial<T> run_estimation_trial(const CascadedChannel<T> &channel, const GroupLayout &layout,
                                            const SweepPlan<T> &plan, const LinkBudget<T> &budget, T noise_power_w,
                                            long long coherence_block_symbols)
    {
        const CVecX<T> y = simulate_sweep(channel, layout, plan, noise_power_w);
        const CVecX<T> est = ls_estimate(y, plan);
        EstimationTrial<T> trial;
        trial.result = select_and_score(channel, est, budget, layout, plan.pilot_slots());
        const T se = std::log2(T(1) + db_to_linear(trial.result.post_config_snr_db));
        trial.effective = effective_se(se, plan.pilot_slots(), coherence_block_symbols);
        return trial;
    }
}
