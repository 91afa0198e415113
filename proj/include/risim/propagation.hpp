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
#include "risim/scene.hpp"
#include "risim/units.hpp"

#include <cmath>
#include <complex>
#include <string>

namespace risim
{
    // Which hop of the link passes through the lossy material
    enum class PenetrationHop
    {
        tx_side,
        rx_side,
        both
    };

    template <typename T>
    struct LinkBudget
    {
        T tx_power_w = T(10);
        T relay_tx_power_w = T(0.1);
        T tx_gain_dbi = T(10);
        T rx_gain_dbi = T(0);
        T relay_gain_dbi = T(0);
        T penetration_loss_db = T(-20);
        T bandwidth_hz = T(20e6);
        T noise_figure_db = T(10);
        PenetrationHop penetration_on = PenetrationHop::tx_side;
        T element_amplitude = T(1); // Per-element scattering amplitude in (0, 1]

        T tx_gain() const { return db_to_linear(tx_gain_dbi); }
        T rx_gain() const { return db_to_linear(rx_gain_dbi); }
        T relay_gain() const { return db_to_linear(relay_gain_dbi); }
        T penetration_loss() const { return db_to_linear(penetration_loss_db); }

        T tx_hop_penetration() const
        {
            return penetration_on == PenetrationHop::rx_side ? T(1) : penetration_loss();
        }
        T rx_hop_penetration() const
        {
            return penetration_on == PenetrationHop::tx_side ? T(1) : penetration_loss();
        }
        // Total loss along a tx -> surface -> rx path
        T path_penetration() const { return tx_hop_penetration() * rx_hop_penetration(); }
    };

    template <typename T>
    void validate(const LinkBudget<T> &b)
    {
        if (!(b.tx_power_w > T(0)))
            throw invalid_input("tx_power_w must be positive");
        if (!(b.relay_tx_power_w > T(0)))
            throw invalid_input("relay_tx_power_w must be positive");
        if (!(b.penetration_loss_db <= T(0)))
            throw invalid_input("penetration_loss_db must be <= 0");
        if (!(b.bandwidth_hz > T(0)))
            throw invalid_input("bandwidth_hz must be positive");
        if (!(b.noise_figure_db >= T(0)))
            throw invalid_input("noise_figure_db must be >= 0");
        if (!(b.element_amplitude > T(0)) || b.element_amplitude > T(1))
            throw invalid_input("element_amplitude must lie in (0, 1]");
    }

    // Per-element end-to-end coefficients through the surface, one point source per element
    template <typename T>
    struct CascadedChannel
    {
        CVecX<T> coefficients;
        VecX<T> d1_m; // Transmitter to element
        VecX<T> d2_m; // Element to receiver

        Eigen::Index size() const { return coefficients.size(); }
    };

    // Friis free-space power gain
    template <typename T>
    T freespace_gain(T distance_m, T gain_tx_linear, T gain_rx_linear, T wavelength_m)
    {
        if (!(distance_m > T(0)))
            throw invalid_input("freespace_gain: distance must be positive");
        const T f = wavelength_m / (T(4) * pi<T> * distance_m);
        return gain_tx_linear * gain_rx_linear * f * f;
    }

    // Thermal noise power in watts for the budget's bandwidth and noise figure
    template <typename T>
    T noise_power(const LinkBudget<T> &budget)
    {
        if (!(budget.bandwidth_hz > T(0)))
            throw invalid_input("noise_power: bandwidth must be positive");
        const T dbm = thermal_noise_dbm_per_hz<T> + T(10) * std::log10(budget.bandwidth_hz) + budget.noise_figure_db;
        return dbm_to_watt(dbm);
    }

    // Power gain of an ideal (infinitely large) mirror: the receiver sees the mirror image of
    // the transmitter at distance d1 + d2
    template <typename T>
    T mirror_end_to_end_gain(T d1, T d2, const LinkBudget<T> &budget, const CarrierSpec<T> &carrier)
    {
        if (d1 < T(0) || !(d2 > T(0)))
            throw invalid_input("mirror_end_to_end_gain: distances must be positive");
        return budget.path_penetration() *
               freespace_gain(d1 + d2, budget.tx_gain(), budget.rx_gain(), carrier.wavelength_m);
    }

    // g_n = sqrt(Gt Gr L) * A_n / (4 pi d1_n d2_n) * exp(-j 2 pi (d1_n + d2_n) / lambda)
    // With cosine_factors, A_n = A * sqrt(cos(theta1_n) cos(theta2_n)) (angles to the surface normal).
    template <typename T>
    CascadedChannel<T> cascaded_channel(const RisArray<T> &array, const Placement<T> &placement,
                                        const LinkBudget<T> &budget, const CarrierSpec<T> &carrier,
                                        bool cosine_factors = false)
    {
        const Eigen::Index n = array.num_elements();
        const T min_distance = T(10) * array.element_side_m;
        const T k = carrier.wavenumber();
        const T amp0 = budget.element_amplitude *
                       std::sqrt(budget.tx_gain() * budget.rx_gain() * budget.path_penetration()) *
                       array.element_area_m2 / (T(4) * pi<T>);

        CascadedChannel<T> ch;
        ch.coefficients.resize(n);
        ch.d1_m.resize(n);
        ch.d2_m.resize(n);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            const Vec3<T> c = array.element_centers.col(i);
            const Vec3<T> to_tx = placement.tx_position - c;
            const Vec3<T> to_rx = placement.rx_position - c;
            const T d1 = to_tx.norm(), d2 = to_rx.norm();
            if (!(d1 > min_distance) || !(d2 > min_distance))
                throw invalid_input("element " + std::to_string(i) +
                                    " is too close to a terminal for the point-source model");
            T amp = amp0 / (d1 * d2);
            if (cosine_factors)
            {
                const T cos1 = to_tx.dot(array.surface_normal) / d1;
                const T cos2 = to_rx.dot(array.surface_normal) / d2;
                amp *= std::sqrt(std::max(cos1, T(0)) * std::max(cos2, T(0)));
            }
            ch.d1_m(i) = d1;
            ch.d2_m(i) = d2;
            ch.coefficients(i) = std::polar(amp, -k * (d1 + d2));
        }
        return ch;
    }

    // Far-field closed form of sum_n |g_n|, measured from the surface center
    template <typename T>
    T far_field_amplitude_sum(const RisArray<T> &array, const Placement<T> &placement,
                              const LinkBudget<T> &budget, bool cosine_factors = false)
    {
        const T d1 = placement.tx_distance(), d2 = placement.rx_distance();
        T amp = budget.element_amplitude *
                std::sqrt(budget.tx_gain() * budget.rx_gain() * budget.path_penetration()) *
                array.element_area_m2 / (T(4) * pi<T> * d1 * d2);
        if (cosine_factors)
            amp *= std::sqrt(placement.tx_direction().dot(array.surface_normal) *
                             placement.rx_direction().dot(array.surface_normal));
        return T(array.num_elements()) * amp;
    }
}
