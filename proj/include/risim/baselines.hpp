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
#include "risim/surface.hpp"
#include "risim/units.hpp"

#include <cmath>
#include <string>

namespace risim
{
    template <typename T>
    struct RelaySpec
    {
        long long num_antennas = 1;
        T antenna_spacing_fraction = T(0.5); // In wavelengths
        T relay_tx_power_w = T(0.1);
        T relay_gain_dbi = T(0);
    };

    // Antennas on a (spacing * lambda)^2 grid that fit into the given area
    template <typename T>
    RelaySpec<T> relay_for_area(T area_m2, const LinkBudget<T> &budget, const CarrierSpec<T> &carrier,
                                T spacing_fraction = T(0.5))
    {
        const T cell = spacing_fraction * carrier.wavelength_m;
        const long long m = (long long)std::floor(area_m2 / (cell * cell) * (T(1) + T(1e-12)));
        if (m < 1)
            throw invalid_input("relay area too small for one antenna");
        return {m, spacing_fraction, budget.relay_tx_power_w, budget.relay_gain_dbi};
    }

    template <typename T>
    struct RelayMetrics
    {
        LinkMetrics<T> link; // SNR is the bottleneck hop
        T snr_first_hop = T(0);
        T snr_second_hop = T(0);
        long long num_antennas = 0;
    };

    // Half-duplex repetition-coded decode-and-forward relay without a direct path.
    // Hop 1 uses receive combining over M antennas, hop 2 transmit beamforming over M antennas.
    template <typename T>
    RelayMetrics<T> df_relay_se(T area_m2, T d1, T d2, const LinkBudget<T> &budget, const CarrierSpec<T> &carrier,
                                T spacing_fraction = T(0.5))
    {
        const RelaySpec<T> relay = relay_for_area(area_m2, budget, carrier, spacing_fraction);
        const T sigma2 = noise_power(budget);
        const T m = T(relay.num_antennas);
        const T g_relay = db_to_linear(relay.relay_gain_dbi);

        RelayMetrics<T> r;
        r.num_antennas = relay.num_antennas;
        r.snr_first_hop = budget.tx_power_w * budget.tx_hop_penetration() *
                          freespace_gain(d1, budget.tx_gain(), g_relay, carrier.wavelength_m) * m / sigma2;
        r.snr_second_hop = relay.relay_tx_power_w * budget.rx_hop_penetration() *
                           freespace_gain(d2, g_relay, budget.rx_gain(), carrier.wavelength_m) * m / sigma2;
        r.link.snr_linear = std::min(r.snr_first_hop, r.snr_second_hop);
        r.link.se_bits_per_hz = T(0.5) * std::log2(T(1) + r.link.snr_linear);
        r.link.end_to_end_gain_db = linear_to_db(r.link.snr_linear * sigma2 / budget.tx_power_w);
        return r;
    }

    // Equal-sized transmit array at the surface location: total power P split over N elements of
    // area A, each with gain 4 pi A / lambda^2, coherently combined at the receiver.
    template <typename T>
    LinkMetrics<T> tx_array_snr(T area_m2, T d2, const LinkBudget<T> &budget, const CarrierSpec<T> &carrier,
                                T element_side_fraction = T(0.2))
    {
        const T elem = element_side_fraction * carrier.wavelength_m;
        const T a = elem * elem;
        const long long n = (long long)std::floor(area_m2 / a * (T(1) + T(1e-12)));
        if (n < 1)
            throw invalid_input("transmit array area too small for one element");
        const T lambda = carrier.wavelength_m;
        const T g_elem = T(4) * pi<T> * a / (lambda * lambda);
        const T gain = T(n) * freespace_gain(d2, g_elem, budget.rx_gain(), lambda);
        LinkMetrics<T> m;
        m.snr_linear = budget.tx_power_w * gain / noise_power(budget);
        m.se_bits_per_hz = std::log2(T(1) + m.snr_linear);
        m.end_to_end_gain_db = linear_to_db(gain);
        return m;
    }

    // SNR of an optimally configured surface of N elements in the far field of both terminals
    template <typename T>
    T ris_far_field_snr(long long num_elements, T element_area_m2, T d1, T d2, const LinkBudget<T> &budget)
    {
        const T amp = T(num_elements) * budget.element_amplitude *
                      std::sqrt(budget.tx_gain() * budget.rx_gain() * budget.path_penetration()) *
                      element_area_m2 / (T(4) * pi<T> * d1 * d2);
        return budget.tx_power_w * amp * amp / noise_power(budget);
    }

    enum class Technology
    {
        ris,
        df_relay
    };

    template <typename T>
    struct SizingScenario
    {
        T d1 = T(300);
        T d2 = T(10);
        LinkBudget<T> budget;
        CarrierSpec<T> carrier = CarrierSpec<T>::from_wavelength(T(0.1));
        T element_side_fraction = T(0.2);   // RIS elements
        T antenna_spacing_fraction = T(0.5); // Relay antennas
        T max_area_m2 = T(1e4);
    };

    template <typename T>
    struct RequiredArea
    {
        T area_m2 = T(0);
        long long count = 0; // Elements or antennas
        T se_bits_per_hz = T(0);
    };

    template <typename T>
    T unit_area(Technology tech, const SizingScenario<T> &s)
    {
        const T side = (tech == Technology::ris ? s.element_side_fraction : s.antenna_spacing_fraction) *
                       s.carrier.wavelength_m;
        return side * side;
    }

    // Far-field SE of the technology with `count` elements/antennas
    template <typename T>
    T sizing_se(Technology tech, long long count, const SizingScenario<T> &s)
    {
        const T unit = unit_area(tech, s);
        if (tech == Technology::ris)
            return std::log2(T(1) + ris_far_field_snr(count, unit, s.d1, s.d2, s.budget));
        return df_relay_se(T(count) * unit, s.d1, s.d2, s.budget, s.carrier, s.antenna_spacing_fraction)
            .link.se_bits_per_hz;
    }

    // Smallest area (an integer number of elements/antennas) whose SE reaches the target.
    // Bisection over the count; the SE is non-decreasing in it.
    template <typename T>
    RequiredArea<T> required_area(T target_se, Technology tech, const SizingScenario<T> &s)
    {
        if (!(target_se > T(0)))
            throw invalid_input("required_area: target SE must be positive");
        const T unit = unit_area(tech, s);
        long long hi = (long long)std::floor(s.max_area_m2 / unit * (T(1) + T(1e-12)));
        if (hi < 1 || sizing_se(tech, hi, s) < target_se)
            throw numeric_failure("required_area: target SE " + std::to_string(target_se) +
                                  " is unreachable below " + std::to_string(s.max_area_m2) + " m^2");
        long long lo = 1;
        if (sizing_se(tech, lo, s) >= target_se)
            hi = lo;
        // Invariant: se(hi) >= target, se(lo) < target unless lo == hi
        while (hi - lo > 1)
        {
            const long long mid = lo + (hi - lo) / 2;
            if (sizing_se(tech, mid, s) >= target_se)
                hi = mid;
            else
                lo = mid;
        }
        return {T(hi) * unit, hi, sizing_se(tech, hi, s)};
    }

    template <typename T>
    struct SizingCrossover
    {
        T se_bits_per_hz = T(0);
        T area_m2 = T(0);
    };

    // Target SE at which the RIS and relay required areas meet, bisected on the target.
    // The relay must be smaller at se_lo and larger at se_hi.
    template <typename T>
    SizingCrossover<T> required_area_crossover(const SizingScenario<T> &s, T se_lo, T se_hi, int iterations = 60)
    {
        if (!(se_lo > T(0)) || !(se_hi > se_lo))
            throw invalid_input("required_area_crossover: need 0 < se_lo < se_hi");
        const auto gap = [&s](T se)
        {
            return std::log(required_area(se, Technology::ris, s).area_m2) -
                   std::log(required_area(se, Technology::df_relay, s).area_m2);
        };
        if (!(gap(se_lo) > T(0)) || !(gap(se_hi) < T(0)))
            throw numeric_failure("required_area_crossover: no sign change of the area gap in the bracket");
        for (int i = 0; i < iterations; ++i)
        {
            const T mid = T(0.5) * (se_lo + se_hi);
            (gap(mid) > T(0) ? se_lo : se_hi) = mid;
        }
        const T se = T(0.5) * (se_lo + se_hi);
        return {se, required_area(se, Technology::ris, s).area_m2};
    }
}
