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
#include "risim/scene.hpp"
#include "risim/units.hpp"

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

namespace risim
{
    // Phase shift applied by each element, in [0, 2*pi)
    template <typename T>
    struct PhaseConfig
    {
        VecX<T> phases_rad;
        std::optional<int> quantization_bits;
        std::optional<int> group_rows;
        std::optional<int> group_cols;

        Eigen::Index size() const { return phases_rad.size(); }
    };

    template <typename T>
    struct LinkMetrics
    {
        T snr_linear = T(0);
        T se_bits_per_hz = T(0);
        T end_to_end_gain_db = T(0);

        T snr_db() const { return linear_to_db(snr_linear); }
    };

    template <typename T>
    PhaseConfig<T> uniform_config(Eigen::Index n, T phase = T(0))
    {
        return {VecX<T>::Constant(n, wrap_phase(phase)), std::nullopt, std::nullopt, std::nullopt};
    }

    // sum_n g_n exp(j phi_n), accumulated in index order
    template <typename T>
    std::complex<T> received_amplitude(const CascadedChannel<T> &channel, const PhaseConfig<T> &config)
    {
        if (channel.size() != config.size())
            throw invalid_input("channel has " + std::to_string(channel.size()) + " elements but configuration has " +
                                std::to_string(config.size()));
        std::complex<T> acc(0);
        for (Eigen::Index n = 0; n < channel.size(); ++n)
            acc += channel.coefficients(n) * std::polar(T(1), config.phases_rad(n));
        return acc;
    }

    template <typename T>
    LinkMetrics<T> evaluate(const CascadedChannel<T> &channel, const PhaseConfig<T> &config, const LinkBudget<T> &budget)
    {
        const T gain = std::norm(received_amplitude(channel, config));
        LinkMetrics<T> m;
        m.snr_linear = budget.tx_power_w * gain / noise_power(budget);
        m.se_bits_per_hz = std::log2(T(1) + m.snr_linear);
        m.end_to_end_gain_db = linear_to_db(gain);
        return m;
    }

    // Co-phases every term so that g_n exp(j phi_n) = |g_n|
    template <typename T>
    PhaseConfig<T> config_optimal(const CascadedChannel<T> &channel)
    {
        PhaseConfig<T> c;
        c.phases_rad.resize(channel.size());
        for (Eigen::Index n = 0; n < channel.size(); ++n)
            c.phases_rad(n) = wrap_phase(-std::arg(channel.coefficients(n)));
        return c;
    }

    // Linear phase gradient of an anomalous mirror cutout: plane wave in from the transmitter
    // direction, plane wave out towards the receiver direction, zero phase at the surface center.
    template <typename T>
    PhaseConfig<T> config_mirror_mimicking(const RisArray<T> &array, const Placement<T> &placement,
                                           const CarrierSpec<T> &carrier)
    {
        const Vec3<T> steer = placement.tx_direction() + placement.rx_direction();
        const T k = carrier.wavenumber();
        PhaseConfig<T> c;
        c.phases_rad.resize(array.num_elements());
        for (Eigen::Index n = 0; n < array.num_elements(); ++n)
            c.phases_rad(n) = wrap_phase(-k * steer.dot(array.element_offsets.col(n)));
        return c;
    }

    // Snaps each phase to the nearest of 2^bits uniform levels, ties towards the lower level
    template <typename T>
    PhaseConfig<T> quantize_config(const PhaseConfig<T> &config, int bits)
    {
        if (bits < 1 || bits > 30)
            throw invalid_input("quantize_config: bits must lie in [1, 30]");
        const long long levels = 1LL << bits;
        const T step = two_pi<T> / T(levels);
        PhaseConfig<T> q = config;
        for (Eigen::Index n = 0; n < q.size(); ++n)
        {
            const long long k = (long long)(std::ceil(config.phases_rad(n) / step - T(0.5)));
            q.phases_rad(n) = T(((k % levels) + levels) % levels) * step;
        }
        q.quantization_bits = bits;
        return q;
    }

    // Partition of the element grid into equally sized rectangular tiles
    struct GroupLayout
    {
        int group_rows = 1;      // Tile height in elements (y)
        int group_cols = 1;      // Tile width in elements (x)
        int groups_per_row = 0;  // Tiles along x
        int groups_per_col = 0;  // Tiles along y
        std::vector<Eigen::Index> group_of; // Tile index of each element

        Eigen::Index num_groups() const { return Eigen::Index(groups_per_row) * groups_per_col; }
        Eigen::Index num_elements() const { return Eigen::Index(group_of.size()); }
    };

    template <typename T>
    GroupLayout make_group_layout(const RisArray<T> &array, int group_rows, int group_cols)
    {
        if (group_rows < 1 || group_cols < 1)
            throw invalid_input("group dimensions must be positive");
        if (array.elements_per_col % group_rows != 0 || array.elements_per_row % group_cols != 0)
            throw invalid_input("group " + std::to_string(group_rows) + "x" + std::to_string(group_cols) +
                                " does not divide the " + std::to_string(array.elements_per_col) + "x" +
                                std::to_string(array.elements_per_row) + " element grid");
        GroupLayout g;
        g.group_rows = group_rows;
        g.group_cols = group_cols;
        g.groups_per_row = array.elements_per_row / group_cols;
        g.groups_per_col = array.elements_per_col / group_rows;
        g.group_of.resize(std::size_t(array.num_elements()));
        for (Eigen::Index n = 0; n < array.num_elements(); ++n)
            g.group_of[std::size_t(n)] = Eigen::Index(array.row_of(n) / group_rows) * g.groups_per_row +
                                         array.col_of(n) / group_cols;
        return g;
    }

    // Sum of the coefficients within each tile, accumulated in element order
    template <typename T>
    CVecX<T> group_sums(const CVecX<T> &coefficients, const GroupLayout &layout)
    {
        if (coefficients.size() != layout.num_elements())
            throw invalid_input("group_sums: coefficient count does not match the layout");
        CVecX<T> s = CVecX<T>::Zero(layout.num_groups());
        for (Eigen::Index n = 0; n < coefficients.size(); ++n)
            s(layout.group_of[std::size_t(n)]) += coefficients(n);
        return s;
    }

    // Per-element configuration from one phase per tile
    template <typename T>
    PhaseConfig<T> expand_group_phases(const VecX<T> &group_phases, const GroupLayout &layout)
    {
        if (group_phases.size() != layout.num_groups())
            throw invalid_input("expand_group_phases: phase count does not match the layout");
        PhaseConfig<T> c;
        c.phases_rad.resize(layout.num_elements());
        for (Eigen::Index n = 0; n < layout.num_elements(); ++n)
            c.phases_rad(n) = group_phases(layout.group_of[std::size_t(n)]);
        c.group_rows = layout.group_rows;
        c.group_cols = layout.group_cols;
        return c;
    }

    // Shared phase per tile that co-phases the tile's summed contribution
    template <typename T>
    PhaseConfig<T> group_config(const CascadedChannel<T> &channel, const RisArray<T> &array, int group_rows, int group_cols)
    {
        const GroupLayout layout = make_group_layout(array, group_rows, group_cols);
        const CVecX<T> sums = group_sums(channel.coefficients, layout);
        VecX<T> phases(sums.size());
        for (Eigen::Index g = 0; g < sums.size(); ++g)
            phases(g) = wrap_phase(-std::arg(sums(g)));
        return expand_group_phases(phases, layout);
    }

    // Observation direction at azimuth theta in the plane spanned by the normal and the x-axis
    template <typename T>
    Vec3<T> azimuth_direction(const RisArray<T> &array, T azimuth_deg)
    {
        const T th = azimuth_deg * pi<T> / T(180);
        return std::cos(th) * array.surface_normal + std::sin(th) * array.surface_x_axis;
    }

    // Far-field array-factor power on the principal azimuth cut, normalized to a peak of 1.
    // incident_direction points from the surface towards the source.
    template <typename T>
    VecX<T> beam_pattern(const RisArray<T> &array, const PhaseConfig<T> &config, const Vec3<T> &incident_direction,
                         const std::vector<T> &observation_azimuths_deg, const CarrierSpec<T> &carrier)
    {
        if (config.size() != array.num_elements())
            throw invalid_input("beam_pattern: configuration size does not match the array");
        const T k = carrier.wavenumber();
        // Incident phase per element does not depend on the observation angle
        VecX<T> base(array.num_elements());
        for (Eigen::Index n = 0; n < array.num_elements(); ++n)
            base(n) = config.phases_rad(n) + k * incident_direction.dot(array.element_offsets.col(n));

        VecX<T> p(Eigen::Index(observation_azimuths_deg.size()));
        for (std::size_t a = 0; a < observation_azimuths_deg.size(); ++a)
        {
            const T az = observation_azimuths_deg[a];
            if (az < T(-90) || az > T(90))
                throw invalid_input("beam_pattern: observation azimuths must lie within +-90 degrees");
            const Vec3<T> u = azimuth_direction(array, az);
            std::complex<T> acc(0);
            for (Eigen::Index n = 0; n < array.num_elements(); ++n)
                acc += std::polar(T(1), base(n) + k * u.dot(array.element_offsets.col(n)));
            p(Eigen::Index(a)) = std::norm(acc);
        }
        const T peak = p.size() > 0 ? p.maxCoeff() : T(0);
        if (peak > T(0))
            p /= peak;
        return p;
    }

    // Width between the -3 dB crossings bracketing the global peak, linear interpolation
    template <typename T>
    T hpbw(const VecX<T> &pattern, const std::vector<T> &angles_deg)
    {
        const Eigen::Index n = pattern.size();
        if (n != Eigen::Index(angles_deg.size()) || n < 3)
            throw invalid_input("hpbw: pattern and angle lists must match and hold at least 3 samples");
        Eigen::Index peak = 0;
        const T max = pattern.maxCoeff(&peak);
        if (peak == 0 || peak == n - 1)
            throw numeric_failure("hpbw: pattern peak lies on the edge of the angle range");
        const T half = max / T(2);
        const auto cross = [&](Eigen::Index above, Eigen::Index below)
        {
            const std::size_t a = std::size_t(above), b = std::size_t(below);
            const T t = (pattern(above) - half) / (pattern(above) - pattern(below));
            return angles_deg[a] + t * (angles_deg[b] - angles_deg[a]);
        };
        Eigen::Index lo = peak;
        while (lo > 0 && pattern(lo - 1) >= half)
            --lo;
        Eigen::Index hi = peak;
        while (hi < n - 1 && pattern(hi + 1) >= half)
            ++hi;
        if (lo == 0 || hi == n - 1)
            throw numeric_failure("hpbw: no -3 dB crossing within the angle range");
        return cross(hi, hi + 1) - cross(lo, lo - 1);
    }
}
