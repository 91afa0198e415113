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

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>

namespace risim
{
    template <typename T>
    using Vec3 = Eigen::Matrix<T, 3, 1>;

    template <typename T>
    using VecX = Eigen::Matrix<T, Eigen::Dynamic, 1>;

    template <typename T>
    using CVecX = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, 1>;

    template <typename T>
    using CMatX = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, Eigen::Dynamic>;

    template <typename T>
    using Points3 = Eigen::Matrix<T, 3, Eigen::Dynamic>;

    template <typename T>
    inline constexpr T speed_of_light = T(299792458.0);

    template <typename T>
    inline constexpr T pi = std::numbers::pi_v<T>;

    template <typename T>
    inline constexpr T two_pi = T(2) * std::numbers::pi_v<T>;

    // Thermal noise density at 290 K in dBm/Hz
    template <typename T>
    inline constexpr T thermal_noise_dbm_per_hz = T(-174.0);

    template <typename T>
    inline T db_to_linear(T db) { return std::pow(T(10), db / T(10)); }

    template <typename T>
    inline T linear_to_db(T lin) { return T(10) * std::log10(lin); }

    template <typename T>
    inline T dbm_to_watt(T dbm) { return db_to_linear(dbm) / T(1000); }

    template <typename T>
    inline T watt_to_dbm(T watt) { return linear_to_db(watt * T(1000)); }

    // Maps any angle onto [0, 2*pi)
    template <typename T>
    inline T wrap_phase(T rad)
    {
        T w = std::fmod(rad, two_pi<T>);
        if (w < T(0))
            w += two_pi<T>;
        if (w >= two_pi<T>) // fmod of a tiny negative value can round up to 2*pi
            w = T(0);
        return w;
    }
}
