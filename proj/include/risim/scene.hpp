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
#include "risim/units.hpp"

#include <cmath>
#include <string>

namespace risim
{
    // Carrier frequency and wavelength, always mutually consistent: wavelength = c / frequency
    template <typename T>
    struct CarrierSpec
    {
        T frequency_hz = T(0);
        T wavelength_m = T(0);

        static CarrierSpec from_frequency(T frequency_hz)
        {
            if (!(frequency_hz > T(0)))
                throw invalid_input("carrier frequency must be positive");
            return {frequency_hz, speed_of_light<T> / frequency_hz};
        }

        // Keeps the wavelength bit-exact, e.g. 0.1 m for the round-number "3 GHz" setups
        static CarrierSpec from_wavelength(T wavelength_m)
        {
            if (!(wavelength_m > T(0)))
                throw invalid_input("wavelength must be positive");
            return {speed_of_light<T> / wavelength_m, wavelength_m};
        }

        T wavenumber() const { return two_pi<T> / wavelength_m; }
    };

    // Transmitter, receiver and the planar surface frame. Both terminals must lie on the
    // illuminated side of the surface.
    template <typename T>
    struct Placement
    {
        Vec3<T> tx_position = Vec3<T>::Zero();
        Vec3<T> rx_position = Vec3<T>::Zero();
        Vec3<T> surface_center = Vec3<T>::Zero();
        Vec3<T> surface_normal = Vec3<T>::UnitZ();
        Vec3<T> surface_x_axis = Vec3<T>::UnitX();

        Vec3<T> surface_y_axis() const { return surface_normal.cross(surface_x_axis); }
        T tx_distance() const { return (tx_position - surface_center).norm(); }
        T rx_distance() const { return (rx_position - surface_center).norm(); }
        Vec3<T> tx_direction() const { return (tx_position - surface_center).normalized(); }
        Vec3<T> rx_direction() const { return (rx_position - surface_center).normalized(); }

        // Same geometry with the roles of transmitter and receiver exchanged
        Placement swapped() const
        {
            Placement p = *this;
            std::swap(p.tx_position, p.rx_position);
            return p;
        }
    };

    template <typename T>
    void validate(const Placement<T> &p)
    {
        constexpr T tol = T(1e-9);
        if (std::abs(p.surface_normal.norm() - T(1)) > tol)
            throw invalid_input("surface_normal must be a unit vector");
        if (std::abs(p.surface_x_axis.norm() - T(1)) > tol)
            throw invalid_input("surface_x_axis must be a unit vector");
        if (std::abs(p.surface_normal.dot(p.surface_x_axis)) > tol)
            throw invalid_input("surface_x_axis must be orthogonal to surface_normal");
        if (!((p.tx_position - p.surface_center).dot(p.surface_normal) > T(0)))
            throw invalid_input("transmitter is not on the illuminated side of the surface");
        if (!((p.rx_position - p.surface_center).dot(p.surface_normal) > T(0)))
            throw invalid_input("receiver is not on the illuminated side of the surface");
    }

    template <typename T>
    Placement<T> make_placement(const Vec3<T> &tx, const Vec3<T> &rx, const Vec3<T> &center,
                                const Vec3<T> &normal, const Vec3<T> &x_axis)
    {
        Placement<T> p{tx, rx, center, normal, x_axis};
        validate(p);
        return p;
    }

    // Planar grid of square, gap-free elements. Element n sits at column n % elements_per_row
    // (along the x-axis) and row n / elements_per_row (along the y-axis).
    template <typename T>
    struct RisArray
    {
        Points3<T> element_centers;      // Size [3, N]
        Points3<T> element_offsets;      // Centers relative to surface_center, Size [3, N]
        T element_area_m2 = T(0);
        T element_side_m = T(0);
        int elements_per_row = 0;        // Count along the x-axis
        int elements_per_col = 0;        // Count along the y-axis
        Vec3<T> surface_center = Vec3<T>::Zero();
        Vec3<T> surface_normal = Vec3<T>::UnitZ();
        Vec3<T> surface_x_axis = Vec3<T>::UnitX();

        Eigen::Index num_elements() const { return element_centers.cols(); }
        T side_x_m() const { return T(elements_per_row) * element_side_m; }
        T side_y_m() const { return T(elements_per_col) * element_side_m; }
        int row_of(Eigen::Index n) const { return int(n / elements_per_row); }
        int col_of(Eigen::Index n) const { return int(n % elements_per_row); }
    };

    template <typename T>
    RisArray<T> build_planar_ris(const Placement<T> &placement, const CarrierSpec<T> &carrier,
                                 T side_x_m, T side_y_m, T element_side_fraction = T(0.2))
    {
        if (!(side_x_m > T(0)) || !(side_y_m > T(0)))
            throw invalid_input("surface side lengths must be positive");
        if (!(element_side_fraction > T(0)) || element_side_fraction > T(1))
            throw invalid_input("element_side_fraction must lie in (0, 1]");

        const T elem = element_side_fraction * carrier.wavelength_m;
        // The relative slack absorbs rounding when a side is an exact multiple of the element
        const auto fit = [elem](T side)
        { return int(std::floor(side / elem * (T(1) + T(1e-12)))); };
        const int nx = fit(side_x_m), ny = fit(side_y_m);
        if (nx < 1 || ny < 1)
            throw invalid_input("surface smaller than one element");

        RisArray<T> a;
        a.element_side_m = elem;
        a.element_area_m2 = elem * elem;
        a.elements_per_row = nx;
        a.elements_per_col = ny;
        a.surface_center = placement.surface_center;
        a.surface_normal = placement.surface_normal;
        a.surface_x_axis = placement.surface_x_axis;

        const Vec3<T> ex = placement.surface_x_axis;
        const Vec3<T> ey = placement.surface_y_axis();
        const Eigen::Index n = Eigen::Index(nx) * Eigen::Index(ny);
        a.element_offsets.resize(3, n);
        for (int iy = 0; iy < ny; ++iy)
        {
            const T y = (T(iy) - T(ny - 1) / T(2)) * elem;
            for (int ix = 0; ix < nx; ++ix)
            {
                const T x = (T(ix) - T(nx - 1) / T(2)) * elem;
                a.element_offsets.col(Eigen::Index(iy) * nx + ix) = x * ex + y * ey;
            }
        }
        a.element_centers = a.element_offsets.colwise() + placement.surface_center;
        return a;
    }

    template <typename T>
    T surface_area(const RisArray<T> &array)
    {
        return T(array.num_elements()) * array.element_area_m2;
    }
}
