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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "risim/surface.hpp"

#include <algorithm>
#include <numeric>
#include <random>

using namespace risim;
using V = Vec3<double>;

namespace
{
    const CarrierSpec<double> lambda01 = CarrierSpec<double>::from_wavelength(0.1);
    const V tx_fig(0, 150, 259.8076211353316); // 300 m, 30 degrees off the normal

    CascadedChannel<double> random_channel(std::mt19937_64 &rng, Eigen::Index n, double scale = 1e-9)
    {
        std::normal_distribution<double> g(0, scale);
        CascadedChannel<double> ch;
        ch.coefficients.resize(n);
        ch.d1_m = VecX<double>::Constant(n, 300);
        ch.d2_m = VecX<double>::Constant(n, 10);
        for (Eigen::Index i = 0; i < n; ++i)
            ch.coefficients(i) = {g(rng), g(rng)};
        return ch;
    }

    PhaseConfig<double> random_config(std::mt19937_64 &rng, Eigen::Index n)
    {
        std::uniform_real_distribution<double> u(0, two_pi<double>);
        PhaseConfig<double> c;
        c.phases_rad.resize(n);
        for (Eigen::Index i = 0; i < n; ++i)
            c.phases_rad(i) = u(rng);
        return c;
    }

    std::vector<oracle::cd> to_std(const CVecX<double> &v) { return {v.data(), v.data() + v.size()}; }

    double snr_db(const CascadedChannel<double> &ch, const PhaseConfig<double> &c)
    {
        return evaluate(ch, c, LinkBudget<double>{}).snr_db();
    }

    double circular_distance(double a, double b) { return std::abs(std::remainder(a - b, two_pi<double>)); }
}

TEST_CASE("config_optimal co-phases every term")
{
    std::mt19937_64 rng(1);
    const auto one = random_channel(rng, 1);
    const auto c1 = config_optimal(one);
    const auto term = one.coefficients(0) * std::polar(1.0, c1.phases_rad(0));
    CHECK(std::abs(term.imag()) < 1e-24);
    CHECK(term.real() == doctest::Approx(std::abs(one.coefficients(0))).epsilon(1e-14));

    CascadedChannel<double> real_pos = random_channel(rng, 8);
    real_pos.coefficients = real_pos.coefficients.cwiseAbs().cast<std::complex<double>>();
    const auto c0 = config_optimal(real_pos);
    CHECK(c0.phases_rad.isZero());

    const auto ch = random_channel(rng, 16);
    const auto opt = config_optimal(ch);
    for (Eigen::Index n = 0; n < opt.size(); ++n)
        CHECK((opt.phases_rad(n) >= 0 && opt.phases_rad(n) < two_pi<double>));
    const double best = oracle::random_search_amplitude(to_std(ch.coefficients), 10000, rng);
    CHECK(std::abs(received_amplitude(ch, opt)) >= best);
    CHECK(std::abs(received_amplitude(ch, opt)) == doctest::Approx(oracle::aligned_amplitude(to_std(ch.coefficients))).epsilon(1e-13));
}

TEST_CASE("conjugate optimality, global phase invariance, monotonicity in N")
{
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> size(1, 64);
    for (int trial = 0; trial < 100; ++trial)
    {
        const auto ch = random_channel(rng, size(rng));
        const double opt = evaluate(ch, config_optimal(ch), LinkBudget<double>{}).snr_linear;
        for (int d = 0; d < 200; ++d)
            CHECK(evaluate(ch, random_config(rng, ch.size()), LinkBudget<double>{}).snr_linear <= opt * (1 + 1e-12));

        auto c = random_config(rng, ch.size());
        const double before = evaluate(ch, c, LinkBudget<double>{}).snr_linear;
        for (Eigen::Index n = 0; n < c.size(); ++n)
            c.phases_rad(n) = wrap_phase(c.phases_rad(n) + 1.234);
        CHECK(std::abs(evaluate(ch, c, LinkBudget<double>{}).snr_linear / before - 1) < 1e-12);

        CascadedChannel<double> grown = ch;
        const auto extra = random_channel(rng, 1);
        grown.coefficients.conservativeResize(ch.size() + 1);
        grown.coefficients(ch.size()) = extra.coefficients(0);
        CHECK(evaluate(grown, config_optimal(grown), LinkBudget<double>{}).snr_linear > opt);
    }
}

TEST_CASE("evaluate")
{
    CascadedChannel<double> empty;
    const auto m0 = evaluate(empty, PhaseConfig<double>{}, LinkBudget<double>{});
    CHECK(m0.snr_linear == 0.0);
    CHECK(m0.se_bits_per_hz == 0.0);

    std::mt19937_64 rng(4);
    const auto ch = random_channel(rng, 5);
    CHECK_THROWS_AS(evaluate(ch, uniform_config<double>(4), LinkBudget<double>{}), invalid_input);

    // 2 x 2 m surface, d1 = 300 m, d2 = 10 m on the normal
    const auto p = make_placement<double>(tx_fig, V(0, 0, 10), V::Zero(), V::UnitZ(), V::UnitX());
    const auto a = build_planar_ris(p, lambda01, 2.0, 2.0, 0.2);
    const auto g = cascaded_channel(a, p, LinkBudget<double>{}, lambda01);
    const auto m = evaluate(g, config_optimal(g), LinkBudget<double>{});
    const double closed = 10 * std::log10(10.0 * std::pow(far_field_amplitude_sum(a, p, LinkBudget<double>{}), 2) / noise_power(LinkBudget<double>{}));
    CHECK(closed == doctest::Approx(41.50).epsilon(1e-3));
    // Exact element sum equals the brute-force aligned sum
    const auto centers = oracle::grid_xy(100, 100, 0.02);
    double amp = 0;
    for (const auto &c : centers)
        amp += std::abs(oracle::element_coefficient(c, {tx_fig.x(), tx_fig.y(), tx_fig.z()}, {0, 0, 10}, 4e-4, 10, 1, 0.01, 0.1));
    CHECK(m.snr_linear == doctest::Approx(10.0 * amp * amp / noise_power(LinkBudget<double>{})).epsilon(1e-12));
    CHECK(m.se_bits_per_hz == doctest::Approx(std::log2(1 + m.snr_linear)).epsilon(1e-15));
    CHECK(std::abs(m.snr_db() - closed) < 0.5);
    CHECK(evaluate(g, uniform_config<double>(g.size()), LinkBudget<double>{}).snr_linear <= m.snr_linear);
}

TEST_CASE("config_mirror_mimicking")
{
    // Specular geometry: rx at the mirror direction of tx
    const V tx(60, 0, 200), rx(-6, 0, 20);
    const auto ps = make_placement<double>(tx, rx, V::Zero(), V::UnitZ(), V::UnitX());
    const auto as = build_planar_ris(ps, lambda01, 0.5, 0.5, 0.2);
    const auto specular = config_mirror_mimicking(as, ps, lambda01);
    for (Eigen::Index n = 0; n < specular.size(); ++n)
        CHECK(circular_distance(specular.phases_rad(n), specular.phases_rad(0)) < 1e-9);

    // Far field: anomalous reflection towards an arbitrary direction
    const auto pf = make_placement<double>(V(1e4, 2e4, 2.5e4), V(-3e4, 1e4, 2e4), V::Zero(), V::UnitZ(), V::UnitX());
    const auto af = build_planar_ris(pf, lambda01, 0.5, 0.5, 0.2);
    REQUIRE(pf.tx_distance() >= 1e4 * std::hypot(0.5, 0.5));
    const auto gf = cascaded_channel(af, pf, LinkBudget<double>{}, lambda01);
    CHECK(snr_db(gf, config_optimal(gf)) - snr_db(gf, config_mirror_mimicking(af, pf, lambda01)) < 0.5);

    // Near field: receiver 2 m in front of a 2 x 2 m surface
    const auto pn = make_placement<double>(tx_fig, V(0, 0, 2), V::Zero(), V::UnitZ(), V::UnitX());
    const auto an = build_planar_ris(pn, lambda01, 2.0, 2.0, 0.2);
    const auto gn = cascaded_channel(an, pn, LinkBudget<double>{}, lambda01);
    CHECK(snr_db(gn, config_optimal(gn)) - snr_db(gn, config_mirror_mimicking(an, pn, lambda01)) > 3.0);

    // Zero phase at the center element
    const auto pc = make_placement<double>(tx_fig, V(3, 1, 40), V::Zero(), V::UnitZ(), V::UnitX());
    const auto ac = build_planar_ris(pc, lambda01, 0.1, 0.1, 0.2);
    CHECK(config_mirror_mimicking(ac, pc, lambda01).phases_rad(12) == 0.0);
}

TEST_CASE("quantize_config")
{
    PhaseConfig<double> grid;
    grid.phases_rad = VecX<double>::LinSpaced(4, 0, 1.5 * pi<double>);
    const auto q = quantize_config(grid, 2);
    CHECK((q.phases_rad - grid.phases_rad).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(q.quantization_bits == 2);

    // Ties go down, values near 2 pi wrap to level 0
    PhaseConfig<double> ties;
    ties.phases_rad.resize(3);
    ties.phases_rad << 0.25 * pi<double>, 0.75 * pi<double>, 1.99 * pi<double>;
    const auto qt = quantize_config(ties, 2);
    CHECK(qt.phases_rad(0) == 0.0);
    CHECK(qt.phases_rad(1) == doctest::Approx(0.5 * pi<double>));
    CHECK(qt.phases_rad(2) == 0.0);

    // Every phase lands on a level
    std::mt19937_64 rng(5);
    const auto rc = random_config(rng, 200);
    for (int bits : {1, 3, 5})
    {
        const auto qb = quantize_config(rc, bits);
        const double step = two_pi<double> / double(1 << bits);
        for (Eigen::Index n = 0; n < qb.size(); ++n)
        {
            const double k = qb.phases_rad(n) / step;
            CHECK(std::abs(k - std::round(k)) < 1e-12);
            CHECK(circular_distance(qb.phases_rad(n), rc.phases_rad(n)) <= step / 2 + 1e-12);
        }
    }

    // Far-field boresight channel: 1-bit loss bounded by 3.92 dB, 20 bits indistinguishable
    const auto p = make_placement<double>(V(0, 0, 3000), V(0, 0, 2000), V::Zero(), V::UnitZ(), V::UnitX());
    const auto a = build_planar_ris(p, lambda01, 0.5, 0.5, 0.2);
    const auto g = cascaded_channel(a, p, LinkBudget<double>{}, lambda01);
    const auto opt = config_optimal(g);
    CHECK(snr_db(g, opt) - snr_db(g, quantize_config(opt, 1)) <= 3.92);
    CHECK(std::abs(snr_db(g, opt) - snr_db(g, quantize_config(opt, 20))) < 1e-6);
    CHECK_THROWS_AS(quantize_config(opt, 0), invalid_input);
}

TEST_CASE("group_config")
{
    const auto p = make_placement<double>(tx_fig, V(0, 0, 10), V::Zero(), V::UnitZ(), V::UnitX());
    const auto a = build_planar_ris(p, lambda01, 2.0, 2.0, 0.2);
    const auto g = cascaded_channel(a, p, LinkBudget<double>{}, lambda01);

    const auto g11 = group_config(g, a, 1, 1);
    CHECK((g11.phases_rad - config_optimal(g).phases_rad).cwiseAbs().maxCoeff() < 1e-15);

    const auto whole = group_config(g, a, 100, 100);
    CHECK((whole.phases_rad.array() == whole.phases_rad(0)).all());
    const double p_sum = 10.0 * std::norm(g.coefficients.sum()) / noise_power(LinkBudget<double>{});
    CHECK(evaluate(g, whole, LinkBudget<double>{}).snr_linear == doctest::Approx(p_sum).epsilon(1e-10));

    const auto g22 = group_config(g, a, 2, 2);
    CHECK(g22.group_rows == 2);
    const double s22 = snr_db(g, g22);
    CHECK(s22 > snr_db(g, whole));
    CHECK(s22 < snr_db(g, config_optimal(g)));
    // Constant within each tile
    const auto layout = make_group_layout(a, 2, 2);
    for (Eigen::Index n = 0; n < a.num_elements(); ++n)
        CHECK(g22.phases_rad(n) == g22.phases_rad(std::find(layout.group_of.begin(), layout.group_of.end(), layout.group_of[std::size_t(n)]) - layout.group_of.begin()));

    CHECK_THROWS_AS(group_config(g, a, 3, 3), invalid_input);
}

TEST_CASE("beam_pattern and hpbw")
{
    // 10 lambda x 10 lambda boresight beam
    const auto p = make_placement<double>(V(0, 0, 1e4), V(0, 0, 1e4), V::Zero(), V::UnitZ(), V::UnitX());
    std::vector<double> az;
    for (int i = -1800; i <= 1800; ++i)
        az.push_back(i * 0.05);
    const auto a10 = build_planar_ris(p, lambda01, 1.0, 1.0, 0.2);
    const auto pat10 = beam_pattern(a10, uniform_config<double>(a10.num_elements()), V(V::UnitZ()), az, lambda01);
    Eigen::Index peak = 0;
    pat10.maxCoeff(&peak);
    CHECK(az[std::size_t(peak)] == 0.0);
    // Principal cut reduces to a 50-element ULA at 0.2 lambda spacing
    for (std::size_t i = 0; i < az.size(); i += 97)
        CHECK(pat10(Eigen::Index(i)) == doctest::Approx(oracle::ula_power(50, 0.2, az[i] * pi<double> / 180)).epsilon(1e-8));
    const double h10 = hpbw(pat10, az);
    CHECK(std::abs(h10 - oracle::ula_hpbw_deg(50, 0.2)) <= 0.05);
    CHECK((h10 >= 4.5 && h10 <= 6.5));

    const auto a20 = build_planar_ris(p, lambda01, 2.0, 2.0, 0.2);
    const double h20 = hpbw(beam_pattern(a20, uniform_config<double>(a20.num_elements()), V(V::UnitZ()), az, lambda01), az);
    CHECK(std::abs(h20 / h10 - 0.5) <= 0.025);

    // Steered beam from a mirror-mimicking configuration peaks at the receiver direction
    const double th = 25 * pi<double> / 180;
    const auto ps = make_placement<double>(V(0, 0, 1e4), V(1e4 * std::sin(th), 0, 1e4 * std::cos(th)), V::Zero(), V::UnitZ(), V::UnitX());
    const auto pat = beam_pattern(a10, config_mirror_mimicking(a10, ps, lambda01), ps.tx_direction(), az, lambda01);
    pat.maxCoeff(&peak);
    CHECK(az[std::size_t(peak)] == doctest::Approx(25.0).epsilon(1e-3));

    CHECK_THROWS_AS(beam_pattern(a10, uniform_config<double>(a10.num_elements()), V(V::UnitZ()), std::vector<double>{95.0}, lambda01), invalid_input);
}

TEST_CASE("hpbw on a synthetic cos^2 pattern")
{
    // cos^2(theta / theta0) crosses 1/2 at theta0 * pi / 4
    const double theta0 = 20.0, step = 0.1;
    std::vector<double> ang;
    VecX<double> pat(601);
    for (int i = 0; i < 601; ++i)
    {
        ang.push_back(-30.0 + i * step);
        pat(i) = std::pow(std::cos(ang.back() * pi<double> / 180 / (theta0 * pi<double> / 180)), 2);
    }
    CHECK(std::abs(hpbw(pat, ang) - 2 * theta0 * pi<double> / 4) < step);

    VecX<double> edge = VecX<double>::LinSpaced(10, 1.0, 0.1);
    std::vector<double> a10(10);
    std::iota(a10.begin(), a10.end(), 0.0);
    CHECK_THROWS_AS(hpbw(edge, a10), numeric_failure);
    VecX<double> flat = VecX<double>::Constant(10, 0.9);
    flat(5) = 1.0;
    CHECK_THROWS_AS(hpbw(flat, a10), numeric_failure);
}

TEST_CASE("square law and saturation")
{
    const auto p = make_placement<double>(tx_fig, V(0, 0, 10), V::Zero(), V::UnitZ(), V::UnitX());
    // Doubling N quadruples the SNR; a 2 x 2 tiling (4N) gives 16x
    for (double side : {0.1, 0.2, 0.24})
    {
        const auto a1 = build_planar_ris(p, lambda01, side, side, 0.2);
        const auto a2 = build_planar_ris(p, lambda01, 2 * side, side, 0.2);
        const auto a4 = build_planar_ris(p, lambda01, 2 * side, 2 * side, 0.2);
        REQUIRE(a2.num_elements() == 2 * a1.num_elements());
        REQUIRE(a4.num_elements() == 4 * a1.num_elements());
        const auto snr = [&](const RisArray<double> &a)
        {
            const auto g = cascaded_channel(a, p, LinkBudget<double>{}, lambda01);
            return evaluate(g, config_optimal(g), LinkBudget<double>{}).snr_linear;
        };
        const double s1 = snr(a1);
        INFO("side " << side);
        CHECK((snr(a2) / s1 >= 3.9 && snr(a2) / s1 <= 4.1));
        CHECK(snr(a4) / s1 == doctest::Approx(16.0).epsilon(0.025));
    }

    // Fixed 200 x 200 quadrature grid, area doubling per step up to 20 x 20 m
    double prev_snr = 0, prev_ratio = 1e9;
    for (int k = 0; k <= 10; ++k)
    {
        const double side = 20.0 / std::pow(std::sqrt(2.0), 10 - k);
        const auto a = build_planar_ris(p, lambda01, side, side, side / 200 / 0.1);
        REQUIRE(a.num_elements() == 40000);
        const auto g = cascaded_channel(a, p, LinkBudget<double>{}, lambda01, true);
        const double snr = evaluate(g, config_optimal(g), LinkBudget<double>{}).snr_linear;
        CHECK(snr >= prev_snr);
        if (k > 0)
        {
            const double ratio = snr / prev_snr;
            CHECK(ratio < prev_ratio);
            prev_ratio = ratio;
        }
        prev_snr = snr;
    }
}
