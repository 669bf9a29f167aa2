// SPDX-License-Identifier: Apache-2.0
//
// nrgeo — drop-based system-level simulator for NR outdoor calibration KPIs
// Copyright (C) 2026 The nrgeo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include <nrgeo/antenna.hpp>
#include <nrgeo/rng.hpp>

#include "testutil.hpp"

using namespace nrgeo;

TEST_CASE("directional element pattern") {
    REQUIRE(element_gain_db(ElementPattern::threegpp, 8.0, 90.0, 0.0) == 8.0);
    REQUIRE(element_gain_db(ElementPattern::isotropic, 0.0, 17.0, -120.0) == 0.0);
    REQUIRE(element_gain_db(ElementPattern::threegpp, 8.0, 90.0, 65.0) == -4.0);

    // Bounded, peaked exactly at boresight, even in both cuts.
    for (double zen = 0.0; zen <= 180.0; zen += 7.5) {
        for (double az = -180.0; az <= 180.0; az += 7.5) {
            const double g = element_gain_db(ElementPattern::threegpp, 8.0, zen, az);
            REQUIRE(g >= -22.0);
            REQUIRE(g <= 8.0);
            if (zen != 90.0 || az != 0.0)
                REQUIRE(g < 8.0);
            REQUIRE(g == element_gain_db(ElementPattern::threegpp, 8.0, zen, -az));
            REQUIRE(g == element_gain_db(ElementPattern::threegpp, 8.0, 180.0 - zen, az));
        }
    }
}

TEST_CASE("steering weights are unit-norm and phase-only") {
    const ArrayDescriptor single = ue_isotropic_array();
    const auto w1 = steering_weights(single, 0.0, 90.0);
    REQUIRE(w1.size() == 1);
    REQUIRE(std::abs(std::abs(w1[0]) - 1.0) < 1e-12);

    const ArrayDescriptor rural = rural_bs_array();
    const auto w8 = steering_weights(rural, 10.0, 100.0);
    REQUIRE(w8.size() == 8);
    for (const auto& w : w8)
        REQUIRE(std::abs(std::abs(w) - 1.0 / std::sqrt(8.0)) < 1e-12);
}

TEST_CASE("coherent array-factor gain equals 10 log10(N)") {
    RandomStream rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        ArrayDescriptor arr;
        arr.rows = rng.uniform_int(1, 8);
        arr.cols = rng.uniform_int(1, 8);
        arr.dh_lambda = 0.5;
        arr.dv_lambda = 0.5;
        const double az = rng.uniform(-90.0, 90.0);
        const double zen = rng.uniform(10.0, 170.0);
        const double g = array_factor_db(arr, {az, zen}, zen, az);
        REQUIRE(std::abs(g - 10.0 * std::log10(arr.size())) < 1e-9);
    }
    // The rural panel steered to the horizon sees its full coherent gain there.
    const double g = array_factor_db(rural_bs_array(), {0.0, 90.0}, 90.0, 0.0);
    REQUIRE(std::abs(g - 10.0 * std::log10(8.0)) < 1e-9);
}

TEST_CASE("TXRU gain composition") {
    const ArrayDescriptor tx = rural_bs_array();
    const Vec3 bs{0.0, 0.0, 35.0};

    SECTION("the isotropic terminal contributes nothing") {
        const Vec3 ue{500.0, 0.0, 35.0}; // on the horizon, on boresight
        const double g = txru_gain_db(tx, 0.0, Beam{0.0, 90.0}, bs, ue);
        REQUIRE(std::abs(g - (8.0 + 10.0 * std::log10(8.0))) < 1e-9);
    }

    SECTION("back lobe stays under the pattern floor plus array bound") {
        const Vec3 behind{-500.0, 0.0, 35.0};
        const double g = txru_gain_db(tx, 0.0, Beam{0.0, 90.0}, bs, behind);
        REQUIRE(g <= 8.0 - 30.0 + 10.0 * std::log10(8.0) + 1e-9);
    }

    SECTION("no beam means element gains only") {
        const Vec3 ue{500.0, 0.0, 35.0};
        const double g = txru_gain_db(tx, 0.0, std::nullopt, bs, ue);
        REQUIRE(g == 8.0);
    }
}

TEST_CASE("dual-polarized ports reduce to single-pol for co-polar ends") {
    ArrayDescriptor tx = rural_bs_array();
    ArrayDescriptor rx = ue_isotropic_array();
    const Vec3 a{0.0, 0.0, 35.0};
    const Vec3 b{500.0, 0.0, 35.0};
    const double single = txru_gain_db(tx, 0.0, Beam{0.0, 90.0}, a, b, rx);

    tx.polarization = Polarization::dual_model2;
    tx.slant_deg = 0.0;
    rx.polarization = Polarization::dual_model2;
    rx.slant_deg = 0.0;
    const double copolar = txru_gain_db(tx, 0.0, Beam{0.0, 90.0}, a, b, rx);
    REQUIRE(copolar == single);

    rx.slant_deg = 90.0;
    const double cross = txru_gain_db(tx, 0.0, Beam{0.0, 90.0}, a, b, rx);
    REQUIRE(cross == -std::numeric_limits<double>::infinity());
}

TEST_CASE("beam search picks the brute-force argmax") {
    const ArrayDescriptor arr = dense_urban_bs_array();
    const auto beams = default_beam_search_set();
    REQUIRE(beams.size() == 8);

    SECTION("a beam matching the geometric direction wins") {
        const LocalDirection dir{90.0, 15.0};
        const BeamChoice best = beam_search(arr, beams, dir);
        REQUIRE(best.beam.azimuth_deg == 15.0);
        REQUIRE(best.beam.zenith_deg == 90.0);
    }

    SECTION("singleton set always wins") {
        const std::vector<Beam> one{{33.0, 95.0}};
        const BeamChoice best = beam_search(arr, one, {120.0, -60.0});
        REQUIRE(best.index == 0);
    }

    SECTION("ties break toward the lowest index") {
        const std::vector<Beam> pair{{10.0, 90.0}, {10.0, 90.0}}; // identical gains
        const BeamChoice best = beam_search(arr, pair, {90.0, 37.0});
        REQUIRE(best.index == 0);
    }

    SECTION("matches an exhaustive scan on random geometries") {
        RandomStream rng(31);
        for (int trial = 0; trial < 1000; ++trial) {
            const LocalDirection dir{rng.uniform(30.0, 150.0), rng.uniform(-180.0, 180.0)};
            const BeamChoice got = beam_search(arr, beams, dir);
            int best_idx = -1;
            double best_gain = -1e300;
            for (std::size_t b = 0; b < beams.size(); ++b) {
                const double g =
                    element_gain_db(arr, dir.zenith_deg, dir.azimuth_deg) +
                    array_factor_db(arr, beams[b], dir.zenith_deg, dir.azimuth_deg);
                if (g > best_gain) {
                    best_gain = g;
                    best_idx = static_cast<int>(b);
                }
            }
            REQUIRE(got.index == best_idx);
            REQUIRE(std::abs(got.gain_db - best_gain) < 1e-12);
        }
    }

    SECTION("argmax is invariant under a uniform gain offset") {
        RandomStream rng(37);
        for (int trial = 0; trial < 100; ++trial) {
            const LocalDirection dir{rng.uniform(40.0, 140.0), rng.uniform(-120.0, 120.0)};
            std::vector<double> gains;
            for (const Beam& b : beams)
                gains.push_back(array_factor_db(arr, b, dir.zenith_deg, dir.azimuth_deg));
            const auto argmax = [](const std::vector<double>& v) {
                std::size_t k = 0;
                for (std::size_t i = 1; i < v.size(); ++i)
                    if (v[i] > v[k])
                        k = i;
                return k;
            };
            std::vector<double> shifted = gains;
            for (double& g : shifted)
                g += 13.7;
            REQUIRE(argmax(gains) == argmax(shifted));
        }
    }

    SECTION("empty set is rejected") {
        REQUIRE_THROWS_AS(beam_search(arr, std::vector<Beam>{}, {90.0, 0.0}), invalid_input);
    }
}

TEST_CASE("beam-set files") {
    testutil::TempDir tmp("beams");
    const auto good = tmp.path() / "beams.txt";
    {
        std::ofstream out(good);
        out << "# azimuth_deg,zenith_deg\n";
        out << "-30, 90\n";
        out << "30, 100\n";
    }
    const auto beams = load_beam_set(good.string());
    REQUIRE(beams.size() == 2);
    REQUIRE(beams[0].azimuth_deg == -30.0);
    REQUIRE(beams[1].zenith_deg == 100.0);

    const auto bad = tmp.path() / "bad.txt";
    {
        std::ofstream out(bad);
        out << "0, 90\n";
        out << "not a beam\n";
    }
    REQUIRE_THROWS_WITH(load_beam_set(bad.string()),
                        Catch::Matchers::ContainsSubstring("line 2"));

    const auto dup = tmp.path() / "dup.txt";
    {
        std::ofstream out(dup);
        out << "0, 90\n0, 90\n";
    }
    REQUIRE_THROWS_AS(load_beam_set(dup.string()), invalid_input);

    const auto empty = tmp.path() / "empty.txt";
    { std::ofstream out(empty); }
    REQUIRE_THROWS_AS(load_beam_set(empty.string()), invalid_input);
}

TEST_CASE("local directions") {
    const Vec3 bs{0.0, 0.0, 35.0};
    const LocalDirection below = local_direction(bs, 30.0, {100.0, 0.0, 1.5});
    REQUIRE(below.zenith_deg > 90.0); // terminal below the array
    REQUIRE(std::abs(below.azimuth_deg - (-30.0)) < 1e-12);

    const LocalDirection level = local_direction(bs, 0.0, {100.0, 0.0, 35.0});
    REQUIRE(std::abs(level.zenith_deg - 90.0) < 1e-12);
    REQUIRE(std::abs(level.azimuth_deg) < 1e-12);
}
