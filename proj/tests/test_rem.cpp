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

#include <nrgeo/rem.hpp>
#include <nrgeo/scenario.hpp>

#include "testutil.hpp"

using namespace nrgeo;

namespace {

ScenarioConfig deterministic_rural(int rings) {
    return resolve(Preset::ruralA, {{"num_rings", std::to_string(rings)},
                                    {"per_sector_ues", "2"},
                                    {"shadowing", "off"},
                                    {"o2i", "off"},
                                    {"indoor_fraction", "0"},
                                    {"los_mode", "always_los"},
                                    {"num_drops", "1"}});
}

} // namespace

TEST_CASE("default grid covers the measured sites") {
    const SitePlan plan = build_hex_layout(1732.0, 5);
    const RemGrid grid = default_rem_grid(plan);
    REQUIRE(grid.resolution_m == 1732.0 / 200.0);
    REQUIRE(grid.z_m == 1.5);
    // ring 0-1 bounding box padded by half an ISD
    REQUIRE(grid.x_min == -1732.0 - 866.0);
    REQUIRE(grid.x_max == 1732.0 + 866.0);
    REQUIRE(grid.y_max - grid.y_min > 2.0 * 1500.0);
    for (const Site& s : plan.sites) {
        if (s.ring_index > 1)
            continue;
        REQUIRE(s.position.x >= grid.x_min);
        REQUIRE(s.position.x <= grid.x_max);
        REQUIRE(s.position.y >= grid.y_min);
        REQUIRE(s.position.y <= grid.y_max);
    }
    REQUIRE_THROWS_AS(validate(RemGrid{0, 0, 0, 1, 1.0, 1.5}), invalid_input);
    REQUIRE_THROWS_AS(validate(RemGrid{0, 1, 0, 1, 0.0, 1.5}), invalid_input);
}

TEST_CASE("single-transmitter map: SINR equals SNR everywhere") {
    const ScenarioConfig config = deterministic_rural(0);
    SitePlan plan = build_plan(config);
    // Silence two of the three co-sited sectors to isolate one transmitter.
    plan.sites[0].cells[1].tx_power_dbm = -1e9;
    plan.sites[0].cells[2].tx_power_dbm = -1e9;
    const DropParams params = to_drop_params(config);
    const RemOptions opt{config.seed, false, LosMode::always_los};
    const double noise = noise_power_dbm(params.bandwidth_hz, params.noise_figure_ue_db);

    RandomStream rng(3);
    for (int i = 0; i < 25; ++i) {
        const Vec2 p{rng.uniform(-800.0, 800.0), rng.uniform(-800.0, 800.0)};
        const RemPointEval eval = evaluate_rem_point(plan, params, opt, p, 1.5);
        REQUIRE(eval.best_index == 0);
        const double snr = eval.p_rx_dbm[0] - noise;
        REQUIRE(std::abs(eval.sinr_db - snr) < 1e-12);
    }
}

TEST_CASE("REM point at a dropped terminal reproduces its end-to-end SINR") {
    const ScenarioConfig config = deterministic_rural(1);
    const SitePlan plan = build_plan(config);
    const DropParams params = to_drop_params(config);
    const DropResult drop = evaluate_drop(plan, params, config.seed, 0);
    const RemOptions opt{config.seed, false, LosMode::always_los};

    for (std::size_t u = 0; u < drop.ues.size(); u += 7) {
        const UserTerminal& ue = drop.ues[u];
        const RemPointEval eval =
            evaluate_rem_point(plan, params, opt, ue.position, ue.height_m);
        REQUIRE(std::abs(eval.sinr_db - drop.sinr_db[u]) < 1e-9);
        REQUIRE(plan.cells()[static_cast<std::size_t>(eval.best_index)]->cell_id ==
                ue.serving_cell);
    }
}

TEST_CASE("map of a lone site is invariant under 120-degree rotation") {
    const ScenarioConfig config = deterministic_rural(0);
    const SitePlan plan = build_plan(config);
    const DropParams params = to_drop_params(config);
    const RemOptions opt{config.seed, false, LosMode::always_los};

    const double c = std::cos(deg2rad(120.0));
    const double s = std::sin(deg2rad(120.0));
    RandomStream rng(13);
    for (int i = 0; i < 40; ++i) {
        const Vec2 p{rng.uniform(-900.0, 900.0), rng.uniform(-900.0, 900.0)};
        const Vec2 q{c * p.x - s * p.y, s * p.x + c * p.y};
        const RemPointEval a = evaluate_rem_point(plan, params, opt, p, 1.5);
        const RemPointEval b = evaluate_rem_point(plan, params, opt, q, 1.5);
        REQUIRE(std::abs(a.sinr_db - b.sinr_db) < 1e-6);
    }
}

TEST_CASE("best-server certificate holds at every evaluated point") {
    const ScenarioConfig config = resolve(Preset::ruralA, {{"num_rings", "1"}});
    const SitePlan plan = build_plan(config);
    const DropParams params = to_drop_params(config);
    const RemOptions opt{config.seed, true, LosMode::random};
    RandomStream rng(29);
    for (int i = 0; i < 30; ++i) {
        const Vec2 p{rng.uniform(-2000.0, 2000.0), rng.uniform(-2000.0, 2000.0)};
        const RemPointEval eval = evaluate_rem_point(plan, params, opt, p, 1.5,
                                                     static_cast<std::uint64_t>(i), 0);
        for (double dbm : eval.p_rx_dbm)
            REQUIRE(eval.p_rx_dbm[static_cast<std::size_t>(eval.best_index)] >= dbm);
    }
}

TEST_CASE("map generation is deterministic and worker-count independent") {
    const ScenarioConfig config = resolve(Preset::ruralA, {{"num_rings", "0"}});
    const SitePlan plan = build_plan(config);
    const DropParams params = to_drop_params(config);
    const RemOptions opt{config.seed, true, LosMode::random};
    RemGrid grid{-500.0, 500.0, -500.0, 500.0, 100.0, 1.5};

    const auto a = generate_rem(grid, plan, params, opt, 1);
    const auto b = generate_rem(grid, plan, params, opt, 4);
    REQUIRE(a.size() == b.size());
    REQUIRE(a.size() == static_cast<std::size_t>(grid.nx()) * grid.ny());
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].sinr_db == b[i].sinr_db);
        REQUIRE(a[i].best_cell_id == b[i].best_cell_id);
        REQUIRE(a[i].p_rx_best_dbm == b[i].p_rx_best_dbm);
    }
}

TEST_CASE("map CDF") {
    std::vector<RemPoint> pts(2);
    pts[0].sinr_db = 0.0;
    pts[1].sinr_db = 10.0;
    const Cdf cdf = rem_cdf(pts);
    REQUIRE(cdf.values == std::vector<double>{0.0, 10.0});
    REQUIRE(cdf.probs == std::vector<double>{0.5, 1.0});

    std::vector<RemPoint> flat(5);
    for (auto& p : flat)
        p.sinr_db = 4.25;
    const Cdf degenerate = rem_cdf(flat);
    REQUIRE(percentile(degenerate, 0.01) == 4.25);
    REQUIRE(percentile(degenerate, 0.99) == 4.25);

    REQUIRE_THROWS_AS(rem_cdf({}), invalid_input);
}

TEST_CASE("map files") {
    testutil::TempDir tmp("rem");
    RemGrid grid{0.0, 10.0, 0.0, 10.0, 5.0, 1.5};
    std::vector<RemPoint> pts(static_cast<std::size_t>(grid.nx()) * grid.ny());
    for (int iy = 0; iy < grid.ny(); ++iy)
        for (int ix = 0; ix < grid.nx(); ++ix) {
            RemPoint& p = pts[static_cast<std::size_t>(iy) * grid.nx() + ix];
            p.position = {grid.x(ix), grid.y(iy)};
            p.best_cell_id = ix;
            p.sinr_db = 5.0 * ix - 10.0 * iy;
        }

    write_rem_csv(tmp.path() / "rem.csv", pts);
    const auto lines = read_lines(tmp.path() / "rem.csv");
    REQUIRE(lines[0] == "x_m,y_m,best_cell,sinr_db");
    REQUIRE(lines.size() == 1 + pts.size());

    write_rem_pgm(tmp.path() / "rem.pgm", grid, pts);
    const std::string pgm = read_text_file(tmp.path() / "rem.pgm");
    const std::string header = "P5\n3 3\n255\n";
    REQUIRE(pgm.rfind(header, 0) == 0);
    REQUIRE(pgm.size() == header.size() + pts.size());
}
