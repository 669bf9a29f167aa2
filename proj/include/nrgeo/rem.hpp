// SPDX-License-Identifier: Apache-2.0
//
// nrgeo — drop-based system-level simulator for NR outdoor calibration KPIs
// Copyright (C) 2026 The nrgeo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "io.hpp"
#include "linkbudget.hpp"
#include "math.hpp"

namespace nrgeo {

/// Regular 2D probe grid at a single evaluation height.
struct RemGrid {
    double x_min = 0.0, x_max = 0.0;
    double y_min = 0.0, y_max = 0.0;
    double resolution_m = 1.0;
    double z_m = 1.5;

    int nx() const { return static_cast<int>(std::floor((x_max - x_min) / resolution_m)) + 1; }
    int ny() const { return static_cast<int>(std::floor((y_max - y_min) / resolution_m)) + 1; }
    double x(int ix) const { return x_min + ix * resolution_m; }
    double y(int iy) const { return y_min + iy * resolution_m; }
};

inline void validate(const RemGrid& g) {
    if (g.resolution_m <= 0.0)
        throw invalid_input("rem grid: resolution must be positive");
    if (g.x_max <= g.x_min || g.y_max <= g.y_min)
        throw invalid_input("rem grid: degenerate bounds");
}

/// Default map: bounding box of the measured (ring 0-1) sites padded by
/// ISD/2, at ISD/200 resolution.
inline RemGrid default_rem_grid(const SitePlan& plan, double resolution_m = 0.0,
                                double padding_m = -1.0, double z_m = 1.5) {
    RemGrid g;
    double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
    bool any = false;
    for (const Site& s : plan.sites) {
        if (s.ring_index > 1)
            continue;
        if (!any) {
            x0 = x1 = s.position.x;
            y0 = y1 = s.position.y;
            any = true;
        }
        x0 = std::min(x0, s.position.x);
        x1 = std::max(x1, s.position.x);
        y0 = std::min(y0, s.position.y);
        y1 = std::max(y1, s.position.y);
    }
    const double pad = padding_m >= 0.0 ? padding_m : plan.isd_m / 2.0;
    g.x_min = x0 - pad;
    g.x_max = x1 + pad;
    g.y_min = y0 - pad;
    g.y_max = y1 + pad;
    g.resolution_m = resolution_m > 0.0 ? resolution_m : plan.isd_m / 200.0;
    g.z_m = z_m;
    validate(g);
    return g;
}

struct RemOptions {
    std::uint64_t seed = 1;
    bool shadowing = false;
    LosMode los_mode = LosMode::random;
};

struct RemPoint {
    Vec2 position;
    int best_cell_id = -1;
    double p_rx_best_dbm = 0.0;
    double sinr_db = 0.0;
};

struct RemPointEval {
    int best_index = -1;
    std::vector<double> p_rx_dbm; // per cell, best-beam
    double sinr_db = 0.0;
};

/// Evaluates one outdoor probe: best server by received power, every other
/// cell interfering at full power with its best beam toward the probe
/// (worst-case interference), subject to the configured distance cutoff.
inline RemPointEval evaluate_rem_point(const SitePlan& plan, const DropParams& prm,
                                       const RemOptions& opt, Vec2 xy, double z_m,
                                       std::uint64_t label_ix = 0, std::uint64_t label_iy = 0) {
    const auto cells = plan.cells();
    const int n_cells = static_cast<int>(cells.size());
    if (n_cells == 0)
        throw invalid_input("evaluate_rem_point: empty site plan");

    const LinkOptions link{opt.shadowing, false, opt.los_mode};
    const ArrayDescriptor& bs_array = cells[0]->array;
    const std::vector<Beam> beams = detail::active_beams(prm, bs_array);
    std::vector<std::vector<std::complex<double>>> weights;
    weights.reserve(beams.size());
    for (const Beam& b : beams)
        weights.push_back(steering_weights(bs_array, b.azimuth_deg, b.zenith_deg));

    const Vec3 rx{xy.x, xy.y, z_m};
    RemPointEval eval;
    eval.p_rx_dbm.resize(n_cells);
    for (int c = 0; c < n_cells; ++c) {
        const Cell& cell = *cells[c];
        const std::uint64_t link_seed =
            derive_seed(opt.seed, {draw::kRemPoint, static_cast<std::uint64_t>(cell.cell_id),
                                   label_ix, label_iy});
        const Vec3 tx{cell.site_position.x, cell.site_position.y, cell.antenna_height_m};
        const LinkState ls =
            link_state(prm.propagation, tx, rx, false, 0.0, LossClass::low, link_seed, link);
        const LocalDirection dir = local_direction(tx, cell.bearing_deg, rx);
        const double elem = element_gain_db(cell.array, dir.zenith_deg, dir.azimuth_deg);
        const double g_rx = element_gain_db(prm.ue_array, 90.0, 0.0);
        double g = elem;
        if (!beams.empty()) {
            const auto v = array_response(cell.array, dir.zenith_deg, dir.azimuth_deg);
            double best = -std::numeric_limits<double>::infinity();
            for (const auto& w : weights)
                best = std::max(best, beam_gain_db(w, v));
            g += best;
        }
        eval.p_rx_dbm[c] = cell.tx_power_dbm + g + g_rx - ls.total_pl_db;
    }

    eval.best_index = attach(eval.p_rx_dbm);
    const double noise_mw =
        db_to_lin(noise_power_dbm(prm.bandwidth_hz, prm.noise_figure_ue_db));
    const double cutoff_m = prm.interference_cutoff_multiple > 0.0
                                ? prm.interference_cutoff_multiple * plan.isd_m
                                : std::numeric_limits<double>::infinity();
    double interference_mw = 0.0;
    for (int c = 0; c < n_cells; ++c) {
        if (c == eval.best_index)
            continue;
        if (distance(xy, cells[c]->site_position) > cutoff_m)
            continue;
        interference_mw += db_to_lin(eval.p_rx_dbm[c]);
    }
    eval.sinr_db = eval.p_rx_dbm[static_cast<std::size_t>(eval.best_index)] -
                   lin_to_db(interference_mw + noise_mw);
    return eval;
}

/// Generates the map row-major (y outer ascending, x inner). Points are
/// independent; output ordering is fixed regardless of the worker count.
inline std::vector<RemPoint> generate_rem(const RemGrid& grid, const SitePlan& plan,
                                          const DropParams& prm, const RemOptions& opt,
                                          int jobs = 1) {
    validate(grid);
    const auto cells = plan.cells();
    const int nx = grid.nx();
    const int ny = grid.ny();
    std::vector<RemPoint> points(static_cast<std::size_t>(nx) * ny);

    const auto run_rows = [&](std::atomic<int>& next) {
        for (;;) {
            const int iy = next.fetch_add(1);
            if (iy >= ny)
                return;
            for (int ix = 0; ix < nx; ++ix) {
                const Vec2 xy{grid.x(ix), grid.y(iy)};
                const RemPointEval eval =
                    evaluate_rem_point(plan, prm, opt, xy, grid.z_m,
                                       static_cast<std::uint64_t>(ix),
                                       static_cast<std::uint64_t>(iy));
                RemPoint& p = points[static_cast<std::size_t>(iy) * nx + ix];
                p.position = xy;
                p.best_cell_id = cells[static_cast<std::size_t>(eval.best_index)]->cell_id;
                p.p_rx_best_dbm = eval.p_rx_dbm[static_cast<std::size_t>(eval.best_index)];
                p.sinr_db = eval.sinr_db;
            }
        }
    };

    std::atomic<int> next{0};
    const int workers = std::max(1, jobs);
    if (workers == 1) {
        run_rows(next);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int t = 0; t < workers; ++t)
            pool.emplace_back([&] { run_rows(next); });
        for (auto& th : pool)
            th.join();
    }
    return points;
}

inline Cdf rem_cdf(const std::vector<RemPoint>& points) {
    if (points.empty())
        throw invalid_input("rem_cdf: empty map");
    std::vector<double> samples;
    samples.reserve(points.size());
    for (const RemPoint& p : points)
        samples.push_back(p.sinr_db);
    return make_cdf(std::move(samples));
}

inline void write_rem_csv(const std::filesystem::path& path, const std::vector<RemPoint>& points) {
    std::ofstream out = open_output(path);
    out << "x_m,y_m,best_cell,sinr_db\n";
    for (const RemPoint& p : points)
        out << strf("%.3f,%.3f,%d,%.6f\n", p.position.x, p.position.y, p.best_cell_id, p.sinr_db);
}

/// Grayscale quick-look heatmap: SINR clamped to [-10, 30] dB mapped linearly
/// to 0..255. Rows run top-down (north up).
inline void write_rem_pgm(const std::filesystem::path& path, const RemGrid& grid,
                          const std::vector<RemPoint>& points) {
    const int nx = grid.nx();
    const int ny = grid.ny();
    std::ofstream out = open_output(path);
    out << "P5\n" << nx << " " << ny << "\n255\n";
    for (int iy = ny - 1; iy >= 0; --iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const double s = points[static_cast<std::size_t>(iy) * nx + ix].sinr_db;
            const double clamped = std::clamp(s, -10.0, 30.0);
            const int v = static_cast<int>(std::lround((clamped + 10.0) / 40.0 * 255.0));
            out.put(static_cast<char>(v));
        }
    }
}

} // namespace nrgeo
