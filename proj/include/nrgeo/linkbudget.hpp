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
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "antenna.hpp"
#include "errors.hpp"
#include "math.hpp"
#include "propagation.hpp"
#include "rng.hpp"
#include "topology.hpp"

namespace nrgeo {

// ---------------------------------------------------------------------------
// Link budget primitives
// ---------------------------------------------------------------------------

struct LinkBudget {
    double p_tx_dbm = 0.0;
    double p_rx_dbm = 0.0;
    double gain_tx_db = 0.0;
    double gain_rx_db = 0.0;
    double pl_db = 0.0;
};

inline LinkBudget make_link_budget(double p_tx_dbm, double gain_tx_db, double gain_rx_db,
                                   double pl_db) {
    return {p_tx_dbm, p_tx_dbm + gain_tx_db + gain_rx_db - pl_db, gain_tx_db, gain_rx_db, pl_db};
}

/// Serving-link coupling gain: received minus transmitted power. A loss-like
/// sign convention is a presentation choice handled at output time.
inline double coupling_gain_db(const LinkBudget& b) { return b.p_rx_dbm - b.p_tx_dbm; }

/// Thermal noise power over a bandwidth, -174 dBm/Hz spectral density plus
/// the receiver noise figure.
inline double noise_power_dbm(double bandwidth_hz, double noise_figure_db) {
    if (bandwidth_hz <= 0.0)
        throw invalid_input("noise_power_dbm: bandwidth must be positive");
    return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

/// Best-received-power attachment; ties break toward the lowest index.
inline int attach(std::span<const double> p_rx_dbm) {
    if (p_rx_dbm.empty())
        throw invalid_input("attach: no candidate cells");
    int best = 0;
    for (int c = 1; c < static_cast<int>(p_rx_dbm.size()); ++c)
        if (p_rx_dbm[c] > p_rx_dbm[best])
            best = c;
    return best;
}

/// Wideband SINR in dB: serving received power over the linear-domain sum of
/// interferer powers plus noise. `interferes` masks which non-serving cells
/// count (the distance cutoff); the serving entry is ignored.
inline double geometry_sinr_db(std::size_t serving, std::span<const double> p_rx_dbm,
                               std::span<const std::uint8_t> interferes, double noise_dbm) {
    double denom_mw = db_to_lin(noise_dbm);
    for (std::size_t c = 0; c < p_rx_dbm.size(); ++c) {
        if (c == serving || !interferes[c])
            continue;
        denom_mw += db_to_lin(p_rx_dbm[c]);
    }
    return p_rx_dbm[serving] - lin_to_db(denom_mw);
}

// ---------------------------------------------------------------------------
// Empirical CDFs
// ---------------------------------------------------------------------------

/// Empirical distribution: sorted sample values with cumulative probabilities.
struct Cdf {
    std::vector<double> values;
    std::vector<double> probs;

    std::size_t size() const { return values.size(); }
};

inline Cdf make_cdf(std::vector<double> samples) {
    if (samples.empty())
        throw invalid_input("make_cdf: empty sample set");
    std::sort(samples.begin(), samples.end());
    Cdf cdf;
    const double n = static_cast<double>(samples.size());
    cdf.values = std::move(samples);
    cdf.probs.resize(cdf.values.size());
    for (std::size_t i = 0; i < cdf.probs.size(); ++i)
        cdf.probs[i] = static_cast<double>(i + 1) / n;
    return cdf;
}

/// Inverse-CDF lower interpolation: the smallest value whose cumulative
/// probability reaches p.
inline double percentile(const Cdf& cdf, double p) {
    if (cdf.values.empty())
        throw invalid_input("percentile: empty distribution");
    if (p < 0.0 || p > 1.0)
        throw invalid_input("percentile: p must be in [0, 1]");
    const auto it = std::lower_bound(cdf.probs.begin(), cdf.probs.end(), p - 1e-12);
    if (it == cdf.probs.end())
        return cdf.values.back();
    return cdf.values[static_cast<std::size_t>(it - cdf.probs.begin())];
}

/// Kolmogorov-Smirnov statistic: the largest vertical distance between the
/// two step functions, evaluated on the union grid of their jump points.
inline double ks_distance(const Cdf& a, const Cdf& b) {
    if (a.values.empty() || b.values.empty())
        throw invalid_input("ks_distance: empty distribution");
    const double inf = std::numeric_limits<double>::infinity();
    std::size_t i = 0, j = 0;
    double fa = 0.0, fb = 0.0, d = 0.0;
    while (i < a.values.size() || j < b.values.size()) {
        const double va = i < a.values.size() ? a.values[i] : inf;
        const double vb = j < b.values.size() ? b.values[j] : inf;
        const double v = std::min(va, vb);
        while (i < a.values.size() && a.values[i] <= v)
            fa = a.probs[i++];
        while (j < b.values.size() && b.values[j] <= v)
            fb = b.probs[j++];
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

// ---------------------------------------------------------------------------
// Drop evaluation
// ---------------------------------------------------------------------------

/// Everything one drop needs beyond the site plan.
struct DropParams {
    PropagationScenario propagation;
    double bandwidth_hz = 10e6;
    double noise_figure_ue_db = 7.0;
    int per_sector_ues = 10;
    IndoorParams indoor;
    LinkOptions link;
    bool beamforming = true;
    std::vector<Beam> beam_set;                 // empty: fixed beam at (0, downtilt)
    double interference_cutoff_multiple = 2.0;  // <= 0 disables the cutoff
    double sinr_floor_db = -6.0;                // out-of-coverage filter
    ArrayDescriptor ue_array = ue_isotropic_array();
};

/// Per-link detail kept for oracles and cross-checks (ue-major layout).
struct DropDetail {
    int n_cells = 0;
    std::vector<LinkState> links;
    std::vector<double> p_rx_dbm;   // best-beam received power
    std::vector<double> tx_gain_db; // element + applied array-factor gain
};

struct DropResult {
    int drop_index = 0;
    double noise_dbm = 0.0;
    std::vector<UserTerminal> ues; // serving_cell filled
    std::vector<double> coupling_gain_db;
    std::vector<double> sinr_db;
    std::vector<std::uint8_t> attached_measured;
    std::vector<std::uint8_t> filtered; // below the SINR floor
    std::optional<DropDetail> detail;
};

namespace detail {

/// Candidate beams a cell applies: the configured search set, the fixed
/// steered beam, or none when beamforming is disabled.
inline std::vector<Beam> active_beams(const DropParams& prm, const ArrayDescriptor& arr) {
    if (!prm.beamforming)
        return {};
    if (prm.beam_set.empty())
        return {Beam{0.0, arr.downtilt_deg}};
    return prm.beam_set;
}

} // namespace detail

/// Runs one drop: places users, draws every (cell, UE) link, attaches by best
/// received power and computes the two KPIs. Deterministic given
/// (plan, params, root_seed, drop_index).
inline DropResult evaluate_drop(const SitePlan& plan, const DropParams& prm,
                                std::uint64_t root_seed, int drop_index,
                                bool keep_detail = false) {
    validate(prm.propagation);
    const auto cells = plan.cells();
    const int n_cells = static_cast<int>(cells.size());
    if (n_cells == 0)
        throw invalid_input("evaluate_drop: empty site plan");

    DropResult res;
    res.drop_index = drop_index;
    res.noise_dbm = noise_power_dbm(prm.bandwidth_hz, prm.noise_figure_ue_db);

    const std::uint64_t user_seed =
        derive_seed(root_seed, {draw::kUsers, static_cast<std::uint64_t>(drop_index)});
    res.ues = drop_users(plan, prm.per_sector_ues, user_seed);
    assign_indoor_state(res.ues, prm.indoor, user_seed);
    const int n_ues = static_cast<int>(res.ues.size());

    const ArrayDescriptor& bs_array = cells[0]->array;
    const std::vector<Beam> beams = detail::active_beams(prm, bs_array);
    const int n_beams = static_cast<int>(beams.size());
    std::vector<std::vector<std::complex<double>>> weights;
    weights.reserve(beams.size());
    for (const Beam& b : beams)
        weights.push_back(steering_weights(bs_array, b.azimuth_deg, b.zenith_deg));

    std::vector<LinkState> links(static_cast<std::size_t>(n_ues) * n_cells);
    std::vector<double> p_rx(static_cast<std::size_t>(n_ues) * n_cells);
    std::vector<double> tx_gain(static_cast<std::size_t>(n_ues) * n_cells);
    std::vector<int> best_beam(static_cast<std::size_t>(n_ues) * n_cells, -1);
    // Per-beam linear received powers, needed only when a search set is active
    // (interferers are averaged over the beams they actually serve with).
    const bool per_beam = n_beams > 1;
    std::vector<double> p_rx_beam_mw;
    if (per_beam)
        p_rx_beam_mw.resize(static_cast<std::size_t>(n_ues) * n_cells * n_beams);

    std::vector<int> serving(n_ues, 0);

    for (int u = 0; u < n_ues; ++u) {
        const UserTerminal& ue = res.ues[u];
        const Vec3 rx{ue.position.x, ue.position.y, ue.height_m};
        for (int c = 0; c < n_cells; ++c) {
            const Cell& cell = *cells[c];
            const std::size_t idx = static_cast<std::size_t>(u) * n_cells + c;
            const std::uint64_t link_seed =
                derive_seed(root_seed, {draw::kLink, static_cast<std::uint64_t>(drop_index),
                                        static_cast<std::uint64_t>(cell.cell_id),
                                        static_cast<std::uint64_t>(ue.ue_id)});
            links[idx] = link_state(prm.propagation, cell, ue, link_seed, prm.link);

            const Vec3 tx{cell.site_position.x, cell.site_position.y, cell.antenna_height_m};
            const LocalDirection dir = local_direction(tx, cell.bearing_deg, rx);
            const double elem = element_gain_db(cell.array, dir.zenith_deg, dir.azimuth_deg);
            const double g_rx = element_gain_db(prm.ue_array, 90.0, 0.0);
            const double base_dbm = cell.tx_power_dbm + elem + g_rx - links[idx].total_pl_db;

            if (n_beams == 0) {
                p_rx[idx] = base_dbm;
                tx_gain[idx] = elem;
                continue;
            }
            const auto v = array_response(cell.array, dir.zenith_deg, dir.azimuth_deg);
            double best_dbm = -std::numeric_limits<double>::infinity();
            int best_b = 0;
            for (int b = 0; b < n_beams; ++b) {
                const double af = beam_gain_db(weights[static_cast<std::size_t>(b)], v);
                const double dbm = base_dbm + af;
                if (per_beam)
                    p_rx_beam_mw[(static_cast<std::size_t>(u) * n_cells + c) * n_beams + b] =
                        db_to_lin(dbm);
                if (dbm > best_dbm) {
                    best_dbm = dbm;
                    best_b = b;
                }
            }
            p_rx[idx] = best_dbm;
            tx_gain[idx] = best_dbm - (cell.tx_power_dbm + g_rx - links[idx].total_pl_db);
            best_beam[idx] = best_b;
        }
        serving[u] = attach({p_rx.data() + static_cast<std::size_t>(u) * n_cells,
                             static_cast<std::size_t>(n_cells)});
        res.ues[u].serving_cell = cells[serving[u]]->cell_id;
    }

    // Beams each cell spends time on while serving its attached users
    // (duplicates kept: round-robin full buffer weights beams by user count).
    std::vector<std::vector<int>> served_beams;
    if (per_beam) {
        served_beams.assign(n_cells, {});
        for (int u = 0; u < n_ues; ++u) {
            const int s = serving[u];
            served_beams[s].push_back(best_beam[static_cast<std::size_t>(u) * n_cells + s]);
        }
    }

    const double noise_mw = db_to_lin(res.noise_dbm);
    const double cutoff_m = prm.interference_cutoff_multiple > 0.0
                                ? prm.interference_cutoff_multiple * plan.isd_m
                                : std::numeric_limits<double>::infinity();

    res.coupling_gain_db.resize(n_ues);
    res.sinr_db.resize(n_ues);
    res.attached_measured.resize(n_ues);
    res.filtered.resize(n_ues);

    for (int u = 0; u < n_ues; ++u) {
        const int s = serving[u];
        const std::size_t row = static_cast<std::size_t>(u) * n_cells;
        double interference_mw = 0.0;
        for (int c = 0; c < n_cells; ++c) {
            if (c == s)
                continue;
            if (distance(res.ues[u].position, cells[c]->site_position) > cutoff_m)
                continue;
            if (!per_beam) {
                interference_mw += db_to_lin(p_rx[row + c]);
                continue;
            }
            const std::vector<int>& sb = served_beams[c];
            const double* beam_mw = &p_rx_beam_mw[(row + c) * n_beams];
            double mw = 0.0;
            if (sb.empty()) {
                for (int b = 0; b < n_beams; ++b)
                    mw += beam_mw[b];
                mw /= n_beams;
            } else {
                for (int b : sb)
                    mw += beam_mw[b];
                mw /= static_cast<double>(sb.size());
            }
            interference_mw += mw;
        }
        res.sinr_db[u] = p_rx[row + s] - lin_to_db(interference_mw + noise_mw);
        res.coupling_gain_db[u] = p_rx[row + s] - cells[s]->tx_power_dbm;
        res.attached_measured[u] = cells[s]->measured ? 1 : 0;
        res.filtered[u] = res.sinr_db[u] < prm.sinr_floor_db ? 1 : 0;
    }

    if (keep_detail) {
        DropDetail d;
        d.n_cells = n_cells;
        d.links = std::move(links);
        d.p_rx_dbm = std::move(p_rx);
        d.tx_gain_db = std::move(tx_gain);
        res.detail = std::move(d);
    }
    return res;
}

// ---------------------------------------------------------------------------
// KPI aggregation
// ---------------------------------------------------------------------------

/// Per-UE KPI samples of the measured cells, pooled over drops.
struct KpiSampleSet {
    std::string scenario_tag;
    int drops = 0;
    std::vector<double> coupling_gain_db; // all measured-attached UEs
    std::vector<double> geometry_sinr_db; // floor-filtered subset
    long filtered_count = 0;
};

inline void accumulate(KpiSampleSet& set, const DropResult& drop) {
    for (std::size_t u = 0; u < drop.ues.size(); ++u) {
        if (!drop.attached_measured[u])
            continue;
        set.coupling_gain_db.push_back(drop.coupling_gain_db[u]);
        if (drop.filtered[u])
            ++set.filtered_count;
        else
            set.geometry_sinr_db.push_back(drop.sinr_db[u]);
    }
    ++set.drops;
}

} // namespace nrgeo
