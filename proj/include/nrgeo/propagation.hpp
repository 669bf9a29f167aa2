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

#include <cstdint>
#include <string>

#include "errors.hpp"
#include "math.hpp"
#include "rng.hpp"
#include "topology.hpp"

namespace nrgeo {

enum class ScenarioKind { rma, uma };
enum class LosCondition { los, nlos };
enum class LosMode { random, always_los, always_nlos };

struct PropagationScenario {
    ScenarioKind kind = ScenarioKind::rma;
    double carrier_ghz = 0.7;
    double avg_building_height_m = 5.0; // rural environment constant
    double avg_street_width_m = 20.0;   // rural environment constant
};

inline void validate(const PropagationScenario& s) {
    if (s.carrier_ghz < 0.5 || s.carrier_ghz > 100.0)
        throw config_error("carrier_ghz " + std::to_string(s.carrier_ghz) +
                           " outside the model validity range [0.5, 100] GHz");
    if (s.avg_building_height_m <= 0.0 || s.avg_street_width_m <= 0.0)
        throw config_error("environment constants must be positive");
}

// ---------------------------------------------------------------------------
// LOS probability
// ---------------------------------------------------------------------------

/// Line-of-sight probability as a function of the outdoor part of the 2D
/// distance. Monotone non-increasing, 1 at co-location.
inline double los_probability(const PropagationScenario& s, double d2d_out_m, double h_ut_m) {
    if (d2d_out_m < 0.0)
        throw invalid_input("los_probability: negative distance");
    switch (s.kind) {
    case ScenarioKind::rma:
        if (d2d_out_m <= 10.0)
            return 1.0;
        return std::exp(-(d2d_out_m - 10.0) / 1000.0);
    case ScenarioKind::uma: {
        if (d2d_out_m <= 18.0)
            return 1.0;
        const double d = d2d_out_m;
        const double base = 18.0 / d + std::exp(-d / 63.0) * (1.0 - 18.0 / d);
        double c = 0.0;
        if (h_ut_m > 13.0)
            c = std::pow((std::min(h_ut_m, 23.0) - 13.0) / 10.0, 1.5);
        const double p = base * (1.0 + c * 1.25 * std::pow(d / 100.0, 3) * std::exp(-d / 150.0));
        return std::min(std::max(p, 0.0), 1.0);
    }
    }
    return 1.0;
}

// ---------------------------------------------------------------------------
// Basic pathloss
// ---------------------------------------------------------------------------

/// Dual-slope breakpoint distance of the LOS curves.
inline double breakpoint_distance_m(const PropagationScenario& s, double h_bs_m, double h_ut_m) {
    const double fc_hz = s.carrier_ghz * 1e9;
    if (s.kind == ScenarioKind::rma)
        return 2.0 * kPi * h_bs_m * h_ut_m * fc_hz / kSpeedOfLight;
    const double h_e = 1.0; // effective environment height used for calibration
    return 4.0 * (h_bs_m - h_e) * (h_ut_m - h_e) * fc_hz / kSpeedOfLight;
}

namespace detail {

inline void check_heights(const PropagationScenario& s, double h_bs_m, double h_ut_m) {
    if (s.kind == ScenarioKind::rma) {
        if (h_bs_m < 10.0 || h_bs_m > 150.0)
            throw model_domain_error("rma: h_bs " + std::to_string(h_bs_m) +
                                     " outside [10, 150] m");
        if (h_ut_m < 1.0 || h_ut_m > 10.0)
            throw model_domain_error("rma: h_ut " + std::to_string(h_ut_m) +
                                     " outside [1, 10] m");
    } else {
        if (std::abs(h_bs_m - 25.0) > 1e-9)
            throw model_domain_error("uma: h_bs " + std::to_string(h_bs_m) + " must be 25 m");
        if (h_ut_m < 1.5 || h_ut_m > 22.5)
            throw model_domain_error("uma: h_ut " + std::to_string(h_ut_m) +
                                     " outside [1.5, 22.5] m");
    }
}

inline double rma_los_pl(const PropagationScenario& s, double d3d, double dbp) {
    const double f = s.carrier_ghz;
    const double h = s.avg_building_height_m;
    const auto pl1 = [&](double d) {
        return 20.0 * std::log10(40.0 * kPi * d * f / 3.0) +
               std::min(0.03 * std::pow(h, 1.72), 10.0) * std::log10(d) -
               std::min(0.044 * std::pow(h, 1.72), 14.77) + 0.002 * std::log10(h) * d;
    };
    // The dual-slope switch is taken on the 3D distance so the curve is
    // exactly continuous at the breakpoint.
    if (d3d <= dbp)
        return pl1(d3d);
    return pl1(dbp) + 40.0 * std::log10(d3d / dbp);
}

inline double rma_nlos_pl(const PropagationScenario& s, double d3d, double h_bs, double h_ut) {
    const double f = s.carrier_ghz;
    const double h = s.avg_building_height_m;
    const double w = s.avg_street_width_m;
    return 161.04 - 7.1 * std::log10(w) + 7.5 * std::log10(h) -
           (24.37 - 3.7 * (h / h_bs) * (h / h_bs)) * std::log10(h_bs) +
           (43.42 - 3.1 * std::log10(h_bs)) * (std::log10(d3d) - 3.0) +
           20.0 * std::log10(f) -
           (3.2 * std::pow(std::log10(11.75 * h_ut), 2) - 4.97);
}

inline double uma_los_pl(const PropagationScenario& s, double d2d, double d3d, double h_bs,
                         double h_ut, double dbp) {
    const double f = s.carrier_ghz;
    if (d2d <= dbp)
        return 28.0 + 22.0 * std::log10(d3d) + 20.0 * std::log10(f);
    return 28.0 + 40.0 * std::log10(d3d) + 20.0 * std::log10(f) -
           9.0 * std::log10(dbp * dbp + (h_bs - h_ut) * (h_bs - h_ut));
}

inline double uma_nlos_pl(const PropagationScenario& s, double d3d, double h_ut) {
    return 13.54 + 39.08 * std::log10(d3d) + 20.0 * std::log10(s.carrier_ghz) -
           0.6 * (h_ut - 1.5);
}

} // namespace detail

/// Basic outdoor pathloss in dB, without shadow fading. The NLOS value is the
/// max of the LOS curve and the NLOS expression. Distances beyond the
/// published validity ranges extrapolate with the same expressions.
inline double basic_pathloss_db(const PropagationScenario& s, double d2d_m, double d3d_m,
                                double h_bs_m, double h_ut_m, LosCondition los) {
    detail::check_heights(s, h_bs_m, h_ut_m);
    if (d2d_m < 0.0 || d3d_m <= 0.0 || d3d_m + 1e-9 < d2d_m)
        throw model_domain_error("basic_pathloss: need d3d >= d2d >= 0 and d3d > 0");
    const double dbp = breakpoint_distance_m(s, h_bs_m, h_ut_m);
    if (s.kind == ScenarioKind::rma) {
        const double pl_los = detail::rma_los_pl(s, d3d_m, dbp);
        if (los == LosCondition::los)
            return pl_los;
        return std::max(pl_los, detail::rma_nlos_pl(s, d3d_m, h_bs_m, h_ut_m));
    }
    const double pl_los = detail::uma_los_pl(s, d2d_m, d3d_m, h_bs_m, h_ut_m, dbp);
    if (los == LosCondition::los)
        return pl_los;
    return std::max(pl_los, detail::uma_nlos_pl(s, d3d_m, h_ut_m));
}

// ---------------------------------------------------------------------------
// Shadow fading
// ---------------------------------------------------------------------------

/// Shadow-fading standard deviation for the scenario and condition. The rural
/// LOS value is slope-dependent (4 dB before the breakpoint, 6 dB after).
inline double shadow_sigma_db(const PropagationScenario& s, LosCondition los, double d2d_m,
                              double h_bs_m, double h_ut_m) {
    if (s.kind == ScenarioKind::rma) {
        if (los == LosCondition::nlos)
            return 8.0;
        const double dh = h_bs_m - h_ut_m;
        const double d3d = std::sqrt(d2d_m * d2d_m + dh * dh);
        return d3d <= breakpoint_distance_m(s, h_bs_m, h_ut_m) ? 4.0 : 6.0;
    }
    return los == LosCondition::los ? 4.0 : 6.0;
}

/// Zero-mean Gaussian shadow-fading draw, i.i.d. per link.
inline double shadow_fading_db(const PropagationScenario& s, LosCondition los, double d2d_m,
                               double h_bs_m, double h_ut_m, RandomStream& rng) {
    return rng.normal(shadow_sigma_db(s, los, d2d_m, h_bs_m, h_ut_m));
}

// ---------------------------------------------------------------------------
// O2I penetration
// ---------------------------------------------------------------------------

inline double o2i_sigma_p_db(LossClass lc) { return lc == LossClass::low ? 4.4 : 6.5; }

/// Building wall loss from the glass/concrete material compositions of the
/// low- and high-loss models.
inline double o2i_wall_loss_db(LossClass lc, double carrier_ghz) {
    const double f = carrier_ghz;
    const double l_glass = 2.0 + 0.2 * f;
    const double l_irr_glass = 23.0 + 0.3 * f;
    const double l_concrete = 5.0 + 4.0 * f;
    if (lc == LossClass::low)
        return 5.0 - 10.0 * std::log10(0.3 * std::pow(10.0, -l_glass / 10.0) +
                                       0.7 * std::pow(10.0, -l_concrete / 10.0));
    return 5.0 - 10.0 * std::log10(0.7 * std::pow(10.0, -l_irr_glass / 10.0) +
                                   0.3 * std::pow(10.0, -l_concrete / 10.0));
}

struct O2iLoss {
    double pl_tw_db = 0.0;
    double pl_in_db = 0.0;
    double sigma_draw_db = 0.0;
};

/// Wall loss, inside loss (0.5 dB/m of indoor depth) and the lognormal
/// penetration spread draw.
inline O2iLoss o2i_penetration(LossClass lc, double carrier_ghz, double d2din_m,
                               RandomStream& rng) {
    if (d2din_m < 0.0)
        throw invalid_input("o2i_penetration: negative indoor depth");
    O2iLoss o;
    o.pl_tw_db = o2i_wall_loss_db(lc, carrier_ghz);
    o.pl_in_db = 0.5 * d2din_m;
    o.sigma_draw_db = rng.normal(o2i_sigma_p_db(lc));
    return o;
}

// ---------------------------------------------------------------------------
// Full large-scale link state
// ---------------------------------------------------------------------------

struct LinkState {
    LosCondition los = LosCondition::los;
    double pl_basic_db = 0.0; // basic pathloss including the shadowing term
    double pl_tw_db = 0.0;
    double pl_in_db = 0.0;
    double penetration_sigma_draw_db = 0.0;
    double shadowing_db = 0.0; // stored separately; already inside pl_basic_db
    double total_pl_db = 0.0;
};

struct LinkOptions {
    bool shadowing = true;
    bool o2i = true;
    LosMode los_mode = LosMode::random;
};

/// Draws the complete large-scale state of one link. All randomness comes
/// from streams derived from link_seed, one per purpose, so the result is a
/// pure function of (seed, geometry, options).
inline LinkState link_state(const PropagationScenario& scen, Vec3 tx, Vec3 rx, bool indoor,
                            double indoor_depth_m, LossClass loss_class, std::uint64_t link_seed,
                            const LinkOptions& opt) {
    const double dx = rx.x - tx.x;
    const double dy = rx.y - tx.y;
    const double dz = rx.z - tx.z;
    const double d2d = std::hypot(dx, dy);
    const double d3d = std::sqrt(d2d * d2d + dz * dz);

    const bool o2i_applies = indoor && opt.o2i;
    const double depth = o2i_applies ? std::min(indoor_depth_m, d2d) : 0.0;
    const double d2d_out = d2d - depth;

    LosCondition los = LosCondition::los;
    switch (opt.los_mode) {
    case LosMode::always_los:
        break;
    case LosMode::always_nlos:
        los = LosCondition::nlos;
        break;
    case LosMode::random: {
        RandomStream r(derive_seed(link_seed, {draw::kLos}));
        los = r.uniform() < los_probability(scen, d2d_out, rx.z) ? LosCondition::los
                                                                 : LosCondition::nlos;
        break;
    }
    }

    LinkState ls;
    ls.los = los;
    double pl_b = basic_pathloss_db(scen, d2d, d3d, tx.z, rx.z, los);
    if (opt.shadowing) {
        RandomStream r(derive_seed(link_seed, {draw::kShadowing}));
        ls.shadowing_db = shadow_fading_db(scen, los, d2d, tx.z, rx.z, r);
    }
    ls.pl_basic_db = pl_b + ls.shadowing_db;
    if (o2i_applies) {
        RandomStream r(derive_seed(link_seed, {draw::kO2iSigma}));
        const O2iLoss o = o2i_penetration(loss_class, scen.carrier_ghz, depth, r);
        ls.pl_tw_db = o.pl_tw_db;
        ls.pl_in_db = o.pl_in_db;
        ls.penetration_sigma_draw_db = o.sigma_draw_db;
    }
    ls.total_pl_db = ls.pl_basic_db + ls.pl_tw_db + ls.pl_in_db + ls.penetration_sigma_draw_db;
    return ls;
}

/// Link state between a cell and a user terminal.
inline LinkState link_state(const PropagationScenario& scen, const Cell& cell,
                            const UserTerminal& ue, std::uint64_t link_seed,
                            const LinkOptions& opt) {
    const Vec3 tx{cell.site_position.x, cell.site_position.y, cell.antenna_height_m};
    const Vec3 rx{ue.position.x, ue.position.y, ue.height_m};
    return link_state(scen, tx, rx, ue.indoor, ue.indoor_depth_m, ue.loss_class, link_seed, opt);
}

} // namespace nrgeo
