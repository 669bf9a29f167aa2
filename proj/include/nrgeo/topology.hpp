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
#include <array>
#include <cstdint>
#include <vector>

#include "antenna.hpp"
#include "errors.hpp"
#include "math.hpp"
#include "rng.hpp"

namespace nrgeo {

inline constexpr double kMinBsUeDistanceM = 10.0;
inline constexpr int kMaxRings = 5;

/// Ring populations of the supported deployment, indexed by ring.
inline constexpr std::array<int, 6> kRingPopulations{1, 6, 6, 6, 12, 6};

/// Sector boresights in the horizontal plane. Coordinates are x-east,
/// y-north with bearings counterclockwise from +x.
inline constexpr std::array<double, 3> kSectorBearingsDeg{30.0, 150.0, 270.0};

enum class LossClass { low, high };
enum class HeightMode { fixed_1p5, random_3d };

struct Cell {
    int cell_id = -1;
    Vec2 site_position;
    double bearing_deg = 0.0;
    double tx_power_dbm = 46.0;
    double antenna_height_m = 35.0;
    ArrayDescriptor array;
    bool measured = false;
};

struct Site {
    Vec2 position;
    int ring_index = 0;
    std::array<Cell, 3> cells;
};

struct SitePlan {
    std::vector<Site> sites;
    double isd_m = 0.0;
    int num_rings = 0;

    int cell_count() const { return 3 * static_cast<int>(sites.size()); }

    /// Flat cell view ordered by cell_id.
    std::vector<const Cell*> cells() const {
        std::vector<const Cell*> out;
        out.reserve(static_cast<std::size_t>(cell_count()));
        for (const Site& s : sites)
            for (const Cell& c : s.cells)
                out.push_back(&c);
        return out;
    }
};

struct CellParams {
    double tx_power_dbm = 46.0;
    double antenna_height_m = 35.0;
    ArrayDescriptor array = rural_bs_array();
};

/// Circumradius of the hexagonal service area around one site.
inline double hex_circumradius(double isd_m) { return isd_m / std::sqrt(3.0); }

namespace detail {
// Squared lattice norms (in ISD units) of the supported rings; ring k holds
// the sites at distance sqrt(kRingNorm2[k]) * ISD from the center.
inline constexpr std::array<int, 6> kRingNorm2{0, 1, 3, 4, 7, 9};

inline int ring_from_norm2(int n2) {
    for (std::size_t k = 0; k < kRingNorm2.size(); ++k)
        if (kRingNorm2[k] == n2)
            return static_cast<int>(k);
    return -1;
}
} // namespace detail

/// Builds the hexagonal multi-ring deployment with tri-sector sites. Rings
/// are the distance classes of the triangular lattice; populations follow
/// kRingPopulations. Site ordering (by ring, then angle) and coordinates are
/// deterministic, so identical inputs give bit-identical plans.
inline SitePlan build_hex_layout(double isd_m, int num_rings, const CellParams& params = {}) {
    if (isd_m <= 0.0)
        throw invalid_input("build_hex_layout: isd must be positive");
    if (num_rings < 0 || num_rings > kMaxRings)
        throw invalid_input("build_hex_layout: unsupported ring count " +
                            std::to_string(num_rings) + " (supported: 0.." +
                            std::to_string(kMaxRings) + ")");

    struct Raw {
        Vec2 p;
        int ring;
        double angle;
    };
    std::vector<Raw> raw;
    const double sq32 = std::sqrt(3.0) / 2.0;
    for (int i = -3; i <= 3; ++i) {
        for (int j = -3; j <= 3; ++j) {
            const int n2 = i * i + i * j + j * j;
            const int ring = detail::ring_from_norm2(n2);
            if (ring < 0 || ring > num_rings)
                continue;
            Vec2 p{isd_m * (i + 0.5 * j), isd_m * sq32 * j};
            double ang = std::atan2(p.y, p.x);
            if (ang < 0.0)
                ang += 2.0 * kPi;
            raw.push_back({p, ring, ang});
        }
    }
    std::sort(raw.begin(), raw.end(), [](const Raw& a, const Raw& b) {
        if (a.ring != b.ring)
            return a.ring < b.ring;
        return a.angle < b.angle;
    });

    SitePlan plan;
    plan.isd_m = isd_m;
    plan.num_rings = num_rings;
    plan.sites.reserve(raw.size());
    int cell_id = 0;
    for (const Raw& r : raw) {
        Site site;
        site.position = r.p;
        site.ring_index = r.ring;
        for (std::size_t s = 0; s < kSectorBearingsDeg.size(); ++s) {
            Cell& c = site.cells[s];
            c.cell_id = cell_id++;
            c.site_position = r.p;
            c.bearing_deg = kSectorBearingsDeg[s];
            c.tx_power_dbm = params.tx_power_dbm;
            c.antenna_height_m = params.antenna_height_m;
            c.array = params.array;
            c.measured = r.ring <= 1;
        }
        plan.sites.push_back(site);
    }
    return plan;
}

/// Ring index of a site position: the index of its lattice distance class.
/// Non-lattice positions (or ones beyond the supported rings) are rejected.
inline int ring_of(Vec2 site_position, double isd_m) {
    if (isd_m <= 0.0)
        throw invalid_input("ring_of: isd must be positive");
    const double j = site_position.y / (isd_m * std::sqrt(3.0) / 2.0);
    const double i = site_position.x / isd_m - 0.5 * j;
    const double ri = std::round(i);
    const double rj = std::round(j);
    if (std::abs(i - ri) > 1e-6 || std::abs(j - rj) > 1e-6)
        throw invalid_input("ring_of: position is not a site of the lattice");
    const int ii = static_cast<int>(ri);
    const int jj = static_cast<int>(rj);
    const int ring = detail::ring_from_norm2(ii * ii + ii * jj + jj * jj);
    if (ring < 0)
        throw invalid_input("ring_of: site lies beyond the supported rings");
    return ring;
}

struct UserTerminal {
    int ue_id = -1;
    Vec2 position;
    double height_m = 1.5;
    bool indoor = false;
    double indoor_depth_m = 0.0;          // uncapped per-UE draw; capped per link
    LossClass loss_class = LossClass::low; // meaningful only if indoor
    int serving_cell = -1;                 // filled by attachment
    int home_cell = -1;                    // the sector the UE was dropped for
};

/// True when p lies in the service region of the given sector: the site
/// hexagon (circumradius ISD/sqrt(3)) cut to the 120 deg wedge around the
/// sector bearing.
inline bool point_in_sector(Vec2 site, double isd_m, double bearing_deg, Vec2 p,
                            double tol = 1e-9) {
    const Vec2 d = p - site;
    for (int k = 0; k < 6; ++k) {
        const double a = deg2rad(60.0 * k);
        if (d.x * std::cos(a) + d.y * std::sin(a) > isd_m / 2.0 + tol)
            return false;
    }
    const double off = wrap_deg_pm180(rad2deg(std::atan2(d.y, d.x)) - bearing_deg);
    return std::abs(off) <= 60.0 + tol;
}

/// Uniform sample over the sector wedge, resampled until the minimum
/// horizontal BS-UE distance holds (rejection keeps the rest uniform).
inline Vec2 sample_sector_position(Vec2 site, double isd_m, double bearing_deg,
                                   RandomStream& rng) {
    const double R = hex_circumradius(isd_m);
    const auto vertex = [&](double deg) {
        return Vec2{site.x + R * std::cos(deg2rad(deg)), site.y + R * std::sin(deg2rad(deg))};
    };
    // The wedge is the pair of triangles (site, V-60, V0) and (site, V0, V+60).
    const Vec2 vm = vertex(bearing_deg - 60.0);
    const Vec2 v0 = vertex(bearing_deg);
    const Vec2 vp = vertex(bearing_deg + 60.0);
    for (;;) {
        const bool first = rng.uniform() < 0.5;
        const Vec2 a = first ? vm : v0;
        const Vec2 b = first ? v0 : vp;
        double u = rng.uniform();
        double v = rng.uniform();
        if (u + v > 1.0) {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        const Vec2 p{site.x + u * (a.x - site.x) + v * (b.x - site.x),
                     site.y + u * (a.y - site.y) + v * (b.y - site.y)};
        if (distance(p, site) >= kMinBsUeDistanceM)
            return p;
    }
}

/// Drops per_sector UEs uniformly over every sector's service region.
/// UE ids are cell-major; draws derive from (seed, cell) so sectors are
/// independent streams.
inline std::vector<UserTerminal> drop_users(const SitePlan& plan, int per_sector,
                                            std::uint64_t seed) {
    if (per_sector < 1)
        throw invalid_input("drop_users: per_sector must be >= 1");
    std::vector<UserTerminal> ues;
    ues.reserve(static_cast<std::size_t>(plan.cell_count()) * per_sector);
    int ue_id = 0;
    for (const Site& site : plan.sites) {
        for (const Cell& cell : site.cells) {
            RandomStream rng(derive_seed(seed, {draw::kPosition, static_cast<std::uint64_t>(cell.cell_id)}));
            for (int k = 0; k < per_sector; ++k) {
                UserTerminal ue;
                ue.ue_id = ue_id++;
                ue.position = sample_sector_position(site.position, plan.isd_m, cell.bearing_deg, rng);
                ue.home_cell = cell.cell_id;
                ues.push_back(ue);
            }
        }
    }
    return ues;
}

/// Discrete indoor antenna height: floor count Nfl uniform on {4..8}, then
/// floor nfl uniform on {1..Nfl}, mapped to 3(nfl-1) + 1.5 meters.
inline double random_3d_height_m(RandomStream& rng) {
    const int total_floors = rng.uniform_int(4, 8);
    const int floor = rng.uniform_int(1, total_floors);
    return 3.0 * (floor - 1) + 1.5;
}

struct IndoorParams {
    double indoor_fraction = 0.0;
    double loss_high_fraction = 0.0;
    HeightMode height_mode = HeightMode::fixed_1p5;
    double max_indoor_depth_m = 10.0;
};

/// Assigns indoor state, loss class, height and indoor depth per UE; draws
/// derive from (seed, ue) so UEs are independent streams.
inline void assign_indoor_state(std::vector<UserTerminal>& ues, const IndoorParams& params,
                                std::uint64_t seed) {
    if (params.indoor_fraction < 0.0 || params.indoor_fraction > 1.0)
        throw invalid_input("assign_indoor_state: indoor_fraction must be in [0, 1]");
    if (params.loss_high_fraction < 0.0 || params.loss_high_fraction > 1.0)
        throw invalid_input("assign_indoor_state: loss_high_fraction must be in [0, 1]");
    for (UserTerminal& ue : ues) {
        RandomStream rng(derive_seed(seed, {draw::kIndoor, static_cast<std::uint64_t>(ue.ue_id)}));
        ue.indoor = rng.uniform() < params.indoor_fraction;
        if (!ue.indoor) {
            ue.height_m = 1.5;
            ue.indoor_depth_m = 0.0;
            ue.loss_class = LossClass::low;
            continue;
        }
        ue.loss_class = rng.uniform() < params.loss_high_fraction ? LossClass::high : LossClass::low;
        ue.height_m = params.height_mode == HeightMode::random_3d ? random_3d_height_m(rng) : 1.5;
        ue.indoor_depth_m = rng.uniform(0.0, params.max_indoor_depth_m);
    }
}

} // namespace nrgeo
