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

#include <complex>
#include <fstream>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "math.hpp"

namespace nrgeo {

enum class ElementPattern { threegpp, isotropic };
enum class Polarization { single, dual_model2 };

/// Uniform planar array driven by one TXRU. Rows index the vertical (zenith)
/// dimension, columns the horizontal one: "8x1" is 8 stacked elements.
struct ArrayDescriptor {
    int rows = 1;
    int cols = 1;
    double dh_lambda = 0.5; // horizontal element spacing in wavelengths
    double dv_lambda = 0.8; // vertical element spacing in wavelengths
    ElementPattern element = ElementPattern::isotropic;
    double element_max_gain_dbi = 0.0;
    double downtilt_deg = 90.0; // zenith angle of the fixed steered beam
    Polarization polarization = Polarization::single;
    double slant_deg = 0.0;

    int size() const { return rows * cols; }
};

inline ArrayDescriptor rural_bs_array() {
    ArrayDescriptor a;
    a.rows = 8;
    a.cols = 1;
    a.element = ElementPattern::threegpp;
    a.element_max_gain_dbi = 8.0;
    return a;
}

inline ArrayDescriptor dense_urban_bs_array() {
    ArrayDescriptor a;
    a.rows = 4;
    a.cols = 8;
    a.element = ElementPattern::threegpp;
    a.element_max_gain_dbi = 8.0;
    return a;
}

inline ArrayDescriptor ue_isotropic_array() { return ArrayDescriptor{}; }

/// One analog steering direction. Azimuth is relative to the array boresight
/// (the sector bearing); zenith is global, 90 deg pointing at the horizon.
struct Beam {
    double azimuth_deg = 0.0;
    double zenith_deg = 90.0;
};

// ---------------------------------------------------------------------------
// Element pattern
// ---------------------------------------------------------------------------

/// Directional element gain in dBi. Zenith in [0, 180] measured from straight
/// up, azimuth relative to boresight in (-180, 180]. The directional pattern
/// has 65 deg half-power widths in both cuts, a 30 dB floor per cut and a
/// 30 dB total floor below the peak gain.
inline double element_gain_db(ElementPattern pattern, double max_gain_dbi, double zenith_deg,
                              double azimuth_deg) {
    if (pattern == ElementPattern::isotropic)
        return max_gain_dbi;
    const double t = (zenith_deg - 90.0) / 65.0;
    const double p = azimuth_deg / 65.0;
    const double av = -std::min(12.0 * t * t, 30.0);
    const double ah = -std::min(12.0 * p * p, 30.0);
    const double a = -std::min(-(av + ah), 30.0);
    return max_gain_dbi + a;
}

inline double element_gain_db(const ArrayDescriptor& arr, double zenith_deg, double azimuth_deg) {
    return element_gain_db(arr.element, arr.element_max_gain_dbi, zenith_deg, azimuth_deg);
}

// ---------------------------------------------------------------------------
// Array factor
// ---------------------------------------------------------------------------

/// Plane-wave response of the array toward (zenith, azimuth) in the local
/// frame. Elements sit in the boresight-normal plane: columns step along the
/// horizontal axis, rows along the vertical one.
inline std::vector<std::complex<double>> array_response(const ArrayDescriptor& arr,
                                                        double zenith_deg, double azimuth_deg) {
    const double st = std::sin(deg2rad(zenith_deg));
    const double ct = std::cos(deg2rad(zenith_deg));
    const double sp = std::sin(deg2rad(azimuth_deg));
    std::vector<std::complex<double>> v(static_cast<std::size_t>(arr.size()));
    std::size_t i = 0;
    for (int m = 0; m < arr.rows; ++m) {
        for (int n = 0; n < arr.cols; ++n) {
            const double phase =
                2.0 * kPi * (m * arr.dv_lambda * ct + n * arr.dh_lambda * st * sp);
            v[i++] = {std::cos(phase), std::sin(phase)};
        }
    }
    return v;
}

/// Unit-norm phase-only weights, conjugate-matched to the plane-wave response
/// toward the steering direction: |w_i| = 1/sqrt(N) for every element.
inline std::vector<std::complex<double>> steering_weights(const ArrayDescriptor& arr,
                                                          double azimuth_deg, double zenith_deg) {
    std::vector<std::complex<double>> w = array_response(arr, zenith_deg, azimuth_deg);
    const double scale = 1.0 / std::sqrt(static_cast<double>(w.size()));
    for (auto& x : w)
        x = std::conj(x) * scale;
    return w;
}

/// Beamforming power gain 10*log10(|sum_i w_i v_i|^2) of applied weights w
/// against a response v. N coherent elements give 10*log10(N).
inline double beam_gain_db(std::span<const std::complex<double>> weights,
                           std::span<const std::complex<double>> response) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < weights.size(); ++i)
        acc += weights[i] * response[i];
    const double p = std::norm(acc);
    if (p <= 0.0)
        return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(p);
}

/// Array-factor gain of a steered beam evaluated toward (zenith, azimuth).
inline double array_factor_db(const ArrayDescriptor& arr, const Beam& steer, double zenith_deg,
                              double azimuth_deg) {
    const auto w = steering_weights(arr, steer.azimuth_deg, steer.zenith_deg);
    const auto v = array_response(arr, zenith_deg, azimuth_deg);
    return beam_gain_db(w, v);
}

// ---------------------------------------------------------------------------
// Link directions
// ---------------------------------------------------------------------------

/// Direction of a link endpoint in the local frame of an array whose
/// boresight points along `bearing_deg` in the horizontal plane.
struct LocalDirection {
    double zenith_deg = 90.0;  // from straight up
    double azimuth_deg = 0.0;  // relative to boresight, (-180, 180]
};

inline LocalDirection local_direction(Vec3 from, double bearing_deg, Vec3 to) {
    const double dx = to.x - from.x;
    const double dy = to.y - from.y;
    const double dz = to.z - from.z;
    const double d3 = std::sqrt(dx * dx + dy * dy + dz * dz);
    LocalDirection dir;
    if (d3 > 0.0)
        dir.zenith_deg = rad2deg(std::acos(dz / d3));
    dir.azimuth_deg = wrap_deg_pm180(rad2deg(std::atan2(dy, dx)) - bearing_deg);
    return dir;
}

// ---------------------------------------------------------------------------
// TXRU gain and beam search
// ---------------------------------------------------------------------------

/// Polarization mismatch between two slanted ports (ideal Model-2: co-polar
/// ports couple fully, orthogonal ports not at all). Applied only when both
/// ends are configured dual-polarized.
inline double polarization_loss_db(const ArrayDescriptor& tx, const ArrayDescriptor& rx) {
    if (tx.polarization != Polarization::dual_model2 || rx.polarization != Polarization::dual_model2)
        return 0.0;
    const double c = std::cos(deg2rad(tx.slant_deg - rx.slant_deg));
    const double p = c * c;
    if (p <= 1e-30) // orthogonal ports: no cross-polar leakage in the ideal model
        return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(p);
}

/// Total dB gain of one TXRU link: element gains at the local departure and
/// arrival angles plus the analog array-factor gains of the applied beams.
/// A missing beam means no analog steering is applied at that end.
inline double txru_gain_db(const ArrayDescriptor& tx_array, double tx_bearing_deg,
                           std::optional<Beam> tx_beam, Vec3 tx_pos, Vec3 rx_pos,
                           const ArrayDescriptor& rx_array = ue_isotropic_array(),
                           double rx_bearing_deg = 0.0, std::optional<Beam> rx_beam = {}) {
    const LocalDirection dep = local_direction(tx_pos, tx_bearing_deg, rx_pos);
    const LocalDirection arr = local_direction(rx_pos, rx_bearing_deg, tx_pos);
    double g = element_gain_db(tx_array, dep.zenith_deg, dep.azimuth_deg) +
               element_gain_db(rx_array, arr.zenith_deg, arr.azimuth_deg);
    if (tx_beam)
        g += array_factor_db(tx_array, *tx_beam, dep.zenith_deg, dep.azimuth_deg);
    if (rx_beam)
        g += array_factor_db(rx_array, *rx_beam, arr.zenith_deg, arr.azimuth_deg);
    g += polarization_loss_db(tx_array, rx_array);
    return g;
}

struct BeamChoice {
    int index = -1;
    Beam beam;
    double gain_db = -std::numeric_limits<double>::infinity();
};

/// Picks the beam with the highest TXRU gain toward a link direction.
/// Ties break toward the lowest beam index.
inline BeamChoice beam_search(const ArrayDescriptor& arr, std::span<const Beam> beam_set,
                              const LocalDirection& dir) {
    if (beam_set.empty())
        throw invalid_input("beam_search: beam set is empty");
    const double elem = element_gain_db(arr, dir.zenith_deg, dir.azimuth_deg);
    const auto v = array_response(arr, dir.zenith_deg, dir.azimuth_deg);
    BeamChoice best;
    for (std::size_t b = 0; b < beam_set.size(); ++b) {
        const auto w = steering_weights(arr, beam_set[b].azimuth_deg, beam_set[b].zenith_deg);
        const double g = elem + beam_gain_db(w, v);
        if (g > best.gain_db) {
            best.index = static_cast<int>(b);
            best.beam = beam_set[b];
            best.gain_db = g;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Beam sets
// ---------------------------------------------------------------------------

/// Default beam-search set: azimuth {-45, -15, +15, +45} relative to the
/// sector bearing crossed with zenith {90, 100}.
inline std::vector<Beam> default_beam_search_set() {
    std::vector<Beam> beams;
    for (double zen : {90.0, 100.0})
        for (double az : {-45.0, -15.0, 15.0, 45.0})
            beams.push_back({az, zen});
    return beams;
}

/// Loads a beam set from a plain-text file, one "azimuth_deg,zenith_deg" pair
/// per line. '#' starts a comment; blank lines are skipped.
inline std::vector<Beam> load_beam_set(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw parse_error("cannot open beam-set file: " + path);
    std::vector<Beam> beams;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        double az = 0.0, zen = 0.0;
        char comma = 0;
        std::istringstream ss(line);
        if (!(ss >> az >> comma >> zen) || comma != ',')
            throw parse_error(path + ": line " + std::to_string(line_no) +
                              ": expected 'azimuth_deg,zenith_deg'");
        beams.push_back({az, zen});
    }
    if (beams.empty())
        throw invalid_input("beam-set file contains no directions: " + path);
    for (std::size_t i = 0; i < beams.size(); ++i)
        for (std::size_t j = i + 1; j < beams.size(); ++j)
            if (beams[i].azimuth_deg == beams[j].azimuth_deg &&
                beams[i].zenith_deg == beams[j].zenith_deg)
                throw invalid_input(path + ": duplicate beam direction at entries " +
                                    std::to_string(i) + " and " + std::to_string(j));
    return beams;
}

} // namespace nrgeo
