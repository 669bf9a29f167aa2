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
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "io.hpp"
#include "linkbudget.hpp"
#include "propagation.hpp"
#include "rem.hpp"
#include "topology.hpp"

namespace nrgeo {

inline constexpr const char* kVersion = "0.1.0";

enum class Preset { ruralA, ruralB, denseUrbanA, custom };
enum class CouplingSign { gain, loss };

inline const char* to_string(Preset p) {
    switch (p) {
    case Preset::ruralA:
        return "ruralA";
    case Preset::ruralB:
        return "ruralB";
    case Preset::denseUrbanA:
        return "denseUrbanA";
    case Preset::custom:
        return "custom";
    }
    return "custom";
}

namespace detail {
inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}
} // namespace detail

inline Preset preset_from_string(const std::string& name) {
    const std::string n = detail::lower(name);
    if (n == "rurala")
        return Preset::ruralA;
    if (n == "ruralb")
        return Preset::ruralB;
    if (n == "denseurbana")
        return Preset::denseUrbanA;
    if (n == "custom")
        return Preset::custom;
    throw config_error("unknown preset: " + name);
}

/// Fully resolved parameter set of one run. Config files and --set overrides
/// address fields by these exact names.
struct ScenarioConfig {
    Preset preset = Preset::custom;
    double carrier_ghz = 0.0;
    double bandwidth_hz = 0.0;
    ScenarioKind propagation = ScenarioKind::rma;
    double isd_m = 0.0;
    int num_rings = 5;
    double bs_height_m = 0.0;
    double bs_power_dbm = 0.0;
    double ue_power_dbm = 23.0; // carried for completeness; downlink KPIs ignore it
    int per_sector_ues = 10;
    double indoor_fraction = 0.0;
    double loss_high_fraction = 0.0;
    HeightMode height_mode = HeightMode::fixed_1p5;
    std::string bs_array = "1x1";
    double bs_downtilt_deg = 90.0;
    std::string ue_array = "1x1";
    std::string beam_set = "none"; // none | default | <path>
    double noise_figure_bs_db = 5.0;
    double noise_figure_ue_db = 7.0;
    double interference_cutoff_multiple = 2.0; // 0 disables
    double sinr_floor_db = -6.0;
    std::uint64_t seed = 1;
    int num_drops = 20;
    bool shadowing = true;
    bool o2i = true;
    bool beamforming = true;
    LosMode los_mode = LosMode::random;
    CouplingSign coupling_sign = CouplingSign::gain;
    double avg_building_height_m = 5.0;
    double avg_street_width_m = 20.0;
    double max_indoor_depth_m = 0.0; // 0: auto (10 m rural, 25 m urban)
    double rem_resolution_m = 0.0;   // 0: auto (isd/200)
    double rem_padding_m = -1.0;     // <0: auto (isd/2)
    double rem_z_m = 1.5;
    bool rem_shadowing = false;

    /// Which source set each field: "preset", "default" or "override".
    std::map<std::string, std::string> provenance;
};

// ---------------------------------------------------------------------------
// Field access by name
// ---------------------------------------------------------------------------

namespace detail {

inline double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw config_error("field " + key + ": not a number: '" + value + "'");
    }
}

inline int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw config_error("field " + key + ": not an integer: '" + value + "'");
    }
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw config_error("field " + key + ": not an unsigned integer: '" + value + "'");
    }
}

inline bool parse_bool(const std::string& key, const std::string& value) {
    const std::string v = lower(value);
    if (v == "on" || v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "off" || v == "false" || v == "0" || v == "no")
        return false;
    throw config_error("field " + key + ": not a boolean: '" + value + "'");
}

inline std::pair<int, int> parse_array_spec(const std::string& key, const std::string& value) {
    const auto x = value.find('x');
    if (x == std::string::npos)
        throw config_error("field " + key + ": expected ROWSxCOLS, got '" + value + "'");
    const int rows = parse_int(key, value.substr(0, x));
    const int cols = parse_int(key, value.substr(x + 1));
    if (rows < 1 || cols < 1)
        throw config_error("field " + key + ": element counts must be >= 1");
    return {rows, cols};
}

} // namespace detail

/// Assigns one field by name; unknown names and out-of-range values raise a
/// config_error naming the field.
inline void set_field(ScenarioConfig& c, const std::string& key, const std::string& value) {
    using detail::parse_bool;
    using detail::parse_double;
    using detail::parse_int;
    using detail::parse_u64;
    const auto in_unit = [&](double v) {
        if (v < 0.0 || v > 1.0)
            throw config_error("field " + key + ": must be in [0, 1]");
        return v;
    };
    if (key == "preset") {
        c.preset = preset_from_string(value);
    } else if (key == "carrier_ghz") {
        const double v = parse_double(key, value);
        if (v < 0.5 || v > 100.0)
            throw config_error("field carrier_ghz: outside the model range [0.5, 100] GHz");
        c.carrier_ghz = v;
    } else if (key == "bandwidth_hz") {
        const double v = parse_double(key, value);
        if (v <= 0.0)
            throw config_error("field bandwidth_hz: must be positive");
        c.bandwidth_hz = v;
    } else if (key == "propagation") {
        const std::string v = detail::lower(value);
        if (v == "rma")
            c.propagation = ScenarioKind::rma;
        else if (v == "uma")
            c.propagation = ScenarioKind::uma;
        else
            throw config_error("field propagation: expected rma or uma, got '" + value + "'");
    } else if (key == "isd_m") {
        const double v = parse_double(key, value);
        if (v <= 0.0)
            throw config_error("field isd_m: must be positive");
        c.isd_m = v;
    } else if (key == "num_rings") {
        const int v = parse_int(key, value);
        if (v < 0 || v > kMaxRings)
            throw config_error("field num_rings: supported range is 0.." + std::to_string(kMaxRings));
        c.num_rings = v;
    } else if (key == "bs_height_m") {
        const double v = parse_double(key, value);
        if (v <= 0.0)
            throw config_error("field bs_height_m: must be positive");
        c.bs_height_m = v;
    } else if (key == "bs_power_dbm") {
        c.bs_power_dbm = parse_double(key, value);
    } else if (key == "ue_power_dbm") {
        c.ue_power_dbm = parse_double(key, value);
    } else if (key == "per_sector_ues") {
        const int v = parse_int(key, value);
        if (v < 1)
            throw config_error("field per_sector_ues: must be >= 1");
        c.per_sector_ues = v;
    } else if (key == "indoor_fraction") {
        c.indoor_fraction = in_unit(parse_double(key, value));
    } else if (key == "loss_high_fraction") {
        c.loss_high_fraction = in_unit(parse_double(key, value));
    } else if (key == "height_mode") {
        const std::string v = detail::lower(value);
        if (v == "fixed_1p5")
            c.height_mode = HeightMode::fixed_1p5;
        else if (v == "random_3d")
            c.height_mode = HeightMode::random_3d;
        else
            throw config_error("field height_mode: expected fixed_1p5 or random_3d");
    } else if (key == "bs_array") {
        detail::parse_array_spec(key, value); // validate now, materialized later
        c.bs_array = value;
    } else if (key == "bs_downtilt_deg") {
        c.bs_downtilt_deg = parse_double(key, value);
    } else if (key == "ue_array") {
        detail::parse_array_spec(key, value);
        c.ue_array = value;
    } else if (key == "beam_set") {
        c.beam_set = value;
    } else if (key == "noise_figure_bs_db") {
        c.noise_figure_bs_db = parse_double(key, value);
    } else if (key == "noise_figure_ue_db") {
        c.noise_figure_ue_db = parse_double(key, value);
    } else if (key == "interference_cutoff_multiple") {
        const double v = parse_double(key, value);
        if (v < 0.0)
            throw config_error("field interference_cutoff_multiple: must be >= 0 (0 disables)");
        c.interference_cutoff_multiple = v;
    } else if (key == "sinr_floor_db") {
        c.sinr_floor_db = parse_double(key, value);
    } else if (key == "seed") {
        c.seed = parse_u64(key, value);
    } else if (key == "num_drops") {
        const int v = parse_int(key, value);
        if (v < 1)
            throw config_error("field num_drops: must be >= 1");
        c.num_drops = v;
    } else if (key == "shadowing") {
        c.shadowing = parse_bool(key, value);
    } else if (key == "o2i") {
        c.o2i = parse_bool(key, value);
    } else if (key == "beamforming") {
        c.beamforming = parse_bool(key, value);
    } else if (key == "los_mode") {
        const std::string v = detail::lower(value);
        if (v == "random")
            c.los_mode = LosMode::random;
        else if (v == "always_los")
            c.los_mode = LosMode::always_los;
        else if (v == "always_nlos")
            c.los_mode = LosMode::always_nlos;
        else
            throw config_error("field los_mode: expected random, always_los or always_nlos");
    } else if (key == "coupling_sign") {
        const std::string v = detail::lower(value);
        if (v == "gain")
            c.coupling_sign = CouplingSign::gain;
        else if (v == "loss")
            c.coupling_sign = CouplingSign::loss;
        else
            throw config_error("field coupling_sign: expected gain or loss");
    } else if (key == "avg_building_height_m") {
        const double v = parse_double(key, value);
        if (v <= 0.0)
            throw config_error("field avg_building_height_m: must be positive");
        c.avg_building_height_m = v;
    } else if (key == "avg_street_width_m") {
        const double v = parse_double(key, value);
        if (v <= 0.0)
            throw config_error("field avg_street_width_m: must be positive");
        c.avg_street_width_m = v;
    } else if (key == "max_indoor_depth_m") {
        const double v = parse_double(key, value);
        if (v < 0.0)
            throw config_error("field max_indoor_depth_m: must be >= 0 (0 selects the default)");
        c.max_indoor_depth_m = v;
    } else if (key == "rem_resolution_m") {
        const double v = parse_double(key, value);
        if (v < 0.0)
            throw config_error("field rem_resolution_m: must be >= 0 (0 selects the default)");
        c.rem_resolution_m = v;
    } else if (key == "rem_padding_m") {
        c.rem_padding_m = parse_double(key, value);
    } else if (key == "rem_z_m") {
        const double v = parse_double(key, value);
        if (v <= 0.0)
            throw config_error("field rem_z_m: must be positive");
        c.rem_z_m = v;
    } else if (key == "rem_shadowing") {
        c.rem_shadowing = parse_bool(key, value);
    } else {
        throw config_error("unknown config field: " + key);
    }
}

/// Canonical (key, value) listing of a config, usable as a config file.
inline std::vector<std::pair<std::string, std::string>> to_key_values(const ScenarioConfig& c) {
    const auto num = [](double v) { return strf("%.10g", v); };
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("preset", to_string(c.preset));
    kv.emplace_back("carrier_ghz", num(c.carrier_ghz));
    kv.emplace_back("bandwidth_hz", num(c.bandwidth_hz));
    kv.emplace_back("propagation", c.propagation == ScenarioKind::rma ? "rma" : "uma");
    kv.emplace_back("isd_m", num(c.isd_m));
    kv.emplace_back("num_rings", std::to_string(c.num_rings));
    kv.emplace_back("bs_height_m", num(c.bs_height_m));
    kv.emplace_back("bs_power_dbm", num(c.bs_power_dbm));
    kv.emplace_back("ue_power_dbm", num(c.ue_power_dbm));
    kv.emplace_back("per_sector_ues", std::to_string(c.per_sector_ues));
    kv.emplace_back("indoor_fraction", num(c.indoor_fraction));
    kv.emplace_back("loss_high_fraction", num(c.loss_high_fraction));
    kv.emplace_back("height_mode",
                    c.height_mode == HeightMode::fixed_1p5 ? "fixed_1p5" : "random_3d");
    kv.emplace_back("bs_array", c.bs_array);
    kv.emplace_back("bs_downtilt_deg", num(c.bs_downtilt_deg));
    kv.emplace_back("ue_array", c.ue_array);
    kv.emplace_back("beam_set", c.beam_set);
    kv.emplace_back("noise_figure_bs_db", num(c.noise_figure_bs_db));
    kv.emplace_back("noise_figure_ue_db", num(c.noise_figure_ue_db));
    kv.emplace_back("interference_cutoff_multiple", num(c.interference_cutoff_multiple));
    kv.emplace_back("sinr_floor_db", num(c.sinr_floor_db));
    kv.emplace_back("seed", strf("%llu", static_cast<unsigned long long>(c.seed)));
    kv.emplace_back("num_drops", std::to_string(c.num_drops));
    kv.emplace_back("shadowing", c.shadowing ? "on" : "off");
    kv.emplace_back("o2i", c.o2i ? "on" : "off");
    kv.emplace_back("beamforming", c.beamforming ? "on" : "off");
    kv.emplace_back("los_mode", c.los_mode == LosMode::random
                                    ? "random"
                                    : (c.los_mode == LosMode::always_los ? "always_los"
                                                                         : "always_nlos"));
    kv.emplace_back("coupling_sign", c.coupling_sign == CouplingSign::gain ? "gain" : "loss");
    kv.emplace_back("avg_building_height_m", num(c.avg_building_height_m));
    kv.emplace_back("avg_street_width_m", num(c.avg_street_width_m));
    kv.emplace_back("max_indoor_depth_m", num(c.max_indoor_depth_m));
    kv.emplace_back("rem_resolution_m", num(c.rem_resolution_m));
    kv.emplace_back("rem_padding_m", num(c.rem_padding_m));
    kv.emplace_back("rem_z_m", num(c.rem_z_m));
    kv.emplace_back("rem_shadowing", c.rem_shadowing ? "on" : "off");
    return kv;
}

// ---------------------------------------------------------------------------
// Presets and resolution
// ---------------------------------------------------------------------------

namespace detail {

inline ScenarioConfig preset_defaults(Preset p) {
    ScenarioConfig c;
    c.preset = p;
    switch (p) {
    case Preset::ruralA:
    case Preset::ruralB:
        c.carrier_ghz = p == Preset::ruralA ? 0.7 : 4.0;
        c.bandwidth_hz = 10e6;
        c.propagation = ScenarioKind::rma;
        c.isd_m = 1732.0;
        c.bs_height_m = 35.0;
        c.bs_power_dbm = 46.0;
        c.indoor_fraction = 0.5;
        c.loss_high_fraction = 0.0;
        c.height_mode = HeightMode::fixed_1p5;
        c.bs_array = "8x1";
        c.beam_set = "none";
        break;
    case Preset::denseUrbanA:
        c.carrier_ghz = 4.0;
        c.bandwidth_hz = 10e6;
        c.propagation = ScenarioKind::uma;
        c.isd_m = 200.0;
        c.bs_height_m = 25.0;
        c.bs_power_dbm = 41.0;
        c.indoor_fraction = 0.8;
        c.loss_high_fraction = 0.2;
        c.height_mode = HeightMode::random_3d;
        c.bs_array = "4x8";
        c.beam_set = "default";
        break;
    case Preset::custom:
        break;
    }
    return c;
}

inline const std::vector<std::string>& mandatory_custom_fields() {
    static const std::vector<std::string> fields{"carrier_ghz", "bandwidth_hz", "propagation",
                                                 "isd_m",       "bs_height_m",  "bs_power_dbm"};
    return fields;
}

} // namespace detail

using Overrides = std::vector<std::pair<std::string, std::string>>;

/// Builds a fully populated config: preset values first, then the overrides
/// in order. For the custom preset every mandatory field must be overridden;
/// the error lists all missing ones at once.
inline ScenarioConfig resolve(Preset preset, const Overrides& overrides = {}) {
    ScenarioConfig c = detail::preset_defaults(preset);
    const bool from_preset = preset != Preset::custom;
    for (const auto& [key, value] : to_key_values(c))
        c.provenance[key] = from_preset ? "preset" : "default";

    std::set<std::string> assigned;
    for (const auto& [key, value] : overrides) {
        set_field(c, key, value);
        c.provenance[key] = "override";
        assigned.insert(key);
    }
    if (c.preset == Preset::custom) {
        std::string missing;
        for (const std::string& f : detail::mandatory_custom_fields())
            if (!assigned.count(f))
                missing += missing.empty() ? f : (", " + f);
        if (!missing.empty())
            throw config_error("custom preset: mandatory fields not set: " + missing);
    }
    validate(PropagationScenario{c.propagation, c.carrier_ghz, c.avg_building_height_m,
                                 c.avg_street_width_m});
    return c;
}

/// Parses a flat key=value config file ('#' comments, blank lines allowed).
inline Overrides parse_config_file(const std::filesystem::path& path) {
    Overrides out;
    const auto lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string line = lines[i];
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw parse_error(path.string() + ": line " + std::to_string(i + 1) +
                              ": expected key=value");
        out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Materialization
// ---------------------------------------------------------------------------

inline ArrayDescriptor bs_array_of(const ScenarioConfig& c) {
    const auto [rows, cols] = detail::parse_array_spec("bs_array", c.bs_array);
    ArrayDescriptor a;
    a.rows = rows;
    a.cols = cols;
    a.element = ElementPattern::threegpp;
    a.element_max_gain_dbi = 8.0;
    a.dh_lambda = 0.5;
    a.dv_lambda = 0.8;
    a.downtilt_deg = c.bs_downtilt_deg;
    return a;
}

inline ArrayDescriptor ue_array_of(const ScenarioConfig& c) {
    const auto [rows, cols] = detail::parse_array_spec("ue_array", c.ue_array);
    ArrayDescriptor a;
    a.rows = rows;
    a.cols = cols;
    a.element = ElementPattern::isotropic;
    a.element_max_gain_dbi = 0.0;
    return a;
}

inline std::vector<Beam> beam_set_of(const ScenarioConfig& c) {
    const std::string v = detail::lower(c.beam_set);
    if (v == "none" || v.empty())
        return {};
    if (v == "default")
        return default_beam_search_set();
    return load_beam_set(c.beam_set);
}

inline double resolved_indoor_depth_m(const ScenarioConfig& c) {
    if (c.max_indoor_depth_m > 0.0)
        return c.max_indoor_depth_m;
    return c.propagation == ScenarioKind::rma ? 10.0 : 25.0;
}

inline DropParams to_drop_params(const ScenarioConfig& c) {
    DropParams p;
    p.propagation = {c.propagation, c.carrier_ghz, c.avg_building_height_m, c.avg_street_width_m};
    p.bandwidth_hz = c.bandwidth_hz;
    p.noise_figure_ue_db = c.noise_figure_ue_db;
    p.per_sector_ues = c.per_sector_ues;
    p.indoor = {c.indoor_fraction, c.loss_high_fraction, c.height_mode,
                resolved_indoor_depth_m(c)};
    p.link = {c.shadowing, c.o2i, c.los_mode};
    p.beamforming = c.beamforming;
    p.beam_set = beam_set_of(c);
    p.interference_cutoff_multiple = c.interference_cutoff_multiple;
    p.sinr_floor_db = c.sinr_floor_db;
    p.ue_array = ue_array_of(c);
    return p;
}

inline SitePlan build_plan(const ScenarioConfig& c) {
    if (c.isd_m <= 0.0)
        throw config_error("field isd_m: must be set and positive");
    CellParams params{c.bs_power_dbm, c.bs_height_m, bs_array_of(c)};
    return build_hex_layout(c.isd_m, c.num_rings, params);
}

inline RemGrid rem_grid_of(const ScenarioConfig& c, const SitePlan& plan) {
    return default_rem_grid(plan, c.rem_resolution_m, c.rem_padding_m, c.rem_z_m);
}

inline RemOptions rem_options_of(const ScenarioConfig& c) {
    return RemOptions{c.seed, c.rem_shadowing, c.los_mode};
}

// ---------------------------------------------------------------------------
// Run orchestration
// ---------------------------------------------------------------------------

struct KpiRow {
    int drop = 0;
    int ue_id = 0;
    int serving_cell = 0;
    double coupling_gain_db = 0.0;
    double sinr_db = 0.0;
    bool indoor = false;
    bool filtered = false;
};

struct RunResult {
    ScenarioConfig config;
    KpiSampleSet samples;
    std::vector<KpiRow> rows; // measured-attached UEs, ordered (drop, ue)
    std::vector<long> measured_per_drop;
};

/// Executes num_drops independent drops over a shared plan. Drops may run
/// concurrently; aggregation is always in drop order, so the output does not
/// depend on the worker count.
inline RunResult run_drops(const ScenarioConfig& config, int jobs = 1) {
    const SitePlan plan = build_plan(config);
    const DropParams params = to_drop_params(config);

    std::vector<DropResult> drops(static_cast<std::size_t>(config.num_drops));
    std::atomic<int> next{0};
    const auto worker = [&] {
        for (;;) {
            const int d = next.fetch_add(1);
            if (d >= config.num_drops)
                return;
            drops[static_cast<std::size_t>(d)] = evaluate_drop(plan, params, config.seed, d);
        }
    };
    const int workers = std::max(1, std::min(jobs, config.num_drops));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int t = 0; t < workers; ++t)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }

    RunResult res;
    res.config = config;
    res.samples.scenario_tag = to_string(config.preset);
    for (const DropResult& drop : drops) {
        long measured = 0;
        for (std::size_t u = 0; u < drop.ues.size(); ++u) {
            if (!drop.attached_measured[u])
                continue;
            ++measured;
            res.rows.push_back({drop.drop_index, drop.ues[u].ue_id, drop.ues[u].serving_cell,
                                drop.coupling_gain_db[u], drop.sinr_db[u], drop.ues[u].indoor,
                                drop.filtered[u] != 0});
        }
        res.measured_per_drop.push_back(measured);
        accumulate(res.samples, drop);
    }
    return res;
}

// ---------------------------------------------------------------------------
// Output files
// ---------------------------------------------------------------------------

inline double apply_sign(CouplingSign sign, double gain_db) {
    return sign == CouplingSign::gain ? gain_db : -gain_db;
}

inline void write_cdf_csv(const std::filesystem::path& path, const Cdf& cdf) {
    std::ofstream out = open_output(path);
    out << "value_db,cum_prob\n";
    for (std::size_t i = 0; i < cdf.size(); ++i)
        out << strf("%.6f,%.9g\n", cdf.values[i], cdf.probs[i]);
}

inline void write_kpi_csv(const std::filesystem::path& path, const RunResult& res) {
    std::ofstream out = open_output(path);
    out << "ue_id,drop,serving_cell,coupling_gain_db,sinr_db\n";
    for (const KpiRow& r : res.rows)
        out << strf("%d,%d,%d,%.6f,%.6f\n", r.ue_id, r.drop, r.serving_cell,
                    apply_sign(res.config.coupling_sign, r.coupling_gain_db), r.sinr_db);
}

/// Writes the run manifest: every config field as loadable key=value plus
/// metadata comments, so the run can be reproduced with --config manifest.txt.
inline void write_manifest(const std::filesystem::path& path, const ScenarioConfig& config,
                           long measured_samples, long filtered_samples) {
    std::ofstream out = open_output(path);
    out << "# nrgeo run manifest (loadable as --config)\n";
    out << "# version=" << kVersion << "\n";
    out << strf("# measured_samples=%ld\n", measured_samples);
    out << strf("# filtered_samples=%ld\n", filtered_samples);
    for (const auto& [key, value] : to_key_values(config))
        out << key << "=" << value << "\n";
    out << "# provenance:";
    for (const auto& [key, value] : to_key_values(config)) {
        const auto it = config.provenance.find(key);
        if (it != config.provenance.end() && it->second == "override")
            out << " " << key << "=override";
    }
    out << "\n";
}

/// kpi.csv, coupling_cdf.csv, sinr_cdf.csv and manifest.txt under out_dir.
inline void write_run_outputs(const RunResult& res, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_kpi_csv(out_dir / "kpi.csv", res);

    std::vector<double> coupling;
    coupling.reserve(res.samples.coupling_gain_db.size());
    for (double g : res.samples.coupling_gain_db)
        coupling.push_back(apply_sign(res.config.coupling_sign, g));
    if (!coupling.empty())
        write_cdf_csv(out_dir / "coupling_cdf.csv", make_cdf(std::move(coupling)));
    else
        open_output(out_dir / "coupling_cdf.csv") << "value_db,cum_prob\n";

    if (!res.samples.geometry_sinr_db.empty())
        write_cdf_csv(out_dir / "sinr_cdf.csv", make_cdf(res.samples.geometry_sinr_db));
    else
        open_output(out_dir / "sinr_cdf.csv") << "value_db,cum_prob\n";

    write_manifest(out_dir / "manifest.txt", res.config,
                   static_cast<long>(res.samples.coupling_gain_db.size()),
                   res.samples.filtered_count);
}

// ---------------------------------------------------------------------------
// Reference curves and comparison
// ---------------------------------------------------------------------------

struct ReferenceCurve {
    std::string label;
    Cdf cdf;
};

/// Loads a CDF curve from CSV (header value_db,cum_prob). Malformed rows
/// carry their line number; non-monotone probabilities are rejected.
inline ReferenceCurve load_reference(const std::filesystem::path& path) {
    ReferenceCurve curve;
    curve.label = path.stem().string();
    const auto lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string line = trim(lines[i]);
        if (line.empty() || line[0] == '#')
            continue;
        if (i == 0 && line.find("value_db") != std::string::npos)
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw parse_error(path.string() + ": line " + std::to_string(i + 1) +
                              ": expected value_db,cum_prob");
        double value = 0.0, prob = 0.0;
        try {
            std::size_t pos = 0;
            value = std::stod(trim(line.substr(0, comma)), &pos);
            prob = std::stod(trim(line.substr(comma + 1)), &pos);
        } catch (const std::exception&) {
            throw parse_error(path.string() + ": line " + std::to_string(i + 1) +
                              ": malformed number");
        }
        curve.cdf.values.push_back(value);
        curve.cdf.probs.push_back(prob);
    }
    if (curve.cdf.values.empty())
        throw invalid_input(path.string() + ": no samples");
    for (std::size_t i = 0; i < curve.cdf.probs.size(); ++i) {
        const double p = curve.cdf.probs[i];
        if (p <= 0.0 || p > 1.0)
            throw invalid_input(path.string() + ": cum_prob outside (0, 1] at row " +
                                std::to_string(i + 1));
        if (i > 0 && p <= curve.cdf.probs[i - 1])
            throw invalid_input(path.string() + ": cum_prob not strictly increasing at row " +
                                std::to_string(i + 1));
        if (i > 0 && curve.cdf.values[i] < curve.cdf.values[i - 1])
            throw invalid_input(path.string() + ": values not non-decreasing at row " +
                                std::to_string(i + 1));
    }
    return curve;
}

struct CompareReport {
    double ks = 0.0;
    double delta_median_db = 0.0; // reference minus run, at the 50th percentile
    double delta_p5_db = 0.0;
    double delta_p95_db = 0.0;
};

inline CompareReport compare(const Cdf& run, const Cdf& reference) {
    CompareReport r;
    r.ks = ks_distance(run, reference);
    r.delta_median_db = percentile(reference, 0.5) - percentile(run, 0.5);
    r.delta_p5_db = percentile(reference, 0.05) - percentile(run, 0.05);
    r.delta_p95_db = percentile(reference, 0.95) - percentile(run, 0.95);
    return r;
}

} // namespace nrgeo
