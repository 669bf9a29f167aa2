// SPDX-License-Identifier: Apache-2.0
//
// nrgeo — drop-based system-level simulator for NR outdoor calibration KPIs
// Copyright (C) 2026 The nrgeo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <nrgeo/nrgeo.hpp>

namespace {

struct CommonArgs {
    std::string preset = "custom";
    std::string config_path;
    std::vector<std::string> sets;
    std::string seed;
    std::string drops;
    std::string rings;
    std::string out_dir = "out";
    int jobs = 1;
    bool no_shadowing = false;
    bool no_o2i = false;
    std::string sign_convention;
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--preset", args.preset, "Scenario preset: ruralA, ruralB, denseUrbanA, custom");
    cmd->add_option("--config", args.config_path, "Flat key=value config file");
    cmd->add_option("--set", args.sets, "Override one config field, key=value (repeatable)");
    cmd->add_option("--seed", args.seed, "Root seed for all randomness");
    cmd->add_option("--drops", args.drops, "Number of independent drops");
    cmd->add_option("--rings", args.rings, "Number of site rings (0..5)");
    cmd->add_option("--out", args.out_dir, "Output directory");
    cmd->add_option("--jobs", args.jobs, "Worker threads (output is identical for any value)");
    cmd->add_flag("--no-shadowing", args.no_shadowing, "Disable shadow fading");
    cmd->add_flag("--no-o2i", args.no_o2i, "Disable O2I penetration losses");
    cmd->add_option("--sign-convention", args.sign_convention,
                    "Coupling-gain sign in outputs: gain (P_rx - P_tx) or loss (P_tx - P_rx)");
}

nrgeo::ScenarioConfig resolve_from_args(const CommonArgs& args) {
    nrgeo::Overrides overrides;
    if (!args.config_path.empty())
        overrides = nrgeo::parse_config_file(args.config_path);
    for (const std::string& s : args.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw nrgeo::config_error("--set expects key=value, got '" + s + "'");
        overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    if (!args.seed.empty())
        overrides.emplace_back("seed", args.seed);
    if (!args.drops.empty())
        overrides.emplace_back("num_drops", args.drops);
    if (!args.rings.empty())
        overrides.emplace_back("num_rings", args.rings);
    if (args.no_shadowing)
        overrides.emplace_back("shadowing", "off");
    if (args.no_o2i)
        overrides.emplace_back("o2i", "off");
    if (!args.sign_convention.empty())
        overrides.emplace_back("coupling_sign", args.sign_convention);

    // A preset named in the config file or --set wins over the flag default.
    nrgeo::Preset preset = nrgeo::preset_from_string(args.preset);
    for (const auto& [key, value] : overrides)
        if (key == "preset")
            preset = nrgeo::preset_from_string(value);
    return nrgeo::resolve(preset, overrides);
}

int cmd_run(const CommonArgs& args) {
    const nrgeo::ScenarioConfig config = resolve_from_args(args);
    const nrgeo::RunResult result = nrgeo::run_drops(config, args.jobs);
    nrgeo::write_run_outputs(result, args.out_dir);
    std::printf("run: preset=%s drops=%d measured_samples=%zu filtered=%ld out=%s\n",
                nrgeo::to_string(config.preset), config.num_drops,
                result.samples.coupling_gain_db.size(), result.samples.filtered_count,
                args.out_dir.c_str());
    return 0;
}

int cmd_rem(const CommonArgs& args, bool pgm, bool force_outdoor_probe) {
    const nrgeo::ScenarioConfig config = resolve_from_args(args);
    if (config.preset == nrgeo::Preset::denseUrbanA && !force_outdoor_probe)
        throw nrgeo::config_error(
            "the denseUrbanA preset has 3D user heights and indoor losses that a 2D map cannot "
            "represent; pass --force-outdoor-probe for an outdoor-probe map");
    const nrgeo::SitePlan plan = nrgeo::build_plan(config);
    const nrgeo::RemGrid grid = nrgeo::rem_grid_of(config, plan);
    const auto points = nrgeo::generate_rem(grid, plan, nrgeo::to_drop_params(config),
                                            nrgeo::rem_options_of(config), args.jobs);
    const std::filesystem::path out(args.out_dir);
    nrgeo::write_rem_csv(out / "rem.csv", points);
    if (pgm)
        nrgeo::write_rem_pgm(out / "rem.pgm", grid, points);
    std::printf("rem: %dx%d points at %.3f m resolution, out=%s\n", grid.nx(), grid.ny(),
                grid.resolution_m, args.out_dir.c_str());
    return 0;
}

int cmd_compare(const std::string& cdf_path, const std::string& ref_path, double ks_threshold) {
    const nrgeo::ReferenceCurve run = nrgeo::load_reference(cdf_path);
    const nrgeo::ReferenceCurve ref = nrgeo::load_reference(ref_path);
    const nrgeo::CompareReport report = nrgeo::compare(run.cdf, ref.cdf);
    std::printf("ks=%.6f\n", report.ks);
    std::printf("delta_median_db=%.6f\n", report.delta_median_db);
    std::printf("delta_p5_db=%.6f\n", report.delta_p5_db);
    std::printf("delta_p95_db=%.6f\n", report.delta_p95_db);
    if (ks_threshold >= 0.0 && report.ks > ks_threshold) {
        std::fprintf(stderr, "ks %.6f exceeds threshold %.6f\n", report.ks, ks_threshold);
        return 1;
    }
    return 0;
}

int cmd_presets() {
    for (const nrgeo::Preset p :
         {nrgeo::Preset::ruralA, nrgeo::Preset::ruralB, nrgeo::Preset::denseUrbanA}) {
        std::printf("[%s]\n", nrgeo::to_string(p));
        const nrgeo::ScenarioConfig c = nrgeo::resolve(p);
        for (const auto& [key, value] : nrgeo::to_key_values(c))
            std::printf("%s=%s\n", key.c_str(), value.c_str());
        std::printf("\n");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nrgeo — drop-based NR outdoor deployment simulator: coupling-gain and "
                 "downlink-geometry CDFs, radio environment maps, reference comparison"};
    app.require_subcommand(1);

    CommonArgs run_args;
    CLI::App* run = app.add_subcommand("run", "Run drops and write KPI and CDF files");
    add_common_options(run, run_args);

    CommonArgs rem_args;
    bool rem_pgm = false;
    bool rem_force = false;
    CLI::App* rem = app.add_subcommand("rem", "Generate a radio environment map");
    add_common_options(rem, rem_args);
    rem->add_flag("--pgm", rem_pgm, "Also write a grayscale rem.pgm heatmap");
    rem->add_flag("--force-outdoor-probe", rem_force,
                  "Allow an outdoor-probe map for the denseUrbanA preset");

    std::string cmp_cdf, cmp_ref;
    double ks_threshold = -1.0;
    CLI::App* cmp = app.add_subcommand("compare", "Compare a run CDF against a reference CDF");
    cmp->add_option("--cdf", cmp_cdf, "Run CDF csv (value_db,cum_prob)")->required();
    cmp->add_option("--ref", cmp_ref, "Reference CDF csv (value_db,cum_prob)")->required();
    cmp->add_option("--ks-threshold", ks_threshold,
                    "Exit nonzero when the KS distance exceeds this value");

    CLI::App* presets = app.add_subcommand("presets", "List the calibrated preset parameters");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    }

    try {
        if (run->parsed())
            return cmd_run(run_args);
        if (rem->parsed())
            return cmd_rem(rem_args, rem_pgm, rem_force);
        if (cmp->parsed())
            return cmd_compare(cmp_cdf, cmp_ref, ks_threshold);
        if (presets->parsed())
            return cmd_presets();
    } catch (const nrgeo::error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
