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
#include <initializer_list>

#include "math.hpp"

namespace nrgeo {

/// splitmix64 finalizer; full-period 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
    return mix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

/// Hierarchical stream derivation: the root seed plus a label path (drop,
/// link, purpose, ...) identifies one independent stream. Adding new labeled
/// streams never perturbs the draws of existing ones.
inline std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> labels) {
    std::uint64_t h = mix64(root ^ 0x6a09e667f3bcc909ULL);
    for (std::uint64_t v : labels)
        h = hash_combine(h, v);
    return h;
}

// Purpose labels for derive_seed. Distribution algorithms in <random> are
// implementation-defined, so the whole stack draws through this pinned
// generator to keep golden values stable across toolchains.
namespace draw {
inline constexpr std::uint64_t kUsers = 1;    // per-drop user placement
inline constexpr std::uint64_t kLink = 2;     // per (drop, cell, ue) channel draws
inline constexpr std::uint64_t kPosition = 3; // per-sector dropping stream
inline constexpr std::uint64_t kIndoor = 4;   // per-UE indoor/loss/height/depth
inline constexpr std::uint64_t kLos = 5;
inline constexpr std::uint64_t kShadowing = 6;
inline constexpr std::uint64_t kO2iSigma = 7;
inline constexpr std::uint64_t kRemPoint = 8; // per (cell, grid point) draws
} // namespace draw

/// Deterministic stream of uniform/normal variates (splitmix64 core,
/// Box-Muller for normals). Reproducible on every platform.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer on the inclusive range [lo, hi].
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(uniform() * static_cast<double>(hi - lo + 1));
    }

    /// Standard normal draw.
    double normal() {
        double u1 = 1.0 - uniform(); // (0, 1], keeps the log finite
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    double normal(double sigma) { return sigma * normal(); }

  private:
    std::uint64_t state_;
};

} // namespace nrgeo
