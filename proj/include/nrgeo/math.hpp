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

#include <cmath>

namespace nrgeo {

inline constexpr double kPi = 3.14159265358979323846;

// Propagation constant used by the breakpoint-distance formulas (the model
// tables fix c = 3e8 m/s, not the exact physical value).
inline constexpr double kSpeedOfLight = 3.0e8;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Wraps an angle in degrees into (-180, 180].
inline double wrap_deg_pm180(double deg) {
    double a = std::fmod(deg + 180.0, 360.0);
    if (a <= 0.0)
        a += 360.0;
    return a - 180.0;
}

inline double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }
inline double lin_to_db(double lin) { return 10.0 * std::log10(lin); }

} // namespace nrgeo
