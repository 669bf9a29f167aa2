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

#include <stdexcept>
#include <string>

namespace nrgeo {

/// Base class for every error thrown by the library.
class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid or out-of-range configuration value; the message names the field.
class config_error : public error {
  public:
    using error::error;
};

/// Geometry outside the validity range of a propagation model; the message
/// carries the violated bound.
class model_domain_error : public error {
  public:
    using error::error;
};

/// Malformed input file; the message carries the offending line number.
class parse_error : public error {
  public:
    using error::error;
};

/// Argument violating an operation precondition (unknown site, empty sample
/// set, unsupported ring count, ...).
class invalid_input : public error {
  public:
    using error::error;
};

} // namespace nrgeo
