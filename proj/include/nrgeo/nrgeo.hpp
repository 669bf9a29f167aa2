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

#include "antenna.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "linkbudget.hpp"
#include "math.hpp"
#include "propagation.hpp"
#include "rem.hpp"
#include "rng.hpp"
#include "scenario.hpp"
#include "topology.hpp"
