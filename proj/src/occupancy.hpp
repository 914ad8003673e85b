/*
 * Copyright 2026 The camsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "camsim/records.hpp"
#include "camsim/simcore.hpp"

#include <optional>
#include <span>

namespace camsim::detail {

/// One frame's contribution to a stage's occupancy: arrived minus departed
/// bytes, forced to zero from `cut` onwards (the frame was dropped).
struct Flow {
    StageTimes times;
    double size = 0.0;
    std::optional<SimTime> cut;
};

/// Right-continuous value at t.
double value_at(const Flow& f, SimTime t);

/// Limit from the left at t.
double left_value(const Flow& f, SimTime t);

/// Latest whole nanosecond >= from at which the summed occupancy still fits,
/// given that it would exceed capacity right after; nullopt if it never does.
std::optional<SimTime> first_overflow(std::span<const Flow> flows, double capacity, SimTime from);

/// Breakpoint series of the summed occupancy, clipped to the horizon.
OccupancyTrace trace(std::span<const Flow> flows, std::optional<SimTime> horizon);

} // namespace camsim::detail
