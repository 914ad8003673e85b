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

#include "camsim/units.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace camsim {

/// Byte-flow timing of one frame through one stage.
///
/// Bytes enter linearly over [first_in, last_in] and leave linearly over
/// [first_out, last_out]; equal endpoints mean an instantaneous transfer.
/// Ingress is the instant the whole frame has entered the stage, egress the
/// instant the last byte has left it.
struct StageTimes {
    SimTime first_in;
    SimTime last_in;
    SimTime first_out;
    SimTime last_out;

    SimTime ingress() const { return last_in; }
    SimTime egress() const { return last_out; }

    bool operator==(const StageTimes&) const = default;
};

enum class Disposition { Delivered, Dropped, InFlight };

enum class DropReason { BufferOverflow, Backpressure };

struct DropInfo {
    std::size_t stage = 0;
    DropReason reason = DropReason::BufferOverflow;
    SimTime at;

    bool operator==(const DropInfo&) const = default;
};

struct FrameRecord {
    std::uint64_t frame_id = 0;
    std::uint64_t size_bytes = 0;
    SimTime generated_at;
    SimTime camera_timestamp;
    /// The jittered timestamp fell below zero and was clamped.
    bool timestamp_clamped = false;
    /// One entry per stage the frame reached. For a dropped frame the last
    /// entry is the dropping stage, holding the schedule it was refused on.
    std::vector<StageTimes> stages;
    Disposition disposition = Disposition::InFlight;
    std::optional<DropInfo> drop;

    /// Processor egress minus sensor egress; delivered frames only.
    std::optional<std::uint64_t> latency_ns() const;

    /// Signed camera timestamp error in ns.
    std::int64_t timestamp_error_ns() const {
        return static_cast<std::int64_t>(camera_timestamp.ns) -
               static_cast<std::int64_t>(generated_at.ns);
    }

    /// Last instant at which this frame's fate is known (0 when in flight).
    SimTime completed_at() const;

    bool operator==(const FrameRecord&) const = default;
};

std::string_view to_string(Disposition d);
std::string_view to_string(DropReason r);
Disposition parse_disposition(std::string_view s);
DropReason parse_drop_reason(std::string_view s);

} // namespace camsim
