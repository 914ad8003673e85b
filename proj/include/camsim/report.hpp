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
#include "camsim/timing.hpp"
#include "camsim/topology.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace camsim {

enum class DropPolicy { DropNewest, DropOldest };

std::string_view to_string(DropPolicy p);
DropPolicy parse_drop_policy(std::string_view s);

/// Exactly one of n_frames / duration must be set.
struct SimConfig {
    std::optional<std::uint64_t> n_frames;
    std::optional<SimTime> duration;
    std::uint64_t seed = 0;
    DropPolicy drop_policy = DropPolicy::DropNewest;
    ClockModel clock;

    static SimConfig frames(std::uint64_t n, std::uint64_t seed) {
        SimConfig c;
        c.n_frames = n;
        c.seed = seed;
        return c;
    }
    static SimConfig for_duration(SimTime d, std::uint64_t seed) {
        SimConfig c;
        c.duration = d;
        c.seed = seed;
        return c;
    }

    bool operator==(const SimConfig&) const = default;
};

void validate_config(const SimConfig& cfg);

struct Aggregates {
    /// No frames at all; every other field is zero.
    bool empty = true;
    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::uint64_t in_flight = 0;
    /// Latest completion (delivery or drop) over all frames.
    std::uint64_t elapsed_ns = 0;
    /// Delivered bits / elapsed time.
    double throughput_gbps = 0.0;
    std::uint64_t latency_min_ns = 0;
    double latency_mean_ns = 0.0;
    std::uint64_t latency_p50_ns = 0;
    std::uint64_t latency_p99_ns = 0;
    std::uint64_t latency_max_ns = 0;
    std::uint64_t copy_count = 0;
    /// One entry per stage; zero for stages that hold no data.
    std::vector<double> high_water_bytes;
    std::optional<std::uint64_t> first_drop_ns;
    double timestamp_rms_ns = 0.0;
    std::vector<DeadlineViolation> violations;

    bool operator==(const Aggregates&) const = default;
};

struct SimReport {
    std::string scenario;
    std::string topology_digest;
    Topology topology;
    SimConfig config;
    std::vector<FrameRecord> frames;
    Aggregates aggregates;

    bool operator==(const SimReport&) const = default;
};

} // namespace camsim
