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

/**
 * @file simcore.hpp
 * @brief Deterministic discrete-event simulation of a frame pipeline.
 *
 * Frames are byte streams. Each stage sees a frame's bytes arrive linearly
 * over an interval and leave linearly over another (see StageTimes):
 *
 *  - Sensor emits a whole frame every round(1e9 / frame_rate) ns, after its
 *    fixed latency.
 *  - Link serializes one frame at a time in ceil(bits / rate) ns; bytes
 *    reach the far end cable_length x 5 ns/m later.
 *  - Buffer / FrameGrabber release a frame after its last byte arrives plus
 *    fixed latency (store-and-forward), or start releasing fixed latency
 *    after the first byte (cut-through). A cut-through stage feeding a faster
 *    link is paced by its input; feeding a slower one, it buffers the
 *    difference.
 *  - HostMemory holds a frame until the processor takes it; unbounded.
 *  - Processor handles one frame at a time for processing_time, and
 *    delivers it fixed_latency later.
 *
 * Buffer occupancy is the sum of per-frame (arrived - departed) bytes, so it
 * is piecewise linear in time. A frame is admitted when its first byte
 * arrives; if the projected occupancy would exceed capacity the drop policy
 * applies. Under DropNewest the incoming frame is discarded at the instant the
 * buffer fills. Under DropOldest resident frames that have not started
 * leaving are evicted first. A stage without memory that cannot take a frame
 * (a sensor whose link is busy, a processor fed straight from a link) drops it
 * with reason Backpressure; upstream is never stalled.
 *
 * Events at the same instant run in insertion order.
 */

#pragma once

#include "camsim/linkmodel.hpp"
#include "camsim/report.hpp"
#include "camsim/topology.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace camsim {

/// ceil(bits / rate) in ns, snapping values within floating-point noise of an
/// integer. Throws InvalidSpec for a non-positive rate.
SimTime serialization_time(std::uint64_t size_bytes, double rate_gbps);

/// Serialization plus cable propagation. Requires size_bytes > 0.
SimTime transmission_time(std::uint64_t size_bytes, const LinkSpec& link);

/// Runs the pipeline. Throws InvalidSpec when validate(t) is non-empty or the
/// configuration is malformed.
SimReport run(const Topology& t, const SimConfig& cfg, std::string scenario = {});

/// (time, bytes) breakpoints of one stage's occupancy; linear between
/// consecutive points, a repeated time marks a jump. Empty for stages that do
/// not hold data and for runs without frames.
using OccupancyTrace = std::vector<std::pair<SimTime, double>>;

/// Recomputes occupancy from frame records. Throws std::out_of_range for an
/// unknown stage index.
OccupancyTrace occupancy_trace(const SimReport& report, std::size_t stage);

OccupancyTrace occupancy_profile(std::span<const FrameRecord> frames, const Topology& t,
                                 std::size_t stage, std::optional<SimTime> horizon);

} // namespace camsim
