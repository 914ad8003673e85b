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
 * @file topology.hpp
 * @brief Acquisition pipelines as ordered stage chains.
 *
 * Two canonical shapes are provided:
 *
 * @code{.unparsed}
 *   classic:  Sensor -> Buffer(camera FPGA) -> Link(CI) -> FrameGrabber
 *                    -> Link(PCIe) -> HostMemory -> Processor
 *
 *   direct:   Sensor -> Buffer(camera FPGA) -> Link(PCIe) -> HostMemory
 *                    -> Processor
 * @endcode
 *
 * Arbitrary chains can be assembled by hand and checked with validate().
 */

#pragma once

#include "camsim/linkmodel.hpp"
#include "camsim/timing.hpp"
#include "camsim/units.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace camsim {

enum class StageKind { Sensor, Buffer, Link, FrameGrabber, HostMemory, Processor };

enum class Forwarding { StoreAndForward, CutThrough };

std::string_view to_string(StageKind k);
std::string_view to_string(Forwarding f);
StageKind parse_stage_kind(std::string_view s);
Forwarding parse_forwarding(std::string_view s);

/// Per-frame processing time: fixed, or drawn from a seeded distribution.
struct ProcessingTime {
    enum class Kind { Fixed, Uniform, Normal };

    Kind kind = Kind::Fixed;
    std::uint64_t fixed_ns = 0;
    /// Uniform bounds, inclusive.
    std::uint64_t min_ns = 0;
    std::uint64_t max_ns = 0;
    /// Normal parameters; draws are truncated at zero.
    double mean_ns = 0.0;
    double sigma_ns = 0.0;

    static ProcessingTime fixed(std::uint64_t ns);
    static ProcessingTime uniform(std::uint64_t lo, std::uint64_t hi);
    static ProcessingTime normal(double mean, double sigma);

    bool is_random() const { return kind != Kind::Fixed; }
    SimTime draw(NoiseStream& noise) const;

    bool operator==(const ProcessingTime&) const = default;
};

std::string_view to_string(ProcessingTime::Kind k);
ProcessingTime::Kind parse_processing_kind(std::string_view s);

struct StageSpec {
    StageKind kind = StageKind::Sensor;
    std::string label;
    /// Buffer and FrameGrabber only.
    std::uint64_t capacity_bytes = 0;
    /// Buffer and FrameGrabber only. For cut-through stages fixed_latency is
    /// the cut-through latency.
    Forwarding forwarding = Forwarding::StoreAndForward;
    /// Link only.
    std::optional<LinkSpec> link;
    /// Processor only.
    ProcessingTime processing;
    std::uint64_t fixed_latency_ns = 0;

    static StageSpec sensor(std::uint64_t latency_ns = 0);
    static StageSpec buffer(std::uint64_t capacity, Forwarding fwd, std::uint64_t latency_ns = 0,
                            std::string label = "buffer");
    static StageSpec link_stage(LinkSpec link, std::string label = "link");
    static StageSpec frame_grabber(std::uint64_t capacity, std::uint64_t latency_ns = 0);
    static StageSpec host_memory(std::uint64_t latency_ns = 0);
    static StageSpec processor(ProcessingTime processing, std::uint64_t latency_ns = 0);

    /// Materializes a full frame in a memory (counted by copy_count).
    bool is_memory() const {
        return kind == StageKind::Buffer || kind == StageKind::FrameGrabber ||
               kind == StageKind::HostMemory;
    }
    /// Finite-capacity memory; admission can overflow.
    bool has_capacity() const {
        return kind == StageKind::Buffer || kind == StageKind::FrameGrabber;
    }
    /// May feed a LinkStage.
    bool can_emit() const {
        return kind == StageKind::Sensor || kind == StageKind::Buffer ||
               kind == StageKind::FrameGrabber;
    }

    bool operator==(const StageSpec&) const = default;
};

struct Topology {
    std::string name;
    std::vector<StageSpec> stages;
    CameraSpec camera;
    DeadlineSpec deadlines;

    bool operator==(const Topology&) const = default;
};

struct TopologyViolation {
    std::size_t stage = 0;
    std::string rule;
    std::string detail;
};

// Rule names reported by validate().
namespace rules {
inline constexpr std::string_view kFirstIsSensor = "first stage is Sensor";
inline constexpr std::string_view kLastIsProcessor = "last stage is Processor";
inline constexpr std::string_view kHasLink = "at least one LinkStage present";
inline constexpr std::string_view kLinkFedByEmitter =
    "LinkStage preceded by Sensor, BufferStage, or FrameGrabber";
inline constexpr std::string_view kSingleSensor = "Sensor only as first stage";
inline constexpr std::string_view kSingleProcessor = "Processor only as last stage";
inline constexpr std::string_view kCapacity = "capacity > 0 for buffering stages";
inline constexpr std::string_view kGrabberStoreAndForward = "FrameGrabber is StoreAndForward";
inline constexpr std::string_view kLinkSpec = "LinkStage carries a valid LinkSpec";
inline constexpr std::string_view kProcessing = "processing time well-formed";
inline constexpr std::string_view kCamera = "camera spec valid";
inline constexpr std::string_view kDeadlines = "deadlines strictly positive";
} // namespace rules

/// Empty iff every topology invariant holds.
std::vector<TopologyViolation> validate(const Topology& t);

/// Non-default knobs shared by the two canonical builders.
struct ArchitectureOptions {
    std::uint64_t camera_buffer_capacity = 256 * MiB;
    /// Defaults: StoreAndForward for classic, CutThrough for direct.
    std::optional<Forwarding> camera_buffer_forwarding;
    std::uint64_t camera_buffer_latency_ns = 0;
    std::uint64_t grabber_latency_ns = 0;
    std::uint64_t host_latency_ns = 0;
    std::uint64_t sensor_latency_ns = 0;
    ProcessingTime processing;
    std::uint64_t processor_latency_ns = 0;
    DeadlineSpec deadlines;
};

/// Throws InvalidSpec when the result would not validate.
Topology build_classic(const CameraSpec& cam, const LinkSpec& ci, const LinkSpec& pcie,
                       std::uint64_t grabber_capacity, const ArchitectureOptions& opts = {});

/// Throws InvalidSpec when the result would not validate.
Topology build_direct(const CameraSpec& cam, const LinkSpec& pcie,
                      const ArchitectureOptions& opts = {});

/// Number of stages that hold a full frame in memory.
std::size_t copy_count(const Topology& t);

} // namespace camsim
