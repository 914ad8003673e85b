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
 * @file linkmodel.hpp
 * @brief Camera stream rates and effective link throughput.
 *
 * PCIe links are computed from the generation ladder (2.5/5/8/16/32 GT/s)
 * and the line code (8b/10b for gen 1-2, 128b/130b for gen 3-5):
 *
 *     effective = lanes x GT/s x encoding x protocol_efficiency
 *
 * Machine-vision interfaces use a fixed raw rate per preset:
 *
 *     effective = preset_raw x protocol_efficiency
 *
 * Camera Link presets are bits-per-clock x 85 MHz (Base 24, Medium 48,
 * Full 84 bits). CoaXPress, GigE Vision, CLHS and USB3 entries are taken
 * from the respective interface standards.
 */

#pragma once

#include "camsim/units.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace camsim {

/// Sensor output: pixels per frame, bits per pixel, frames per second.
struct CameraSpec {
    std::uint64_t resolution_pixels = 1'000'000;
    unsigned bit_depth = 8;
    double frame_rate = 1000.0;

    /// Bytes per frame, rounded up to whole bytes.
    std::uint64_t frame_bytes() const;

    bool operator==(const CameraSpec&) const = default;
};

/// Throws InvalidSpec on a hard invariant violation. Returns non-fatal
/// warnings when the camera lies outside the 1-8 Mpx / 50-50000 fps envelope.
std::vector<std::string> validate_camera(const CameraSpec& cam);

struct Pcie {
    int generation = 3;
    int lanes = 1;
    bool operator==(const Pcie&) const = default;
};

enum class CameraLinkConfig { Base, Medium, Full };

struct CameraLink {
    CameraLinkConfig config = CameraLinkConfig::Full;
    bool operator==(const CameraLink&) const = default;
};

/// CoaXPress; speed_grade is the CXP-n designation (1,2,3,5,6,10,12).
struct CoaXPress {
    int speed_grade = 6;
    int link_count = 1;
    bool operator==(const CoaXPress&) const = default;
};

/// GigE Vision; rate_gbps is 1 or 10.
struct GigEVision {
    int rate_gbps = 10;
    bool operator==(const GigEVision&) const = default;
};

/// Camera Link HS.
struct Clhs {
    int lane_count = 1;
    bool operator==(const Clhs&) const = default;
};

struct Usb3 {
    bool operator==(const Usb3&) const = default;
};

using LinkKind = std::variant<Pcie, CameraLink, CoaXPress, GigEVision, Clhs, Usb3>;

struct LinkSpec {
    LinkKind kind = Pcie{};
    double cable_length_m = 0.0;
    double protocol_efficiency = 1.0;
    /// Replaces the built-in raw rate (Gb/s, before protocol efficiency).
    std::optional<double> raw_rate_override_gbps;

    static LinkSpec pcie(int generation, int lanes, double efficiency = 1.0, double cable_m = 0.0);
    static LinkSpec camera_link(CameraLinkConfig config, double cable_m = 0.0);
    static LinkSpec coaxpress(int speed_grade, int link_count, double cable_m = 0.0);
    static LinkSpec gige_vision(int rate_gbps, double cable_m = 0.0);
    static LinkSpec clhs(int lane_count, double cable_m = 0.0);
    static LinkSpec usb3(double cable_m = 0.0);

    bool is_pcie() const { return std::holds_alternative<Pcie>(kind); }

    bool operator==(const LinkSpec&) const = default;
};

/// PCIe TLP framing: efficiency = fc x payload / (payload + header).
struct OverheadModel {
    std::uint64_t max_payload = 256;
    std::uint64_t header_overhead = 28;
    double flow_control_factor = 1.0;

    double efficiency() const;

    bool operator==(const OverheadModel&) const = default;
};

void validate_overhead(const OverheadModel& overhead);

/// Throws InvalidSpec when the link is outside the modeled configurations.
void validate_link(const LinkSpec& link);

/// Human-readable label, e.g. "PCIe gen3 x4" or "CameraLink Full".
std::string link_name(const LinkSpec& link);

/// Per-lane transfer rate in GT/s for PCIe generations 1..5.
double raw_lane_rate(int generation);

/// Line-code efficiency: 8/10 for generations 1-2, 128/130 for 3-5.
double encoding_efficiency(int generation);

/// Rate before protocol efficiency, Gb/s.
double raw_link_rate(const LinkSpec& link);

/// Payload rate, Gb/s. Strictly positive for every valid spec.
double effective_link_rate(const LinkSpec& link);

/// Cable propagation at 5 ns/m, rounded up to whole nanoseconds.
SimTime propagation_delay(const LinkSpec& link);

/// resolution x bit_depth x frame_rate, in Gb/s.
double camera_stream_rate(const CameraSpec& cam);

double aggregate_rate(std::span<const CameraSpec> cams);

struct Feasibility {
    bool feasible = false;
    double margin_gbps = 0.0;
};

Feasibility feasible(const CameraSpec& cam, const LinkSpec& link);

inline constexpr int kLaneWidths[] = {1, 2, 4, 8, 16};

/// Smallest PCIe width carrying the camera stream at the given generation.
/// Throws NoFeasibleWidth when x16 is not enough.
int min_lanes(const CameraSpec& cam, int generation, const OverheadModel& overhead = {});

/// Every machine-vision interface preset at the given protocol efficiency.
std::vector<LinkSpec> interface_presets(double protocol_efficiency = 1.0);

} // namespace camsim
