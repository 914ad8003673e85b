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

#include "camsim/linkmodel.hpp"

#include <cmath>
#include <sstream>

namespace camsim {

namespace {

// Camera Link pixel clock, MHz.
constexpr double kCameraLinkClockMhz = 85.0;

constexpr double kPropagationNsPerMeter = 5.0;

int camera_link_bits(CameraLinkConfig config) {
    switch (config) {
    case CameraLinkConfig::Base:
        return 24;
    case CameraLinkConfig::Medium:
        return 48;
    case CameraLinkConfig::Full:
        return 84;
    }
    throw InvalidSpec("unknown Camera Link configuration");
}

const char* camera_link_label(CameraLinkConfig config) {
    switch (config) {
    case CameraLinkConfig::Base:
        return "Base";
    case CameraLinkConfig::Medium:
        return "Medium";
    case CameraLinkConfig::Full:
        return "Full";
    }
    return "?";
}

// Per-link bit rate for CXP-n, Gb/s. Zero for unknown grades.
double cxp_rate(int grade) {
    switch (grade) {
    case 1:
        return 1.25;
    case 2:
        return 2.5;
    case 3:
        return 3.125;
    case 5:
        return 5.0;
    case 6:
        return 6.25;
    case 10:
        return 10.0;
    case 12:
        return 12.5;
    default:
        return 0.0;
    }
}

constexpr double kClhsLaneGbps = 10.3;
constexpr double kUsb3Gbps = 5.0;

bool valid_lane_width(int lanes) {
    for (int w : kLaneWidths)
        if (w == lanes)
            return true;
    return false;
}

void check_generation(int generation) {
    if (generation < 1 || generation > 5)
        throw InvalidSpec("PCIe generation " + std::to_string(generation) +
                          " outside modeled range [1,5]");
}

struct RawRate {
    double operator()(const Pcie& p) const {
        return p.lanes * (raw_lane_rate(p.generation) * encoding_efficiency(p.generation));
    }
    double operator()(const CameraLink& c) const {
        return camera_link_bits(c.config) * kCameraLinkClockMhz / 1000.0;
    }
    double operator()(const CoaXPress& c) const { return cxp_rate(c.speed_grade) * c.link_count; }
    double operator()(const GigEVision& g) const { return static_cast<double>(g.rate_gbps); }
    double operator()(const Clhs& c) const { return kClhsLaneGbps * c.lane_count; }
    double operator()(const Usb3&) const { return kUsb3Gbps; }
};

struct KindCheck {
    void operator()(const Pcie& p) const {
        check_generation(p.generation);
        if (!valid_lane_width(p.lanes))
            throw InvalidSpec("PCIe lane count " + std::to_string(p.lanes) +
                              " not in {1,2,4,8,16}");
    }
    void operator()(const CameraLink& c) const { camera_link_bits(c.config); }
    void operator()(const CoaXPress& c) const {
        if (cxp_rate(c.speed_grade) == 0.0)
            throw InvalidSpec("unknown CoaXPress speed grade CXP-" +
                              std::to_string(c.speed_grade));
        if (c.link_count < 1 || c.link_count > 8)
            throw InvalidSpec("CoaXPress link count must be in [1,8]");
    }
    void operator()(const GigEVision& g) const {
        if (g.rate_gbps != 1 && g.rate_gbps != 10)
            throw InvalidSpec("GigE Vision rate must be 1 or 10 Gb/s");
    }
    void operator()(const Clhs& c) const {
        if (c.lane_count < 1 || c.lane_count > 8)
            throw InvalidSpec("CLHS lane count must be in [1,8]");
    }
    void operator()(const Usb3&) const {}
};

struct KindName {
    std::string operator()(const Pcie& p) const {
        return "PCIe gen" + std::to_string(p.generation) + " x" + std::to_string(p.lanes);
    }
    std::string operator()(const CameraLink& c) const {
        return std::string("CameraLink ") + camera_link_label(c.config);
    }
    std::string operator()(const CoaXPress& c) const {
        return "CoaXPress CXP-" + std::to_string(c.speed_grade) + " x" +
               std::to_string(c.link_count);
    }
    std::string operator()(const GigEVision& g) const {
        return "GigE Vision " + std::to_string(g.rate_gbps) + "G";
    }
    std::string operator()(const Clhs& c) const { return "CLHS x" + std::to_string(c.lane_count); }
    std::string operator()(const Usb3&) const { return "USB3"; }
};

} // namespace

std::uint64_t CameraSpec::frame_bytes() const {
    return (resolution_pixels * bit_depth + 7) / 8;
}

std::vector<std::string> validate_camera(const CameraSpec& cam) {
    if (cam.resolution_pixels < 1)
        throw InvalidSpec("camera resolution must be at least 1 pixel");
    if (cam.bit_depth < 1 || cam.bit_depth > 64)
        throw InvalidSpec("camera bit depth must be in [1,64]");
    if (!std::isfinite(cam.frame_rate) || cam.frame_rate < 0.0)
        throw InvalidSpec("camera frame rate must be finite and non-negative");

    std::vector<std::string> warnings;
    if (cam.resolution_pixels < 1'000'000 || cam.resolution_pixels > 8'000'000) {
        std::ostringstream os;
        os << "resolution " << cam.resolution_pixels
           << " px outside the 1-8 Mpx diagnostic envelope";
        warnings.push_back(os.str());
    }
    if (cam.frame_rate < 50.0 || cam.frame_rate > 50000.0) {
        std::ostringstream os;
        os << "frame rate " << cam.frame_rate << " fps outside the 50-50000 fps envelope";
        warnings.push_back(os.str());
    }
    return warnings;
}

LinkSpec LinkSpec::pcie(int generation, int lanes, double efficiency, double cable_m) {
    return LinkSpec{Pcie{generation, lanes}, cable_m, efficiency, std::nullopt};
}

LinkSpec LinkSpec::camera_link(CameraLinkConfig config, double cable_m) {
    return LinkSpec{CameraLink{config}, cable_m, 1.0, std::nullopt};
}

LinkSpec LinkSpec::coaxpress(int speed_grade, int link_count, double cable_m) {
    return LinkSpec{CoaXPress{speed_grade, link_count}, cable_m, 1.0, std::nullopt};
}

LinkSpec LinkSpec::gige_vision(int rate_gbps, double cable_m) {
    return LinkSpec{GigEVision{rate_gbps}, cable_m, 1.0, std::nullopt};
}

LinkSpec LinkSpec::clhs(int lane_count, double cable_m) {
    return LinkSpec{Clhs{lane_count}, cable_m, 1.0, std::nullopt};
}

LinkSpec LinkSpec::usb3(double cable_m) {
    return LinkSpec{Usb3{}, cable_m, 1.0, std::nullopt};
}

double OverheadModel::efficiency() const {
    return flow_control_factor * static_cast<double>(max_payload) /
           static_cast<double>(max_payload + header_overhead);
}

void validate_overhead(const OverheadModel& overhead) {
    if (overhead.max_payload == 0)
        throw InvalidSpec("overhead max_payload must be positive");
    if (!(overhead.flow_control_factor > 0.0 && overhead.flow_control_factor <= 1.0))
        throw InvalidSpec("overhead flow_control_factor must be in (0,1]");
}

void validate_link(const LinkSpec& link) {
    std::visit(KindCheck{}, link.kind);
    if (!std::isfinite(link.cable_length_m) || link.cable_length_m < 0.0)
        throw InvalidSpec("cable length must be a non-negative number of meters");
    if (!(link.protocol_efficiency > 0.0 && link.protocol_efficiency <= 1.0))
        throw InvalidSpec("protocol efficiency must be in (0,1]");
    if (link.raw_rate_override_gbps &&
        !(std::isfinite(*link.raw_rate_override_gbps) && *link.raw_rate_override_gbps > 0.0))
        throw InvalidSpec("raw rate override must be a positive rate");
}

std::string link_name(const LinkSpec& link) { return std::visit(KindName{}, link.kind); }

double raw_lane_rate(int generation) {
    check_generation(generation);
    static constexpr double ladder[] = {2.5, 5.0, 8.0, 16.0, 32.0};
    return ladder[generation - 1];
}

double encoding_efficiency(int generation) {
    check_generation(generation);
    return generation <= 2 ? 8.0 / 10.0 : 128.0 / 130.0;
}

double raw_link_rate(const LinkSpec& link) {
    validate_link(link);
    if (link.raw_rate_override_gbps)
        return *link.raw_rate_override_gbps;
    return std::visit(RawRate{}, link.kind);
}

double effective_link_rate(const LinkSpec& link) {
    return raw_link_rate(link) * link.protocol_efficiency;
}

SimTime propagation_delay(const LinkSpec& link) {
    double ns = link.cable_length_m * kPropagationNsPerMeter;
    double whole = std::nearbyint(ns);
    if (std::fabs(ns - whole) <= 1e-9 * std::max(1.0, ns))
        return SimTime{static_cast<std::uint64_t>(whole)};
    return SimTime{static_cast<std::uint64_t>(std::ceil(ns))};
}

double camera_stream_rate(const CameraSpec& cam) {
    return static_cast<double>(cam.resolution_pixels) * cam.bit_depth * cam.frame_rate / 1e9;
}

double aggregate_rate(std::span<const CameraSpec> cams) {
    double total = 0.0;
    for (const auto& cam : cams)
        total += camera_stream_rate(cam);
    return total;
}

Feasibility feasible(const CameraSpec& cam, const LinkSpec& link) {
    validate_camera(cam);
    double margin = effective_link_rate(link) - camera_stream_rate(cam);
    return {margin >= -kRateTolerance, margin};
}

int min_lanes(const CameraSpec& cam, int generation, const OverheadModel& overhead) {
    validate_camera(cam);
    validate_overhead(overhead);
    double demand = camera_stream_rate(cam);
    for (int lanes : kLaneWidths) {
        auto link = LinkSpec::pcie(generation, lanes, overhead.efficiency());
        if (effective_link_rate(link) >= demand - kRateTolerance)
            return lanes;
    }
    std::ostringstream os;
    os << "stream of " << demand << " Gb/s exceeds PCIe gen" << generation << " x16";
    throw NoFeasibleWidth(os.str());
}

std::vector<LinkSpec> interface_presets(double protocol_efficiency) {
    std::vector<LinkSpec> presets = {
        LinkSpec::camera_link(CameraLinkConfig::Base),
        LinkSpec::camera_link(CameraLinkConfig::Medium),
        LinkSpec::camera_link(CameraLinkConfig::Full),
    };
    for (int grade : {1, 2, 3, 5, 6, 10, 12})
        presets.push_back(LinkSpec::coaxpress(grade, 1));
    presets.push_back(LinkSpec::gige_vision(1));
    presets.push_back(LinkSpec::gige_vision(10));
    presets.push_back(LinkSpec::clhs(1));
    presets.push_back(LinkSpec::usb3());
    for (auto& p : presets)
        p.protocol_efficiency = protocol_efficiency;
    return presets;
}

} // namespace camsim
