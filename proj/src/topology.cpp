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

#include "camsim/topology.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace camsim {

std::string_view to_string(StageKind k) {
    switch (k) {
    case StageKind::Sensor:
        return "Sensor";
    case StageKind::Buffer:
        return "Buffer";
    case StageKind::Link:
        return "Link";
    case StageKind::FrameGrabber:
        return "FrameGrabber";
    case StageKind::HostMemory:
        return "HostMemory";
    case StageKind::Processor:
        return "Processor";
    }
    return "?";
}

std::string_view to_string(Forwarding f) {
    return f == Forwarding::StoreAndForward ? "StoreAndForward" : "CutThrough";
}

StageKind parse_stage_kind(std::string_view s) {
    for (auto k : {StageKind::Sensor, StageKind::Buffer, StageKind::Link, StageKind::FrameGrabber,
                   StageKind::HostMemory, StageKind::Processor})
        if (to_string(k) == s)
            return k;
    throw ConfigError("unknown stage kind '" + std::string(s) + "'");
}

Forwarding parse_forwarding(std::string_view s) {
    if (s == "StoreAndForward")
        return Forwarding::StoreAndForward;
    if (s == "CutThrough")
        return Forwarding::CutThrough;
    throw ConfigError("unknown forwarding mode '" + std::string(s) + "'");
}

std::string_view to_string(ProcessingTime::Kind k) {
    switch (k) {
    case ProcessingTime::Kind::Fixed:
        return "fixed";
    case ProcessingTime::Kind::Uniform:
        return "uniform";
    case ProcessingTime::Kind::Normal:
        return "normal";
    }
    return "?";
}

ProcessingTime::Kind parse_processing_kind(std::string_view s) {
    if (s == "fixed")
        return ProcessingTime::Kind::Fixed;
    if (s == "uniform")
        return ProcessingTime::Kind::Uniform;
    if (s == "normal")
        return ProcessingTime::Kind::Normal;
    throw ConfigError("unknown processing distribution '" + std::string(s) + "'");
}

ProcessingTime ProcessingTime::fixed(std::uint64_t ns) {
    ProcessingTime p;
    p.fixed_ns = ns;
    return p;
}

ProcessingTime ProcessingTime::uniform(std::uint64_t lo, std::uint64_t hi) {
    ProcessingTime p;
    p.kind = Kind::Uniform;
    p.min_ns = lo;
    p.max_ns = hi;
    return p;
}

ProcessingTime ProcessingTime::normal(double mean, double sigma) {
    ProcessingTime p;
    p.kind = Kind::Normal;
    p.mean_ns = mean;
    p.sigma_ns = sigma;
    return p;
}

SimTime ProcessingTime::draw(NoiseStream& noise) const {
    switch (kind) {
    case Kind::Fixed:
        return SimTime{fixed_ns};
    case Kind::Uniform: {
        std::uint64_t span = max_ns - min_ns + 1;
        std::uint64_t x = noise.next_u64();
        return SimTime{min_ns + (span == 0 ? x : x % span)};
    }
    case Kind::Normal: {
        double v = mean_ns + sigma_ns * noise.gaussian();
        return SimTime{v <= 0.0 ? 0 : static_cast<std::uint64_t>(std::llround(v))};
    }
    }
    return SimTime{};
}

StageSpec StageSpec::sensor(std::uint64_t latency_ns) {
    StageSpec s;
    s.kind = StageKind::Sensor;
    s.label = "sensor";
    s.fixed_latency_ns = latency_ns;
    return s;
}

StageSpec StageSpec::buffer(std::uint64_t capacity, Forwarding fwd, std::uint64_t latency_ns,
                            std::string label) {
    StageSpec s;
    s.kind = StageKind::Buffer;
    s.label = std::move(label);
    s.capacity_bytes = capacity;
    s.forwarding = fwd;
    s.fixed_latency_ns = latency_ns;
    return s;
}

StageSpec StageSpec::link_stage(LinkSpec link, std::string label) {
    StageSpec s;
    s.kind = StageKind::Link;
    s.label = std::move(label);
    s.link = std::move(link);
    return s;
}

StageSpec StageSpec::frame_grabber(std::uint64_t capacity, std::uint64_t latency_ns) {
    StageSpec s;
    s.kind = StageKind::FrameGrabber;
    s.label = "frame grabber";
    s.capacity_bytes = capacity;
    s.forwarding = Forwarding::StoreAndForward;
    s.fixed_latency_ns = latency_ns;
    return s;
}

StageSpec StageSpec::host_memory(std::uint64_t latency_ns) {
    StageSpec s;
    s.kind = StageKind::HostMemory;
    s.label = "host memory";
    s.fixed_latency_ns = latency_ns;
    return s;
}

StageSpec StageSpec::processor(ProcessingTime processing, std::uint64_t latency_ns) {
    StageSpec s;
    s.kind = StageKind::Processor;
    s.label = "processor";
    s.processing = processing;
    s.fixed_latency_ns = latency_ns;
    return s;
}

namespace {

void add(std::vector<TopologyViolation>& out, std::size_t stage, std::string_view rule,
         std::string detail = {}) {
    out.push_back({stage, std::string(rule), std::move(detail)});
}

std::string processing_problem(const ProcessingTime& p) {
    switch (p.kind) {
    case ProcessingTime::Kind::Fixed:
        return {};
    case ProcessingTime::Kind::Uniform:
        return p.min_ns <= p.max_ns ? std::string{} : "uniform min exceeds max";
    case ProcessingTime::Kind::Normal:
        if (!std::isfinite(p.mean_ns) || p.mean_ns < 0.0)
            return "normal mean must be non-negative";
        if (!std::isfinite(p.sigma_ns) || p.sigma_ns < 0.0)
            return "normal sigma must be non-negative";
        return {};
    }
    return "unknown distribution";
}

} // namespace

std::vector<TopologyViolation> validate(const Topology& t) {
    std::vector<TopologyViolation> out;
    const auto& st = t.stages;

    try {
        validate_camera(t.camera);
    } catch (const InvalidSpec& e) {
        add(out, 0, rules::kCamera, e.what());
    }
    try {
        validate_deadlines(t.deadlines);
    } catch (const InvalidSpec& e) {
        add(out, 0, rules::kDeadlines, e.what());
    }

    if (st.empty() || st.front().kind != StageKind::Sensor)
        add(out, 0, rules::kFirstIsSensor);
    if (st.empty() || st.back().kind != StageKind::Processor)
        add(out, st.empty() ? 0 : st.size() - 1, rules::kLastIsProcessor);

    bool any_link = false;
    for (std::size_t i = 0; i < st.size(); ++i) {
        const auto& s = st[i];
        if (s.kind == StageKind::Sensor && i != 0)
            add(out, i, rules::kSingleSensor);
        if (s.kind == StageKind::Processor && i + 1 != st.size())
            add(out, i, rules::kSingleProcessor);
        if (s.has_capacity() && s.capacity_bytes == 0)
            add(out, i, rules::kCapacity);
        if (s.kind == StageKind::FrameGrabber && s.forwarding != Forwarding::StoreAndForward)
            add(out, i, rules::kGrabberStoreAndForward);
        if (s.kind == StageKind::Processor) {
            if (auto problem = processing_problem(s.processing); !problem.empty())
                add(out, i, rules::kProcessing, problem);
        }
        if (s.kind == StageKind::Link) {
            any_link = true;
            if (i == 0 || !st[i - 1].can_emit())
                add(out, i, rules::kLinkFedByEmitter);
            if (!s.link) {
                add(out, i, rules::kLinkSpec, "missing link");
            } else {
                try {
                    validate_link(*s.link);
                } catch (const InvalidSpec& e) {
                    add(out, i, rules::kLinkSpec, e.what());
                }
            }
        }
    }
    if (!any_link)
        add(out, 0, rules::kHasLink);
    return out;
}

namespace {

void ensure_valid(const Topology& t) {
    auto violations = validate(t);
    if (violations.empty())
        return;
    std::string msg = "invalid topology '" + t.name + "':";
    for (const auto& v : violations) {
        msg += " [stage " + std::to_string(v.stage) + "] " + v.rule;
        if (!v.detail.empty())
            msg += " (" + v.detail + ")";
        msg += ";";
    }
    throw InvalidSpec(msg);
}

} // namespace

Topology build_classic(const CameraSpec& cam, const LinkSpec& ci, const LinkSpec& pcie,
                       std::uint64_t grabber_capacity, const ArchitectureOptions& opts) {
    Topology t;
    t.name = "classic";
    t.camera = cam;
    t.deadlines = opts.deadlines;
    t.stages = {
        StageSpec::sensor(opts.sensor_latency_ns),
        StageSpec::buffer(opts.camera_buffer_capacity,
                          opts.camera_buffer_forwarding.value_or(Forwarding::StoreAndForward),
                          opts.camera_buffer_latency_ns, "camera FPGA"),
        StageSpec::link_stage(ci, "camera interface"),
        StageSpec::frame_grabber(grabber_capacity, opts.grabber_latency_ns),
        StageSpec::link_stage(pcie, "PCIe"),
        StageSpec::host_memory(opts.host_latency_ns),
        StageSpec::processor(opts.processing, opts.processor_latency_ns),
    };
    ensure_valid(t);
    return t;
}

Topology build_direct(const CameraSpec& cam, const LinkSpec& pcie,
                      const ArchitectureOptions& opts) {
    Topology t;
    t.name = "direct";
    t.camera = cam;
    t.deadlines = opts.deadlines;
    t.stages = {
        StageSpec::sensor(opts.sensor_latency_ns),
        StageSpec::buffer(opts.camera_buffer_capacity,
                          opts.camera_buffer_forwarding.value_or(Forwarding::CutThrough),
                          opts.camera_buffer_latency_ns, "camera FPGA"),
        StageSpec::link_stage(pcie, "PCIe"),
        StageSpec::host_memory(opts.host_latency_ns),
        StageSpec::processor(opts.processing, opts.processor_latency_ns),
    };
    ensure_valid(t);
    return t;
}

std::size_t copy_count(const Topology& t) {
    std::size_t n = 0;
    for (const auto& s : t.stages)
        if (s.is_memory())
            ++n;
    return n;
}

} // namespace camsim
