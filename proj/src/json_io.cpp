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

#include "camsim/json_io.hpp"

#include <cstdio>
#include <type_traits>

namespace camsim {

namespace {

template <typename T>
T field(const Json& j, const char* key) {
    if (!j.is_object())
        throw ConfigError(std::string("expected an object holding '") + key + "'");
    auto it = j.find(key);
    if (it == j.end())
        throw ConfigError(std::string("missing field '") + key + "'");
    try {
        if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
            if (it->is_number_integer() && !it->is_number_unsigned() &&
                it->template get<std::int64_t>() < 0)
                throw ConfigError(std::string("field '") + key + "' must be non-negative");
            if (!it->is_number_integer())
                throw ConfigError(std::string("field '") + key + "' must be an integer");
        }
        return it->template get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("field '") + key + "': " + e.what());
    }
}

template <typename T>
T field_or(const Json& j, const char* key, T fallback) {
    if (!j.is_object() || !j.contains(key) || j.at(key).is_null())
        return fallback;
    return field<T>(j, key);
}

const Json& child(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw ConfigError(std::string("missing field '") + key + "'");
    return j.at(key);
}

const char* cl_name(CameraLinkConfig c) {
    switch (c) {
    case CameraLinkConfig::Base:
        return "Base";
    case CameraLinkConfig::Medium:
        return "Medium";
    case CameraLinkConfig::Full:
        return "Full";
    }
    return "?";
}

CameraLinkConfig parse_cl(const std::string& s) {
    if (s == "Base")
        return CameraLinkConfig::Base;
    if (s == "Medium")
        return CameraLinkConfig::Medium;
    if (s == "Full")
        return CameraLinkConfig::Full;
    throw ConfigError("unknown Camera Link configuration '" + s + "'");
}

struct LinkKindJson {
    Json& j;
    void operator()(const Pcie& p) const {
        j["kind"] = "PCIe";
        j["generation"] = p.generation;
        j["lanes"] = p.lanes;
    }
    void operator()(const CameraLink& c) const {
        j["kind"] = "CameraLink";
        j["config"] = cl_name(c.config);
    }
    void operator()(const CoaXPress& c) const {
        j["kind"] = "CoaXPress";
        j["speed_grade"] = c.speed_grade;
        j["link_count"] = c.link_count;
    }
    void operator()(const GigEVision& g) const {
        j["kind"] = "GigEVision";
        j["rate_gbps"] = g.rate_gbps;
    }
    void operator()(const Clhs& c) const {
        j["kind"] = "CLHS";
        j["lane_count"] = c.lane_count;
    }
    void operator()(const Usb3&) const { j["kind"] = "USB3"; }
};

Json times_to_json(const StageTimes& s) {
    return Json::array({s.first_in.ns, s.last_in.ns, s.first_out.ns, s.last_out.ns});
}

StageTimes times_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 4)
        throw ConfigError("stage times must be [first_in, last_in, first_out, last_out]");
    auto at = [&](std::size_t i) {
        if (!j[i].is_number_unsigned())
            throw ConfigError("stage times must be non-negative integers");
        return SimTime{j[i].get<std::uint64_t>()};
    };
    return {at(0), at(1), at(2), at(3)};
}

} // namespace

Json to_json(const CameraSpec& cam) {
    return Json{{"resolution_pixels", cam.resolution_pixels},
                {"bit_depth", cam.bit_depth},
                {"frame_rate", cam.frame_rate}};
}

CameraSpec camera_from_json(const Json& j) {
    CameraSpec c;
    c.resolution_pixels = field<std::uint64_t>(j, "resolution_pixels");
    c.bit_depth = field<unsigned>(j, "bit_depth");
    c.frame_rate = field<double>(j, "frame_rate");
    return c;
}

Json to_json(const LinkSpec& link) {
    Json j = Json::object();
    std::visit(LinkKindJson{j}, link.kind);
    j["cable_length_m"] = link.cable_length_m;
    j["protocol_efficiency"] = link.protocol_efficiency;
    if (link.raw_rate_override_gbps)
        j["raw_rate_override_gbps"] = *link.raw_rate_override_gbps;
    return j;
}

LinkSpec link_from_json(const Json& j) {
    LinkSpec l;
    auto kind = field<std::string>(j, "kind");
    if (kind == "PCIe")
        l.kind = Pcie{field<int>(j, "generation"), field<int>(j, "lanes")};
    else if (kind == "CameraLink")
        l.kind = CameraLink{parse_cl(field<std::string>(j, "config"))};
    else if (kind == "CoaXPress")
        l.kind = CoaXPress{field<int>(j, "speed_grade"), field_or<int>(j, "link_count", 1)};
    else if (kind == "GigEVision")
        l.kind = GigEVision{field<int>(j, "rate_gbps")};
    else if (kind == "CLHS")
        l.kind = Clhs{field_or<int>(j, "lane_count", 1)};
    else if (kind == "USB3")
        l.kind = Usb3{};
    else
        throw ConfigError("unknown link kind '" + kind + "'");
    l.cable_length_m = field_or<double>(j, "cable_length_m", 0.0);
    l.protocol_efficiency = field_or<double>(j, "protocol_efficiency", 1.0);
    if (j.contains("raw_rate_override_gbps") && !j.at("raw_rate_override_gbps").is_null())
        l.raw_rate_override_gbps = field<double>(j, "raw_rate_override_gbps");
    return l;
}

Json to_json(const OverheadModel& o) {
    return Json{{"max_payload", o.max_payload},
                {"header_overhead", o.header_overhead},
                {"flow_control_factor", o.flow_control_factor}};
}

OverheadModel overhead_from_json(const Json& j) {
    OverheadModel o;
    o.max_payload = field_or<std::uint64_t>(j, "max_payload", o.max_payload);
    o.header_overhead = field_or<std::uint64_t>(j, "header_overhead", o.header_overhead);
    o.flow_control_factor = field_or<double>(j, "flow_control_factor", o.flow_control_factor);
    return o;
}

Json to_json(const ClockModel& c) {
    return Json{{"offset_ns", c.offset_ns},
                {"drift_ppm", c.drift_ppm},
                {"jitter_sigma_ns", c.jitter_sigma_ns}};
}

ClockModel clock_from_json(const Json& j) {
    ClockModel c;
    c.offset_ns = field_or<std::int64_t>(j, "offset_ns", 0);
    c.drift_ppm = field_or<double>(j, "drift_ppm", 0.0);
    c.jitter_sigma_ns = field_or<double>(j, "jitter_sigma_ns", 0.0);
    return c;
}

Json to_json(const DeadlineSpec& d) {
    return Json{{"safety_deadline_ns", d.safety_deadline_ns},
                {"control_deadline_ns", d.control_deadline_ns},
                {"timestamp_rms_budget_ns", d.timestamp_rms_budget_ns}};
}

DeadlineSpec deadlines_from_json(const Json& j) {
    DeadlineSpec d;
    d.safety_deadline_ns = field_or<std::uint64_t>(j, "safety_deadline_ns", d.safety_deadline_ns);
    d.control_deadline_ns =
        field_or<std::uint64_t>(j, "control_deadline_ns", d.control_deadline_ns);
    d.timestamp_rms_budget_ns =
        field_or<double>(j, "timestamp_rms_budget_ns", d.timestamp_rms_budget_ns);
    return d;
}

Json to_json(const ProcessingTime& p) {
    Json j{{"distribution", std::string(to_string(p.kind))}};
    switch (p.kind) {
    case ProcessingTime::Kind::Fixed:
        j["ns"] = p.fixed_ns;
        break;
    case ProcessingTime::Kind::Uniform:
        j["min_ns"] = p.min_ns;
        j["max_ns"] = p.max_ns;
        break;
    case ProcessingTime::Kind::Normal:
        j["mean_ns"] = p.mean_ns;
        j["sigma_ns"] = p.sigma_ns;
        break;
    }
    return j;
}

ProcessingTime processing_from_json(const Json& j) {
    auto kind = parse_processing_kind(field_or<std::string>(j, "distribution", "fixed"));
    switch (kind) {
    case ProcessingTime::Kind::Fixed:
        return ProcessingTime::fixed(field_or<std::uint64_t>(j, "ns", 0));
    case ProcessingTime::Kind::Uniform:
        return ProcessingTime::uniform(field<std::uint64_t>(j, "min_ns"),
                                       field<std::uint64_t>(j, "max_ns"));
    case ProcessingTime::Kind::Normal:
        return ProcessingTime::normal(field<double>(j, "mean_ns"), field<double>(j, "sigma_ns"));
    }
    return {};
}

Json to_json(const StageSpec& s) {
    Json j{{"kind", std::string(to_string(s.kind))},
           {"label", s.label},
           {"fixed_latency_ns", s.fixed_latency_ns}};
    switch (s.kind) {
    case StageKind::Buffer:
    case StageKind::FrameGrabber:
        j["capacity_bytes"] = s.capacity_bytes;
        j["forwarding"] = std::string(to_string(s.forwarding));
        break;
    case StageKind::Link:
        j["link"] = s.link ? to_json(*s.link) : Json(nullptr);
        break;
    case StageKind::Processor:
        j["processing"] = to_json(s.processing);
        break;
    case StageKind::Sensor:
    case StageKind::HostMemory:
        break;
    }
    return j;
}

StageSpec stage_from_json(const Json& j) {
    StageSpec s;
    s.kind = parse_stage_kind(field<std::string>(j, "kind"));
    s.label = field_or<std::string>(j, "label", "");
    s.fixed_latency_ns = field_or<std::uint64_t>(j, "fixed_latency_ns", 0);
    switch (s.kind) {
    case StageKind::Buffer:
    case StageKind::FrameGrabber:
        s.capacity_bytes = field<std::uint64_t>(j, "capacity_bytes");
        s.forwarding = parse_forwarding(field_or<std::string>(j, "forwarding", "StoreAndForward"));
        break;
    case StageKind::Link:
        if (j.contains("link") && !j.at("link").is_null())
            s.link = link_from_json(j.at("link"));
        break;
    case StageKind::Processor:
        if (j.contains("processing"))
            s.processing = processing_from_json(j.at("processing"));
        break;
    case StageKind::Sensor:
    case StageKind::HostMemory:
        break;
    }
    return s;
}

Json to_json(const Topology& t) {
    Json stages = Json::array();
    for (const auto& s : t.stages)
        stages.push_back(to_json(s));
    return Json{{"name", t.name},
                {"camera", to_json(t.camera)},
                {"deadlines", to_json(t.deadlines)},
                {"stages", stages}};
}

Topology topology_from_json(const Json& j) {
    Topology t;
    t.name = field_or<std::string>(j, "name", "");
    t.camera = camera_from_json(child(j, "camera"));
    if (j.contains("deadlines"))
        t.deadlines = deadlines_from_json(j.at("deadlines"));
    const auto& stages = child(j, "stages");
    if (!stages.is_array())
        throw ConfigError("'stages' must be an array");
    for (const auto& s : stages)
        t.stages.push_back(stage_from_json(s));
    return t;
}

Json to_json(const SimConfig& cfg) {
    Json j{{"seed", cfg.seed},
           {"drop_policy", std::string(to_string(cfg.drop_policy))},
           {"clock", to_json(cfg.clock)}};
    if (cfg.n_frames)
        j["n_frames"] = *cfg.n_frames;
    if (cfg.duration)
        j["duration_ns"] = cfg.duration->ns;
    return j;
}

SimConfig config_from_json(const Json& j) {
    SimConfig c;
    if (!j.is_object() || !j.contains("seed"))
        throw ConfigError("simulation seed is mandatory");
    c.seed = field<std::uint64_t>(j, "seed");
    if (j.contains("n_frames"))
        c.n_frames = field<std::uint64_t>(j, "n_frames");
    if (j.contains("duration_ns"))
        c.duration = SimTime{field<std::uint64_t>(j, "duration_ns")};
    if (c.n_frames.has_value() == c.duration.has_value())
        throw ConfigError("exactly one of 'n_frames' and 'duration_ns' must be given");
    c.drop_policy = parse_drop_policy(field_or<std::string>(j, "drop_policy", "DropNewest"));
    if (j.contains("clock"))
        c.clock = clock_from_json(j.at("clock"));
    return c;
}

Json to_json(const DeadlineViolation& v) {
    Json j{{"kind", std::string(to_string(v.kind))},
           {"measured_ns", v.measured_ns},
           {"limit_ns", v.limit_ns}};
    j["frame_id"] = v.frame_id ? Json(*v.frame_id) : Json(nullptr);
    return j;
}

DeadlineViolation violation_from_json(const Json& j) {
    DeadlineViolation v;
    v.kind = parse_violation_kind(field<std::string>(j, "kind"));
    if (j.contains("frame_id") && !j.at("frame_id").is_null())
        v.frame_id = field<std::uint64_t>(j, "frame_id");
    v.measured_ns = field<double>(j, "measured_ns");
    v.limit_ns = field<double>(j, "limit_ns");
    return v;
}

Json to_json(const FrameRecord& r) {
    Json stages = Json::array();
    for (const auto& s : r.stages)
        stages.push_back(times_to_json(s));
    Json j{{"frame_id", r.frame_id},
           {"size_bytes", r.size_bytes},
           {"generated_at_ns", r.generated_at.ns},
           {"camera_timestamp_ns", r.camera_timestamp.ns},
           {"timestamp_clamped", r.timestamp_clamped},
           {"stages", stages},
           {"disposition", std::string(to_string(r.disposition))}};
    if (r.drop)
        j["drop"] = Json{{"stage", r.drop->stage},
                         {"reason", std::string(to_string(r.drop->reason))},
                         {"at_ns", r.drop->at.ns}};
    return j;
}

FrameRecord frame_from_json(const Json& j) {
    FrameRecord r;
    r.frame_id = field<std::uint64_t>(j, "frame_id");
    r.size_bytes = field<std::uint64_t>(j, "size_bytes");
    r.generated_at = SimTime{field<std::uint64_t>(j, "generated_at_ns")};
    r.camera_timestamp = SimTime{field<std::uint64_t>(j, "camera_timestamp_ns")};
    r.timestamp_clamped = field_or<bool>(j, "timestamp_clamped", false);
    for (const auto& s : child(j, "stages"))
        r.stages.push_back(times_from_json(s));
    r.disposition = parse_disposition(field<std::string>(j, "disposition"));
    if (j.contains("drop")) {
        const auto& d = j.at("drop");
        r.drop = DropInfo{field<std::size_t>(d, "stage"),
                          parse_drop_reason(field<std::string>(d, "reason")),
                          SimTime{field<std::uint64_t>(d, "at_ns")}};
    }
    return r;
}

Json to_json(const Aggregates& a) {
    Json violations = Json::array();
    for (const auto& v : a.violations)
        violations.push_back(to_json(v));
    Json j{{"empty", a.empty},
           {"generated", a.generated},
           {"delivered", a.delivered},
           {"dropped", a.dropped},
           {"in_flight", a.in_flight},
           {"elapsed_ns", a.elapsed_ns},
           {"throughput_gbps", a.throughput_gbps},
           {"latency_min_ns", a.latency_min_ns},
           {"latency_mean_ns", a.latency_mean_ns},
           {"latency_p50_ns", a.latency_p50_ns},
           {"latency_p99_ns", a.latency_p99_ns},
           {"latency_max_ns", a.latency_max_ns},
           {"copy_count", a.copy_count},
           {"high_water_bytes", a.high_water_bytes},
           {"timestamp_rms_ns", a.timestamp_rms_ns},
           {"violations", violations}};
    j["first_drop_ns"] = a.first_drop_ns ? Json(*a.first_drop_ns) : Json(nullptr);
    return j;
}

Aggregates aggregates_from_json(const Json& j) {
    Aggregates a;
    a.empty = field<bool>(j, "empty");
    a.generated = field<std::uint64_t>(j, "generated");
    a.delivered = field<std::uint64_t>(j, "delivered");
    a.dropped = field<std::uint64_t>(j, "dropped");
    a.in_flight = field<std::uint64_t>(j, "in_flight");
    a.elapsed_ns = field<std::uint64_t>(j, "elapsed_ns");
    a.throughput_gbps = field<double>(j, "throughput_gbps");
    a.latency_min_ns = field<std::uint64_t>(j, "latency_min_ns");
    a.latency_mean_ns = field<double>(j, "latency_mean_ns");
    a.latency_p50_ns = field<std::uint64_t>(j, "latency_p50_ns");
    a.latency_p99_ns = field<std::uint64_t>(j, "latency_p99_ns");
    a.latency_max_ns = field<std::uint64_t>(j, "latency_max_ns");
    a.copy_count = field<std::uint64_t>(j, "copy_count");
    a.high_water_bytes = field<std::vector<double>>(j, "high_water_bytes");
    if (j.contains("first_drop_ns") && !j.at("first_drop_ns").is_null())
        a.first_drop_ns = field<std::uint64_t>(j, "first_drop_ns");
    a.timestamp_rms_ns = field<double>(j, "timestamp_rms_ns");
    for (const auto& v : child(j, "violations"))
        a.violations.push_back(violation_from_json(v));
    return a;
}

Json to_json(const SimReport& r) {
    Json frames = Json::array();
    for (const auto& f : r.frames)
        frames.push_back(to_json(f));
    return Json{{"schema", kReportSchema},
                {"scenario", r.scenario},
                {"topology_digest", r.topology_digest},
                {"topology", to_json(r.topology)},
                {"config", to_json(r.config)},
                {"frames", frames},
                {"aggregates", to_json(r.aggregates)}};
}

SimReport report_from_json(const Json& j) {
    auto schema = field<std::string>(j, "schema");
    if (schema != kReportSchema)
        throw ConfigError("unsupported report schema '" + schema + "'");
    SimReport r;
    r.scenario = field<std::string>(j, "scenario");
    r.topology_digest = field<std::string>(j, "topology_digest");
    r.topology = topology_from_json(child(j, "topology"));
    r.config = config_from_json(child(j, "config"));
    const auto& frames = child(j, "frames");
    if (!frames.is_array())
        throw ConfigError("'frames' must be an array");
    r.frames.reserve(frames.size());
    for (const auto& f : frames)
        r.frames.push_back(frame_from_json(f));
    r.aggregates = aggregates_from_json(child(j, "aggregates"));
    return r;
}

std::string canonical(const Json& j) { return j.dump(); }

std::string topology_digest(const Topology& t) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical(to_json(t))) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace camsim
