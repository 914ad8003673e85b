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

#include "camsim/scenario.hpp"

#include "camsim/simcore.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace camsim {

namespace {

const std::vector<std::string> kKnownKeys = {
    "schema",   "name",       "camera",         "cameras",          "architecture",
    "links",    "stages",     "grabber_capacity_bytes", "camera_buffer", "latencies",
    "processing", "overhead", "clock",          "deadlines",        "preset_overrides",
    "sim",      "description",
};

std::uint64_t u64_or(const Json& j, const char* key, std::uint64_t fallback) {
    if (!j.contains(key))
        return fallback;
    const auto& v = j.at(key);
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
        throw ConfigError(std::string("field '") + key + "' must be a non-negative integer");
    return v.get<std::uint64_t>();
}

const Json& object_at(const Json& j, const char* key) {
    if (!j.contains(key))
        throw ConfigError(std::string("missing field '") + key + "'");
    const auto& v = j.at(key);
    if (!v.is_object())
        throw ConfigError(std::string("field '") + key + "' must be an object");
    return v;
}

struct LinkContext {
    std::optional<OverheadModel> overhead;
    std::map<std::string, double> overrides;
    std::map<std::string, bool> used;
};

LinkSpec resolve_link(const Json& j, LinkContext& ctx) {
    LinkSpec l = link_from_json(j);
    if (ctx.overhead && l.is_pcie() && !j.contains("protocol_efficiency"))
        l.protocol_efficiency = ctx.overhead->efficiency();
    if (!l.raw_rate_override_gbps) {
        auto it = ctx.overrides.find(link_name(l));
        if (it != ctx.overrides.end()) {
            l.raw_rate_override_gbps = it->second;
            ctx.used[it->first] = true;
        }
    }
    try {
        validate_link(l);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid link: ") + e.what());
    }
    return l;
}

ArchitectureOptions options_from(const Json& j, const DeadlineSpec& deadlines) {
    ArchitectureOptions o;
    o.deadlines = deadlines;
    if (j.contains("camera_buffer")) {
        const auto& b = object_at(j, "camera_buffer");
        o.camera_buffer_capacity = u64_or(b, "capacity_bytes", o.camera_buffer_capacity);
        if (b.contains("forwarding")) {
            if (!b.at("forwarding").is_string())
                throw ConfigError("camera_buffer.forwarding must be a string");
            o.camera_buffer_forwarding = parse_forwarding(b.at("forwarding").get<std::string>());
        }
        o.camera_buffer_latency_ns = u64_or(b, "latency_ns", 0);
    }
    if (j.contains("latencies")) {
        const auto& l = object_at(j, "latencies");
        o.sensor_latency_ns = u64_or(l, "sensor_ns", 0);
        o.grabber_latency_ns = u64_or(l, "grabber_ns", 0);
        o.host_latency_ns = u64_or(l, "host_ns", 0);
        o.processor_latency_ns = u64_or(l, "processor_ns", 0);
    }
    if (j.contains("processing"))
        o.processing = processing_from_json(j.at("processing"));
    return o;
}

std::string join_violations(const std::vector<TopologyViolation>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i)
        os << (i ? "; " : "") << "stage " << v[i].stage << ": " << v[i].rule
           << (v[i].detail.empty() ? "" : " (" + v[i].detail + ")");
    return os.str();
}

Topology build_pipeline(const Json& j, const std::string& arch, const CameraSpec& cam,
                        const DeadlineSpec& deadlines, LinkContext& ctx) {
    Topology t;
    if (arch == "custom") {
        const auto& stages = j.contains("stages") ? j.at("stages") : Json();
        if (!stages.is_array() || stages.empty())
            throw ConfigError("custom architecture needs a non-empty 'stages' array");
        t.camera = cam;
        t.deadlines = deadlines;
        for (const auto& s : stages) {
            StageSpec st = stage_from_json(s);
            if (st.kind == StageKind::Link && s.is_object() && s.contains("link"))
                st.link = resolve_link(s.at("link"), ctx);
            t.stages.push_back(std::move(st));
        }
    } else {
        const auto& links = object_at(j, "links");
        auto opts = options_from(j, deadlines);
        LinkSpec pcie = resolve_link(object_at(links, "pcie"), ctx);
        try {
            if (arch == "classic") {
                LinkSpec ci = resolve_link(object_at(links, "camera_interface"), ctx);
                t = build_classic(cam, ci, pcie, u64_or(j, "grabber_capacity_bytes", 64 * MiB),
                                  opts);
            } else if (arch == "direct") {
                t = build_direct(cam, pcie, opts);
            } else {
                throw ConfigError("architecture must be classic, direct or custom, not '" +
                                  arch + "'");
            }
        } catch (const InvalidSpec& e) {
            throw ConfigError(std::string("scenario does not form a valid pipeline: ") +
                              e.what());
        }
    }
    auto bad = validate(t);
    if (!bad.empty())
        throw ConfigError("scenario does not form a valid pipeline: " + join_violations(bad));
    return t;
}

} // namespace

Scenario parse_scenario(const Json& j, std::optional<std::uint64_t> seed) {
    if (!j.is_object())
        throw ConfigError("scenario must be a JSON object");
    if (!j.contains("schema") || j.at("schema") != kScenarioSchema)
        throw ConfigError(std::string("scenario 'schema' must be \"") + kScenarioSchema + "\"");
    for (const auto& [key, value] : j.items())
        if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end())
            throw ConfigError("unknown scenario field '" + key + "'");

    Scenario s;
    if (!j.contains("name") || !j.at("name").is_string())
        throw ConfigError("scenario 'name' must be a string");
    s.name = j.at("name").get<std::string>();

    std::vector<CameraSpec> cams;
    if (j.contains("camera") == j.contains("cameras"))
        throw ConfigError("give exactly one of 'camera' and 'cameras'");
    if (j.contains("camera")) {
        cams.push_back(camera_from_json(j.at("camera")));
    } else {
        const auto& arr = j.at("cameras");
        if (!arr.is_array() || arr.empty())
            throw ConfigError("'cameras' must be a non-empty array");
        for (const auto& c : arr)
            cams.push_back(camera_from_json(c));
    }
    for (std::size_t i = 0; i < cams.size(); ++i) {
        try {
            for (auto& w : validate_camera(cams[i]))
                s.warnings.push_back("camera " + std::to_string(i) + ": " + w);
        } catch (const InvalidSpec& e) {
            throw ConfigError("camera " + std::to_string(i) + ": " + e.what());
        }
    }

    DeadlineSpec deadlines;
    if (j.contains("deadlines"))
        deadlines = deadlines_from_json(j.at("deadlines"));

    LinkContext ctx;
    if (j.contains("overhead")) {
        ctx.overhead = overhead_from_json(j.at("overhead"));
        try {
            validate_overhead(*ctx.overhead);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("invalid overhead model: ") + e.what());
        }
    }
    if (j.contains("preset_overrides")) {
        const auto& po = object_at(j, "preset_overrides");
        for (const auto& [name, rate] : po.items()) {
            if (!rate.is_number() || rate.get<double>() <= 0.0)
                throw ConfigError("preset override '" + name + "' must be a positive rate");
            ctx.overrides[name] = rate.get<double>();
            ctx.used[name] = false;
        }
    }

    if (!j.contains("architecture") || !j.at("architecture").is_string())
        throw ConfigError("scenario 'architecture' must be a string");
    auto arch = j.at("architecture").get<std::string>();

    for (std::size_t i = 0; i < cams.size(); ++i) {
        Topology t = build_pipeline(j, arch, cams[i], deadlines, ctx);
        t.name = cams.size() == 1 ? s.name : s.name + "/camera_" + std::to_string(i);
        s.pipelines.push_back(std::move(t));
    }
    for (const auto& [name, used] : ctx.used)
        if (!used)
            throw ConfigError("preset override '" + name + "' matches no link in the scenario");

    Json sim = j.contains("sim") ? object_at(j, "sim") : Json::object();
    if (seed)
        sim["seed"] = *seed;
    if (j.contains("clock"))
        sim["clock"] = j.at("clock");
    s.config = config_from_json(sim);
    try {
        validate_config(s.config);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid simulation settings: ") + e.what());
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& file, std::optional<std::uint64_t> seed) {
    std::ifstream in(file, std::ios::binary);
    if (!in)
        throw IoError("cannot read scenario '" + file.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    Json j;
    try {
        j = Json::parse(ss.str());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("scenario '" + file.string() + "' is not valid JSON: " + e.what());
    }
    return parse_scenario(j, seed);
}

bool ScenarioRun::has_violations() const {
    for (const auto& r : reports)
        if (!r.aggregates.violations.empty())
            return true;
    return false;
}

ScenarioRun run_scenario(const Scenario& s) {
    ScenarioRun out;
    bool multi = s.pipelines.size() > 1;
    for (std::size_t i = 0; i < s.pipelines.size(); ++i) {
        SimConfig cfg = s.config;
        if (multi)
            cfg.seed = derive_seed(s.config.seed, 16 + i);
        out.reports.push_back(run(s.pipelines[i], cfg, s.pipelines[i].name));
    }
    if (multi) {
        std::vector<CameraSpec> cams;
        double capacity = 0.0;
        Json per = Json::array();
        for (const auto& t : s.pipelines) {
            cams.push_back(t.camera);
            double host_link = 0.0;
            for (const auto& st : t.stages)
                if (st.kind == StageKind::Link && st.link && st.link->is_pcie())
                    host_link = effective_link_rate(*st.link);
            capacity += host_link;
            per.push_back(Json{{"name", t.name},
                               {"stream_gbps", camera_stream_rate(t.camera)},
                               {"pcie_gbps", host_link}});
        }
        double demand = aggregate_rate(cams);
        Json summary{{"scenario", s.name},
                     {"cameras", per},
                     {"aggregate_demand_gbps", demand},
                     {"aggregate_pcie_gbps", capacity},
                     {"demand_within_capacity", demand <= capacity + kRateTolerance}};
        out.summary = summary;
    }
    return out;
}

} // namespace camsim
