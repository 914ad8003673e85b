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

// JSON mapping for every domain type. Keys are emitted in sorted order and
// doubles in shortest round-trip form, so equal values serialize to equal
// bytes. Field names and units are documented in docs/.

#pragma once

#include "camsim/linkmodel.hpp"
#include "camsim/report.hpp"
#include "camsim/topology.hpp"

#include <json.hpp>

#include <string>

namespace camsim {

using Json = nlohmann::json;

Json to_json(const CameraSpec& cam);
Json to_json(const LinkSpec& link);
Json to_json(const OverheadModel& overhead);
Json to_json(const ClockModel& clock);
Json to_json(const DeadlineSpec& d);
Json to_json(const ProcessingTime& p);
Json to_json(const StageSpec& s);
Json to_json(const Topology& t);
Json to_json(const SimConfig& cfg);
Json to_json(const DeadlineViolation& v);
Json to_json(const FrameRecord& r);
Json to_json(const Aggregates& a);
Json to_json(const SimReport& r);

// Parsers throw ConfigError on missing or mistyped fields. Optional fields
// fall back to the C++ defaults.
CameraSpec camera_from_json(const Json& j);
LinkSpec link_from_json(const Json& j);
OverheadModel overhead_from_json(const Json& j);
ClockModel clock_from_json(const Json& j);
DeadlineSpec deadlines_from_json(const Json& j);
ProcessingTime processing_from_json(const Json& j);
StageSpec stage_from_json(const Json& j);
Topology topology_from_json(const Json& j);
SimConfig config_from_json(const Json& j);
DeadlineViolation violation_from_json(const Json& j);
FrameRecord frame_from_json(const Json& j);
Aggregates aggregates_from_json(const Json& j);
SimReport report_from_json(const Json& j);

/// Compact canonical text.
std::string canonical(const Json& j);

/// FNV-1a 64 of the canonical topology text, as 16 hex digits.
std::string topology_digest(const Topology& t);

inline constexpr const char* kReportSchema = "camsim.report/1";
inline constexpr const char* kScenarioSchema = "camsim.scenario/1";

} // namespace camsim
