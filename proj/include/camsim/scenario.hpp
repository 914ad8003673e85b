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
 * @file scenario.hpp
 * @brief Scenario files: camera(s), architecture, links and run settings.
 *
 * The file format is documented in docs/scenario-schema.md.
 */

#pragma once

#include "camsim/json_io.hpp"
#include "camsim/report.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace camsim {

struct Scenario {
    std::string name;
    /// One independent pipeline per camera.
    std::vector<Topology> pipelines;
    SimConfig config;
    /// Camera envelope warnings and the like; never fatal.
    std::vector<std::string> warnings;
};

/// Throws ConfigError. `seed` replaces the file's seed, which is then optional.
Scenario parse_scenario(const Json& j, std::optional<std::uint64_t> seed = std::nullopt);

/// Throws IoError when the file cannot be read, ConfigError when it is
/// malformed.
Scenario load_scenario(const std::filesystem::path& file,
                       std::optional<std::uint64_t> seed = std::nullopt);

struct ScenarioRun {
    /// One report per pipeline, in camera order.
    std::vector<SimReport> reports;
    /// Total camera demand against the summed PCIe capacity. Present for
    /// multi-camera scenarios only.
    std::optional<Json> summary;

    bool has_violations() const;
};

/// Pipeline i of a multi-camera scenario runs with derive_seed(seed, 16 + i);
/// a single pipeline uses the seed as given.
ScenarioRun run_scenario(const Scenario& s);

} // namespace camsim
