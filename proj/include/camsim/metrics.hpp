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

#include "camsim/linkmodel.hpp"
#include "camsim/report.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace camsim {

/// Recomputes every aggregate from the frame list. Percentiles are
/// nearest-rank over delivered-frame latencies. `horizon` clips occupancy
/// (duration-bounded runs).
Aggregates summarize(std::span<const FrameRecord> frames, const Topology& t,
                     std::optional<SimTime> horizon = std::nullopt);

/// Nearest-rank percentile of an ascending sequence; 0 when empty.
std::uint64_t nearest_rank(std::span<const std::uint64_t> sorted, unsigned percent);

std::vector<DeadlineViolation> check_deadlines(const SimReport& report, const DeadlineSpec& d);

struct DeltaRow {
    std::string metric;
    double a = 0.0;
    double b = 0.0;
    /// b - a
    double delta = 0.0;
};

struct DeltaTable {
    std::string scenario_a;
    std::string scenario_b;
    std::vector<DeltaRow> rows;

    const DeltaRow& row(std::string_view metric) const;
};

/// Throws IncomparableRuns unless both runs share camera and frame count.
DeltaTable compare(const SimReport& a, const SimReport& b);

enum class ExportFormat { Structured, Tabular };

struct TabularExport {
    /// Header plus one row per frame.
    std::string frames_csv;
    /// key,value rows.
    std::string aggregates_csv;
};

std::string export_structured(const SimReport& r);
SimReport import_structured(const std::string& text);

TabularExport export_tabular(const SimReport& r);
std::vector<FrameRecord> import_tabular_frames(const std::string& csv);
Aggregates import_tabular_aggregates(const std::string& csv);

/// Writes report.json and/or frames.csv + aggregates.csv into `dir`
/// (created if missing). Throws IoError.
void write_report(const SimReport& r, const std::filesystem::path& dir,
                  std::optional<ExportFormat> only = std::nullopt);

SimReport read_report(const std::filesystem::path& file);

std::string render_delta_table(const DeltaTable& t);
std::string delta_table_json(const DeltaTable& t);
std::string delta_table_csv(const DeltaTable& t);

struct BudgetRow {
    std::string interface;
    /// 0 for non-PCIe presets.
    int generation = 0;
    int lanes = 0;
    double protocol_efficiency = 1.0;
    double rate_gbps = 0.0;
};

/// Effective rate for every (generation, lanes) pair, then every preset when
/// `with_presets` is set.
std::vector<BudgetRow> budget_table(std::span<const int> generations, std::span<const int> lanes,
                                    double protocol_efficiency, bool with_presets);

std::string render_budget_table(std::span<const BudgetRow> rows);
std::string budget_table_csv(std::span<const BudgetRow> rows);
std::string budget_table_json(std::span<const BudgetRow> rows);

/// Shortest round-trip decimal form of a double; whole values print without
/// exponent or fraction.
std::string format_double(double v);

} // namespace camsim
