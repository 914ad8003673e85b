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

#include "camsim/metrics.hpp"

#include "camsim/json_io.hpp"
#include "camsim/simcore.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace camsim {

std::string format_double(double v) {
    char buf[64];
    if (v == std::trunc(v) && std::fabs(v) < 1e15) {
        std::snprintf(buf, sizeof buf, "%.0f", v);
        return buf;
    }
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::uint64_t nearest_rank(std::span<const std::uint64_t> sorted, unsigned percent) {
    if (sorted.empty())
        return 0;
    std::size_t n = sorted.size();
    std::size_t rank = (static_cast<std::size_t>(percent) * n + 99) / 100;
    rank = std::clamp<std::size_t>(rank, 1, n);
    return sorted[rank - 1];
}

Aggregates summarize(std::span<const FrameRecord> frames, const Topology& t,
                     std::optional<SimTime> horizon) {
    Aggregates a;
    a.copy_count = copy_count(t);
    a.high_water_bytes.assign(t.stages.size(), 0.0);
    if (frames.empty())
        return a;

    a.empty = false;
    a.generated = frames.size();
    std::vector<std::uint64_t> latencies;
    double delivered_bits = 0.0;
    SimTime elapsed;
    for (const auto& f : frames) {
        switch (f.disposition) {
        case Disposition::Delivered:
            ++a.delivered;
            delivered_bits += static_cast<double>(f.size_bytes) * 8.0;
            latencies.push_back(*f.latency_ns());
            break;
        case Disposition::Dropped:
            ++a.dropped;
            if (f.drop && (!a.first_drop_ns || f.drop->at.ns < *a.first_drop_ns))
                a.first_drop_ns = f.drop->at.ns;
            break;
        case Disposition::InFlight:
            ++a.in_flight;
            break;
        }
        elapsed = max(elapsed, f.completed_at());
    }
    a.elapsed_ns = elapsed.ns;
    a.throughput_gbps = elapsed.ns > 0 ? delivered_bits / static_cast<double>(elapsed.ns) : 0.0;

    if (!latencies.empty()) {
        std::sort(latencies.begin(), latencies.end());
        a.latency_min_ns = latencies.front();
        a.latency_max_ns = latencies.back();
        a.latency_p50_ns = nearest_rank(latencies, 50);
        a.latency_p99_ns = nearest_rank(latencies, 99);
        double sum = 0.0;
        for (auto l : latencies)
            sum += static_cast<double>(l);
        a.latency_mean_ns = sum / static_cast<double>(latencies.size());
    }

    for (std::size_t k = 0; k < t.stages.size(); ++k) {
        for (const auto& [time, bytes] : occupancy_profile(frames, t, k, horizon))
            a.high_water_bytes[k] = std::max(a.high_water_bytes[k], bytes);
    }

    a.timestamp_rms_ns = timestamp_rms(frames);
    a.violations = check_deadlines(frames, t.deadlines);
    return a;
}

std::vector<DeadlineViolation> check_deadlines(const SimReport& report, const DeadlineSpec& d) {
    return check_deadlines(std::span<const FrameRecord>(report.frames), d);
}

const DeltaRow& DeltaTable::row(std::string_view metric) const {
    for (const auto& r : rows)
        if (r.metric == metric)
            return r;
    throw std::out_of_range("no metric '" + std::string(metric) + "' in delta table");
}

namespace {

std::size_t count_kind(const Aggregates& a, ViolationKind kind) {
    return static_cast<std::size_t>(std::count_if(a.violations.begin(), a.violations.end(),
                                                  [&](const auto& v) { return v.kind == kind; }));
}

std::vector<std::pair<std::string, double>> comparable_metrics(const Aggregates& a) {
    auto d = [](auto v) { return static_cast<double>(v); };
    return {
        {"latency_min_ns", d(a.latency_min_ns)},
        {"latency_mean_ns", a.latency_mean_ns},
        {"latency_p50_ns", d(a.latency_p50_ns)},
        {"latency_p99_ns", d(a.latency_p99_ns)},
        {"latency_max_ns", d(a.latency_max_ns)},
        {"throughput_gbps", a.throughput_gbps},
        {"delivered", d(a.delivered)},
        {"dropped", d(a.dropped)},
        {"in_flight", d(a.in_flight)},
        {"copy_count", d(a.copy_count)},
        {"safety_violations", d(count_kind(a, ViolationKind::Safety))},
        {"control_violations", d(count_kind(a, ViolationKind::Control))},
        {"timestamp_violations", d(count_kind(a, ViolationKind::Timestamp))},
        {"timestamp_rms_ns", a.timestamp_rms_ns},
    };
}

} // namespace

DeltaTable compare(const SimReport& a, const SimReport& b) {
    if (!(a.topology.camera == b.topology.camera))
        throw IncomparableRuns("runs '" + a.scenario + "' and '" + b.scenario +
                               "' use different cameras");
    if (a.aggregates.generated != b.aggregates.generated)
        throw IncomparableRuns("runs '" + a.scenario + "' and '" + b.scenario +
                               "' generated different frame counts (" +
                               std::to_string(a.aggregates.generated) + " vs " +
                               std::to_string(b.aggregates.generated) + ")");
    DeltaTable t{a.scenario, b.scenario, {}};
    auto ma = comparable_metrics(a.aggregates);
    auto mb = comparable_metrics(b.aggregates);
    for (std::size_t i = 0; i < ma.size(); ++i)
        t.rows.push_back({ma[i].first, ma[i].second, mb[i].second, mb[i].second - ma[i].second});
    return t;
}

std::string export_structured(const SimReport& r) { return to_json(r).dump(1) + "\n"; }

SimReport import_structured(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("report is not valid JSON: ") + e.what());
    }
    return report_from_json(j);
}

namespace {

constexpr const char* kFrameColumns[] = {
    "frame_id",    "size_bytes", "generated_at_ns", "camera_timestamp_ns", "timestamp_clamped",
    "disposition", "drop_stage", "drop_reason",     "drop_at_ns",          "latency_ns",
};

std::vector<std::string> split(const std::string& line, char sep = ',') {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

template <typename T>
T parse_number(const std::string& s, const char* what) {
    T v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ConfigError(std::string("bad ") + what + " value '" + s + "'");
    return v;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line != "\r")
            out.push_back(line);
    return out;
}

} // namespace

TabularExport export_tabular(const SimReport& r) {
    std::size_t nstages = r.topology.stages.size();
    std::ostringstream f;
    for (std::size_t i = 0; i < std::size(kFrameColumns); ++i)
        f << (i ? "," : "") << kFrameColumns[i];
    for (std::size_t k = 0; k < nstages; ++k)
        f << ",s" << k << "_first_in_ns,s" << k << "_last_in_ns,s" << k << "_first_out_ns,s" << k
          << "_last_out_ns";
    f << "\n";
    for (const auto& fr : r.frames) {
        f << fr.frame_id << ',' << fr.size_bytes << ',' << fr.generated_at.ns << ','
          << fr.camera_timestamp.ns << ',' << (fr.timestamp_clamped ? 1 : 0) << ','
          << to_string(fr.disposition) << ',';
        if (fr.drop)
            f << fr.drop->stage << ',' << to_string(fr.drop->reason) << ',' << fr.drop->at.ns;
        else
            f << ",,";
        f << ',';
        if (auto l = fr.latency_ns())
            f << *l;
        for (std::size_t k = 0; k < nstages; ++k) {
            if (k < fr.stages.size()) {
                const auto& s = fr.stages[k];
                f << ',' << s.first_in.ns << ',' << s.last_in.ns << ',' << s.first_out.ns << ','
                  << s.last_out.ns;
            } else {
                f << ",,,,";
            }
        }
        f << "\n";
    }

    const auto& a = r.aggregates;
    std::ostringstream g;
    g << "key,value\n";
    g << "empty," << (a.empty ? 1 : 0) << "\n";
    g << "generated," << a.generated << "\n";
    g << "delivered," << a.delivered << "\n";
    g << "dropped," << a.dropped << "\n";
    g << "in_flight," << a.in_flight << "\n";
    g << "elapsed_ns," << a.elapsed_ns << "\n";
    g << "throughput_gbps," << format_double(a.throughput_gbps) << "\n";
    g << "latency_min_ns," << a.latency_min_ns << "\n";
    g << "latency_mean_ns," << format_double(a.latency_mean_ns) << "\n";
    g << "latency_p50_ns," << a.latency_p50_ns << "\n";
    g << "latency_p99_ns," << a.latency_p99_ns << "\n";
    g << "latency_max_ns," << a.latency_max_ns << "\n";
    g << "copy_count," << a.copy_count << "\n";
    for (std::size_t k = 0; k < a.high_water_bytes.size(); ++k)
        g << "high_water_bytes_s" << k << "," << format_double(a.high_water_bytes[k]) << "\n";
    g << "first_drop_ns," << (a.first_drop_ns ? std::to_string(*a.first_drop_ns) : "") << "\n";
    g << "timestamp_rms_ns," << format_double(a.timestamp_rms_ns) << "\n";
    for (const auto& v : a.violations)
        g << "violation," << to_string(v.kind) << ';'
          << (v.frame_id ? std::to_string(*v.frame_id) : "") << ';' << format_double(v.measured_ns)
          << ';' << format_double(v.limit_ns) << "\n";
    return {f.str(), g.str()};
}

std::vector<FrameRecord> import_tabular_frames(const std::string& csv) {
    auto lines = lines_of(csv);
    if (lines.empty())
        throw ConfigError("frame table has no header");
    auto header = split(lines[0]);
    std::size_t fixed = std::size(kFrameColumns);
    if (header.size() < fixed || (header.size() - fixed) % 4 != 0)
        throw ConfigError("frame table header has unexpected columns");
    for (std::size_t i = 0; i < fixed; ++i)
        if (header[i] != kFrameColumns[i])
            throw ConfigError("frame table column " + std::to_string(i) + " should be '" +
                              kFrameColumns[i] + "'");
    std::size_t nstages = (header.size() - fixed) / 4;

    std::vector<FrameRecord> out;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        auto c = split(lines[li]);
        if (c.size() != header.size())
            throw ConfigError("frame table row " + std::to_string(li) + " has " +
                              std::to_string(c.size()) + " fields");
        FrameRecord r;
        r.frame_id = parse_number<std::uint64_t>(c[0], "frame_id");
        r.size_bytes = parse_number<std::uint64_t>(c[1], "size_bytes");
        r.generated_at = SimTime{parse_number<std::uint64_t>(c[2], "generated_at_ns")};
        r.camera_timestamp = SimTime{parse_number<std::uint64_t>(c[3], "camera_timestamp_ns")};
        r.timestamp_clamped = c[4] == "1";
        r.disposition = parse_disposition(c[5]);
        if (!c[6].empty())
            r.drop = DropInfo{parse_number<std::size_t>(c[6], "drop_stage"),
                              parse_drop_reason(c[7]),
                              SimTime{parse_number<std::uint64_t>(c[8], "drop_at_ns")}};
        for (std::size_t k = 0; k < nstages; ++k) {
            std::size_t base = fixed + 4 * k;
            if (c[base].empty())
                break;
            auto at = [&](std::size_t i) {
                return SimTime{parse_number<std::uint64_t>(c[base + i], "stage time")};
            };
            r.stages.push_back({at(0), at(1), at(2), at(3)});
        }
        out.push_back(std::move(r));
    }
    return out;
}

Aggregates import_tabular_aggregates(const std::string& csv) {
    auto lines = lines_of(csv);
    if (lines.empty() || lines[0] != "key,value")
        throw ConfigError("aggregates table must start with 'key,value'");
    Aggregates a;
    std::map<std::size_t, double> high_water;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto pos = lines[i].find(',');
        if (pos == std::string::npos)
            throw ConfigError("aggregates row without value: " + lines[i]);
        std::string key = lines[i].substr(0, pos);
        std::string val = lines[i].substr(pos + 1);
        auto u64 = [&] { return parse_number<std::uint64_t>(val, key.c_str()); };
        auto dbl = [&] { return parse_number<double>(val, key.c_str()); };
        if (key == "empty")
            a.empty = val == "1";
        else if (key == "generated")
            a.generated = u64();
        else if (key == "delivered")
            a.delivered = u64();
        else if (key == "dropped")
            a.dropped = u64();
        else if (key == "in_flight")
            a.in_flight = u64();
        else if (key == "elapsed_ns")
            a.elapsed_ns = u64();
        else if (key == "throughput_gbps")
            a.throughput_gbps = dbl();
        else if (key == "latency_min_ns")
            a.latency_min_ns = u64();
        else if (key == "latency_mean_ns")
            a.latency_mean_ns = dbl();
        else if (key == "latency_p50_ns")
            a.latency_p50_ns = u64();
        else if (key == "latency_p99_ns")
            a.latency_p99_ns = u64();
        else if (key == "latency_max_ns")
            a.latency_max_ns = u64();
        else if (key == "copy_count")
            a.copy_count = u64();
        else if (key.rfind("high_water_bytes_s", 0) == 0)
            high_water[parse_number<std::size_t>(key.substr(18), "stage")] = dbl();
        else if (key == "first_drop_ns") {
            if (!val.empty())
                a.first_drop_ns = u64();
        } else if (key == "timestamp_rms_ns")
            a.timestamp_rms_ns = dbl();
        else if (key == "violation") {
            auto p = split(val, ';');
            if (p.size() != 4)
                throw ConfigError("malformed violation row: " + val);
            DeadlineViolation v;
            v.kind = parse_violation_kind(p[0]);
            if (!p[1].empty())
                v.frame_id = parse_number<std::uint64_t>(p[1], "frame_id");
            v.measured_ns = parse_number<double>(p[2], "measured_ns");
            v.limit_ns = parse_number<double>(p[3], "limit_ns");
            a.violations.push_back(v);
        } else
            throw ConfigError("unknown aggregate '" + key + "'");
    }
    for (const auto& [k, v] : high_water) {
        if (k != a.high_water_bytes.size())
            throw ConfigError("high-water stages are not contiguous");
        a.high_water_bytes.push_back(v);
    }
    return a;
}

namespace {

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open '" + p.string() + "' for writing");
    out << text;
    out.flush();
    if (!out)
        throw IoError("failed writing '" + p.string() + "'");
}

} // namespace

void write_report(const SimReport& r, const std::filesystem::path& dir,
                  std::optional<ExportFormat> only) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw IoError("cannot create output directory '" + dir.string() + "'");
    if (!only || *only == ExportFormat::Structured)
        write_file(dir / "report.json", export_structured(r));
    if (!only || *only == ExportFormat::Tabular) {
        auto tab = export_tabular(r);
        write_file(dir / "frames.csv", tab.frames_csv);
        write_file(dir / "aggregates.csv", tab.aggregates_csv);
    }
}

SimReport read_report(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in)
        throw IoError("cannot read '" + file.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return import_structured(ss.str());
}

std::string render_delta_table(const DeltaTable& t) {
    std::ostringstream os;
    os << "a: " << t.scenario_a << "\nb: " << t.scenario_b << "\n";
    os << std::left << std::setw(22) << "metric" << std::right << std::setw(22) << "a"
       << std::setw(22) << "b" << std::setw(22) << "delta (b-a)" << "\n";
    for (const auto& r : t.rows)
        os << std::left << std::setw(22) << r.metric << std::right << std::setw(22)
           << format_double(r.a) << std::setw(22) << format_double(r.b) << std::setw(22)
           << format_double(r.delta) << "\n";
    return os.str();
}

std::string delta_table_json(const DeltaTable& t) {
    Json rows = Json::array();
    for (const auto& r : t.rows)
        rows.push_back(Json{{"metric", r.metric}, {"a", r.a}, {"b", r.b}, {"delta", r.delta}});
    Json j{{"a", t.scenario_a}, {"b", t.scenario_b}, {"rows", rows}};
    return j.dump(1) + "\n";
}

std::string delta_table_csv(const DeltaTable& t) {
    std::ostringstream os;
    os << "metric,a,b,delta\n";
    for (const auto& r : t.rows)
        os << r.metric << ',' << format_double(r.a) << ',' << format_double(r.b) << ','
           << format_double(r.delta) << "\n";
    return os.str();
}

std::vector<BudgetRow> budget_table(std::span<const int> generations, std::span<const int> lanes,
                                    double protocol_efficiency, bool with_presets) {
    std::vector<BudgetRow> rows;
    for (int g : generations) {
        for (int n : lanes) {
            auto link = LinkSpec::pcie(g, n, protocol_efficiency);
            rows.push_back({link_name(link), g, n, protocol_efficiency, effective_link_rate(link)});
        }
    }
    if (with_presets) {
        for (const auto& link : interface_presets(protocol_efficiency))
            rows.push_back({link_name(link), 0, 0, protocol_efficiency, effective_link_rate(link)});
    }
    return rows;
}

std::string render_budget_table(std::span<const BudgetRow> rows) {
    std::ostringstream os;
    os << std::left << std::setw(26) << "interface" << std::right << std::setw(12) << "efficiency"
       << std::setw(14) << "rate_gbps" << "\n";
    for (const auto& r : rows) {
        char rate[32];
        char eff[32];
        std::snprintf(rate, sizeof rate, "%.3f", r.rate_gbps);
        std::snprintf(eff, sizeof eff, "%.4f", r.protocol_efficiency);
        os << std::left << std::setw(26) << r.interface << std::right << std::setw(12) << eff
           << std::setw(14) << rate << "\n";
    }
    return os.str();
}

std::string budget_table_csv(std::span<const BudgetRow> rows) {
    std::ostringstream os;
    os << "interface,generation,lanes,protocol_efficiency,rate_gbps\n";
    for (const auto& r : rows)
        os << r.interface << ',' << r.generation << ',' << r.lanes << ','
           << format_double(r.protocol_efficiency) << ',' << format_double(r.rate_gbps) << "\n";
    return os.str();
}

std::string budget_table_json(std::span<const BudgetRow> rows) {
    Json arr = Json::array();
    for (const auto& r : rows)
        arr.push_back(Json{{"interface", r.interface},
                           {"generation", r.generation},
                           {"lanes", r.lanes},
                           {"protocol_efficiency", r.protocol_efficiency},
                           {"rate_gbps", r.rate_gbps}});
    return Json{{"rows", arr}}.dump(1) + "\n";
}

} // namespace camsim
