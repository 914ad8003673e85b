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


#include "oracles.hpp"

#include "camsim/json_io.hpp"
#include "camsim/metrics.hpp"
#include "camsim/simcore.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace camsim;

namespace {

const CameraSpec kCam{1'000'000, 8, 1000.0};

DeadlineSpec relaxed() { return {10'000'000, 20'000'000, 50.0}; }

SimReport direct_run(std::uint64_t n, int lanes = 1) {
    return run(build_direct(kCam, LinkSpec::pcie(3, lanes), {.deadlines = relaxed()}),
               SimConfig::frames(n, 1), "direct");
}

SimReport classic_run(std::uint64_t n) {
    return run(build_classic(kCam, LinkSpec::camera_link(CameraLinkConfig::Full),
                             LinkSpec::pcie(3, 1), 64 * MiB, {.deadlines = relaxed()}),
               SimConfig::frames(n, 1), "classic");
}

SimReport busy_run() {
    ArchitectureOptions o;
    o.processing = ProcessingTime::normal(300'000, 200'000);
    o.deadlines = {400'000, 20'000'000, 5.0};
    auto t = build_direct(kCam, LinkSpec::pcie(3, 2), o);
    auto cfg = SimConfig::frames(60, 77);
    cfg.clock.jitter_sigma_ns = 10.0;
    return run(t, cfg, "busy");
}

FrameRecord with_latency(std::uint64_t id, std::uint64_t l) {
    FrameRecord f;
    f.frame_id = id;
    f.size_bytes = 1000;
    f.stages = {{}, {SimTime{0}, SimTime{0}, SimTime{l}, SimTime{l}}};
    f.disposition = Disposition::Delivered;
    return f;
}

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("camsim-metrics-" + name);
    std::filesystem::remove_all(p);
    return p;
}

} // namespace

TEST_SUITE("metrics") {

TEST_CASE("nearest-rank percentiles") {
    std::vector<std::uint64_t> v{1, 2, 3, 4};
    CHECK(nearest_rank(v, 50) == 2);
    CHECK(nearest_rank(v, 99) == 4);
    CHECK(nearest_rank(v, 0) == 1);
    CHECK(nearest_rank(v, 100) == 4);
    CHECK(nearest_rank(std::vector<std::uint64_t>{}, 50) == 0);
    std::vector<std::uint64_t> big;
    for (std::uint64_t i = 1; i <= 1000; ++i)
        big.push_back(i * 3);
    for (unsigned p : {1u, 10u, 50u, 90u, 99u})
        CHECK(nearest_rank(big, p) == oracle::nearest_rank(big, p));
}

TEST_CASE("summarize a hand-built frame list") {
    Topology t = build_direct(kCam, LinkSpec::pcie(3, 1), {.deadlines = relaxed()});
    std::vector<FrameRecord> frames;
    for (std::uint64_t i = 0; i < 4; ++i)
        frames.push_back(with_latency(i, i + 1));
    auto a = summarize(frames, t);
    CHECK_FALSE(a.empty);
    CHECK(a.latency_min_ns == 1);
    CHECK(a.latency_p50_ns == 2);
    CHECK(a.latency_p99_ns == 4);
    CHECK(a.latency_max_ns == 4);
    CHECK(a.latency_mean_ns == 2.5);
    CHECK(a.delivered == 4);
    CHECK(a.elapsed_ns == 4);
    CHECK(a.throughput_gbps == doctest::Approx(4 * 8000.0 / 4));
}

TEST_CASE("singleton and empty summaries") {
    auto one = direct_run(1).aggregates;
    CHECK(one.latency_min_ns == one.latency_p50_ns);
    CHECK(one.latency_p50_ns == one.latency_p99_ns);
    CHECK(one.latency_p99_ns == one.latency_max_ns);

    Topology t = build_direct(kCam, LinkSpec::pcie(3, 1));
    auto none = summarize(std::vector<FrameRecord>{}, t);
    CHECK(none.empty);
    CHECK(none.generated == 0);
    CHECK(none.throughput_gbps == 0.0);
    CHECK(none.violations.empty());
    CHECK(none.copy_count == 2);
}

TEST_CASE("throughput is delivered bits over elapsed time") {
    auto r = busy_run();
    double bits = 0;
    std::uint64_t elapsed = 0;
    for (const auto& f : r.frames) {
        if (f.disposition == Disposition::Delivered)
            bits += 8.0 * static_cast<double>(f.size_bytes);
        elapsed = std::max(elapsed, f.completed_at().ns);
    }
    CHECK(std::abs(r.aggregates.throughput_gbps - bits / static_cast<double>(elapsed)) <= 1e-9);
}

TEST_CASE("violations in a noisy run") {
    auto r = busy_run();
    const auto& v = r.aggregates.violations;
    REQUIRE_FALSE(v.empty());
    CHECK(v.back().kind == ViolationKind::Timestamp);
    CHECK(v == check_deadlines(r, r.topology.deadlines));
}

TEST_CASE("classic against direct") {
    auto d = compare(classic_run(1), direct_run(1));
    auto hop = oracle::serialize_ns(1'000'000, oracle::camera_link(84));
    CHECK(d.row("latency_p50_ns").delta == -static_cast<double>(hop));
    CHECK(d.row("latency_max_ns").delta == -1'120'449.0);
    CHECK(d.row("copy_count").delta == -1.0);
    CHECK(d.row("copy_count").a == 3.0);
    CHECK(d.row("copy_count").b == 2.0);
    CHECK(d.scenario_a == "classic");
    CHECK_THROWS_AS(d.row("nope"), std::out_of_range);
}

TEST_CASE("compare is zero on itself and antisymmetric") {
    auto a = busy_run();
    auto b = direct_run(60, 2);
    for (const auto& row : compare(a, a).rows)
        CHECK(row.delta == 0.0);
    auto ab = compare(a, b);
    auto ba = compare(b, a);
    REQUIRE(ab.rows.size() == ba.rows.size());
    for (std::size_t i = 0; i < ab.rows.size(); ++i)
        CHECK(ab.rows[i].delta == -ba.rows[i].delta);
}

TEST_CASE("incomparable runs") {
    CHECK_THROWS_AS(compare(direct_run(1), direct_run(2)), IncomparableRuns);
    auto other = run(build_direct({2'000'000, 8, 1000.0}, LinkSpec::pcie(3, 4),
                                  {.deadlines = relaxed()}),
                     SimConfig::frames(1, 1));
    CHECK_THROWS_AS(compare(direct_run(1), other), IncomparableRuns);
}

TEST_CASE("structured export round-trips") {
    for (const auto& r : {busy_run(), classic_run(3), direct_run(0)}) {
        auto text = export_structured(r);
        auto back = import_structured(text);
        CHECK(back == r);
        CHECK(export_structured(back) == text);
    }
    CHECK_THROWS_AS(import_structured("{"), ConfigError);
    CHECK_THROWS_AS(import_structured("{}"), ConfigError);
}

TEST_CASE("seeds above 2^63 survive a round-trip") {
    auto r = direct_run(2);
    r.config.seed = ~0ULL;
    CHECK(import_structured(export_structured(r)).config.seed == ~0ULL);
    auto j = to_json(r.config);
    j["seed"] = -1;
    CHECK_THROWS_AS(config_from_json(j), ConfigError);
}

TEST_CASE("tabular export") {
    auto r = busy_run();
    auto tab = export_tabular(r);
    std::size_t lines = std::count(tab.frames_csv.begin(), tab.frames_csv.end(), '\n');
    CHECK(lines == r.frames.size() + 1);
    CHECK(import_tabular_frames(tab.frames_csv) == r.frames);
    CHECK(import_tabular_aggregates(tab.aggregates_csv) == r.aggregates);
    CHECK(tab.frames_csv.rfind("frame_id,size_bytes,", 0) == 0);
    CHECK_THROWS_AS(import_tabular_frames("bogus\n1\n"), ConfigError);
    CHECK_THROWS_AS(import_tabular_aggregates("key,value\nmystery,1\n"), ConfigError);
}

TEST_CASE("tabular export with drops") {
    Topology t;
    t.camera = kCam;
    t.deadlines = relaxed();
    t.stages = {StageSpec::sensor(), StageSpec::link_stage(LinkSpec::pcie(3, 1)),
                StageSpec::host_memory(), StageSpec::processor(ProcessingTime::fixed(0))};
    auto r = run(t, SimConfig::frames(4, 1));
    REQUIRE(r.aggregates.dropped > 0);
    auto tab = export_tabular(r);
    CHECK(import_tabular_frames(tab.frames_csv) == r.frames);
    CHECK(import_tabular_aggregates(tab.aggregates_csv) == r.aggregates);
}

TEST_CASE("report files") {
    auto r = busy_run();
    auto dir = scratch("files");
    write_report(r, dir);
    CHECK(std::filesystem::exists(dir / "report.json"));
    CHECK(std::filesystem::exists(dir / "frames.csv"));
    CHECK(std::filesystem::exists(dir / "aggregates.csv"));
    CHECK(read_report(dir / "report.json") == r);

    auto only = scratch("only");
    write_report(r, only, ExportFormat::Tabular);
    CHECK_FALSE(std::filesystem::exists(only / "report.json"));
    CHECK(std::filesystem::exists(only / "frames.csv"));

    auto blocker = scratch("blocker");
    std::ofstream(blocker) << "x";
    CHECK_THROWS_AS(write_report(r, blocker / "sub"), IoError);
    CHECK_THROWS_AS(read_report(dir / "missing.json"), IoError);
    std::filesystem::remove_all(dir);
    std::filesystem::remove_all(only);
    std::filesystem::remove_all(blocker);
}

TEST_CASE("delta table renderings") {
    auto d = compare(classic_run(1), direct_run(1));
    auto text = render_delta_table(d);
    CHECK(text.find("copy_count") != std::string::npos);
    CHECK(text.find("-1120449") != std::string::npos);
    auto csv = delta_table_csv(d);
    CHECK(csv.rfind("metric,a,b,delta\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(d.rows.size() + 1));
    auto j = Json::parse(delta_table_json(d));
    CHECK(j["rows"].size() == d.rows.size());
}

TEST_CASE("budget table") {
    int gens[] = {1, 2, 3, 4, 5};
    auto rows = budget_table(gens, kLaneWidths, 1.0, false);
    CHECK(rows.size() == 25);
    for (const auto& r : rows) {
        CHECK(r.rate_gbps == effective_link_rate(LinkSpec::pcie(r.generation, r.lanes)));
        auto x1 = effective_link_rate(LinkSpec::pcie(r.generation, 1));
        CHECK(std::abs(r.rate_gbps - r.lanes * x1) <= kRateTolerance);
    }
    auto find = [&](int g, int n) {
        return std::find_if(rows.begin(), rows.end(), [&](const BudgetRow& r) {
            return r.generation == g && r.lanes == n;
        })->rate_gbps;
    };
    CHECK(find(4, 1) == doctest::Approx(15.754).epsilon(1e-4));
    CHECK(find(5, 1) == doctest::Approx(31.508).epsilon(1e-4));

    auto with = budget_table(gens, kLaneWidths, 0.9, true);
    CHECK(with.size() == 25 + interface_presets().size());
    CHECK(with.back().interface == "USB3");
    CHECK(with.back().rate_gbps == doctest::Approx(4.5));
    CHECK(render_budget_table(with).find("CameraLink Full") != std::string::npos);
    CHECK(Json::parse(budget_table_json(rows))["rows"].size() == 25);
    CHECK(budget_table_csv(rows).find("PCIe gen3 x1,3,1,1,") != std::string::npos);
}

TEST_CASE("double formatting") {
    CHECK(format_double(100000.0) == "100000");
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(7.876923076923077) == "7.876923076923077");
    CHECK(format_double(0.1) == "0.1");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

}
