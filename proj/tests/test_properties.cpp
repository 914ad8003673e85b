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


#include "generators.hpp"
#include "oracles.hpp"

#include "camsim/json_io.hpp"
#include "camsim/metrics.hpp"

#include <doctest.h>

#include <algorithm>

using namespace camsim;

namespace {

constexpr int kCases = 1000;

/// Link server intervals of delivered frames, per link stage.
void check_link_capacity(const SimReport& r) {
    const auto& st = r.topology.stages;
    std::uint64_t elapsed = r.aggregates.elapsed_ns;
    for (std::size_t k = 0; k < st.size(); ++k) {
        if (st[k].kind != StageKind::Link)
            continue;
        std::vector<StageTimes> busy;
        for (const auto& f : r.frames)
            if (f.disposition == Disposition::Delivered)
                busy.push_back(f.stages[k]);
        std::uint64_t total = 0;
        for (std::size_t i = 0; i < busy.size(); ++i) {
            total += busy[i].last_out.ns - busy[i].first_out.ns;
            if (i > 0)
                CHECK(busy[i - 1].last_out <= busy[i].first_out);
        }
        CHECK(total <= elapsed);
    }
}

void check_causality(const FrameRecord& f, const Topology& t) {
    REQUIRE_FALSE(f.stages.empty());
    CHECK(f.generated_at <= f.stages.front().first_in);
    for (std::size_t k = 0; k < f.stages.size(); ++k) {
        const auto& s = f.stages[k];
        bool refused = f.drop && f.drop->stage == k;
        CHECK(s.first_in <= s.last_in);
        CHECK(s.first_out <= s.last_out);
        CHECK(s.first_in <= s.first_out);
        if (!refused)
            CHECK(s.ingress() <= s.egress());
        if (k + 1 < f.stages.size()) {
            const auto& n = f.stages[k + 1];
            CHECK(s.egress() <= n.ingress());
            CHECK(s.first_out <= n.first_in);
        }
    }
    if (f.disposition == Disposition::Delivered) {
        CHECK(f.stages.size() == t.stages.size());
        CHECK_FALSE(f.drop.has_value());
    }
    if (f.disposition == Disposition::Dropped) {
        REQUIRE(f.drop.has_value());
        CHECK(f.drop->stage + 1 == f.stages.size());
        CHECK(f.drop->at >= f.stages.back().first_in);
    }
}

} // namespace

TEST_SUITE("properties") {

TEST_CASE("frame conservation") {
    gen::Rng rng(101);
    for (int i = 0; i < kCases; ++i) {
        auto t = gen::topology(rng);
        auto cfg = gen::config(rng);
        auto r = run(t, cfg);
        const auto& a = r.aggregates;
        CHECK(a.generated == r.frames.size());
        CHECK(a.generated == a.delivered + a.dropped + a.in_flight);
        if (cfg.n_frames) {
            CHECK(a.generated == *cfg.n_frames);
            CHECK(a.in_flight == 0);
        }
        for (std::size_t id = 0; id < r.frames.size(); ++id)
            CHECK(r.frames[id].frame_id == id);
    }
}

TEST_CASE("per-frame timestamp causality") {
    gen::Rng rng(202);
    for (int i = 0; i < kCases; ++i) {
        auto t = gen::topology(rng);
        auto r = run(t, gen::config(rng));
        for (const auto& f : r.frames)
            check_causality(f, t);
    }
}

TEST_CASE("link and buffer capacity") {
    gen::Rng rng(303);
    for (int i = 0; i < kCases; ++i) {
        auto t = gen::topology(rng);
        auto r = run(t, gen::config(rng));
        check_link_capacity(r);
        for (std::size_t k = 0; k < t.stages.size(); ++k) {
            double peak = 0;
            for (auto& [at, bytes] : occupancy_trace(r, k))
                peak = std::max(peak, bytes);
            CHECK(peak == r.aggregates.high_water_bytes[k]);
            if (t.stages[k].has_capacity())
                CHECK(peak <= static_cast<double>(t.stages[k].capacity_bytes) + 1e-6);
        }
    }
}

TEST_CASE("lane-scaling linearity") {
    gen::Rng rng(404);
    for (int i = 0; i < kCases; ++i) {
        int g = static_cast<int>(rng.between(1, 5));
        double eff = rng.coin() ? 1.0 : rng.real(0.01, 1.0);
        double x1 = effective_link_rate(LinkSpec::pcie(g, 1, eff));
        double prev = 0;
        for (int n : kLaneWidths) {
            double rate = effective_link_rate(LinkSpec::pcie(g, n, eff));
            CHECK(std::abs(rate - n * x1) <= kRateTolerance);
            CHECK(rate >= prev);
            prev = rate;
            if (g < 5)
                CHECK(effective_link_rate(LinkSpec::pcie(g + 1, n, eff)) >= rate);
        }
        if (eff == 1.0)
            CHECK(std::abs(x1 - oracle::pcie_lane(g).gbps()) <= kRateTolerance);
    }
}

TEST_CASE("stream rate linearity and feasibility sign") {
    gen::Rng rng(505);
    for (int i = 0; i < kCases; ++i) {
        auto cam = gen::camera(rng);
        double base = camera_stream_rate(cam);
        CHECK(base == doctest::Approx(static_cast<double>(cam.resolution_pixels) * cam.bit_depth *
                                      cam.frame_rate / 1e9));
        auto k = static_cast<double>(rng.between(2, 6));
        auto scaled = cam;
        scaled.frame_rate *= k;
        CHECK(camera_stream_rate(scaled) == doctest::Approx(k * base));
        scaled = cam;
        scaled.resolution_pixels *= static_cast<std::uint64_t>(k);
        CHECK(camera_stream_rate(scaled) == doctest::Approx(k * base));

        auto l = gen::link(rng);
        auto f = feasible(cam, l);
        double margin = effective_link_rate(l) - base;
        CHECK(f.margin_gbps == doctest::Approx(margin));
        CHECK(f.feasible == (margin >= -kRateTolerance));

        int prev = 17;
        for (int g = 1; g <= 5; ++g) {
            int lanes = 0;
            try {
                lanes = min_lanes(cam, g);
            } catch (const NoFeasibleWidth&) {
                lanes = 32;
            }
            CHECK(lanes <= prev);
            prev = std::min(prev, lanes);
        }
    }
}

TEST_CASE("stage-insertion latency monotonicity") {
    gen::Rng rng(606);
    gen::Options roomy{1000.0, 1000.0, true};
    int compared = 0;
    for (int i = 0; i < kCases; ++i) {
        auto t = gen::topology(rng, roomy);
        auto cfg = SimConfig::frames(rng.between(1, 6), rng.seed());
        auto base = run(t, cfg);
        REQUIRE(base.aggregates.delivered == base.aggregates.generated);

        auto bigger = t;
        auto& st = bigger.stages;
        auto frame = t.camera.frame_bytes();
        std::vector<std::size_t> emitters;
        for (std::size_t k = 1; k + 1 < st.size(); ++k)
            if (st[k].has_capacity())
                emitters.push_back(k);
        if (!emitters.empty() && rng.coin(0.3)) {
            // Extra hop: link plus buffer right after an existing buffer.
            auto at = emitters[rng.between(0, emitters.size() - 1)] + 1;
            st.insert(st.begin() + static_cast<std::ptrdiff_t>(at),
                      {StageSpec::link_stage(gen::link(rng)), gen::emitter(rng, 1000 * frame)});
        } else {
            auto at = rng.between(1, st.size() - 1);
            st.insert(st.begin() + static_cast<std::ptrdiff_t>(at), gen::emitter(rng, 1000 * frame));
        }
        REQUIRE(validate(bigger).empty());
        auto more = run(bigger, cfg);
        REQUIRE(more.aggregates.delivered == more.aggregates.generated);
        for (std::size_t f = 0; f < base.frames.size(); ++f)
            CHECK(*more.frames[f].latency_ns() >= *base.frames[f].latency_ns());
        ++compared;
    }
    CHECK(compared == kCases);
}

TEST_CASE("byte-identical reports under repeated seeded runs") {
    gen::Rng rng(707);
    for (int i = 0; i < kCases; ++i) {
        auto t = gen::topology(rng);
        auto cfg = gen::config(rng);
        auto a = run(t, cfg, "det");
        auto b = run(t, cfg, "det");
        CHECK(export_structured(a) == export_structured(b));
        CHECK(canonical(to_json(a)) == canonical(to_json(b)));
    }
}

TEST_CASE("aggregate recomputation equals exported aggregates") {
    gen::Rng rng(808);
    for (int i = 0; i < kCases; ++i) {
        auto t = gen::topology(rng);
        auto cfg = gen::config(rng);
        auto r = run(t, cfg);
        auto back = import_structured(export_structured(r));
        CHECK(back == r);
        CHECK(summarize(back.frames, back.topology, back.config.duration) == r.aggregates);
        auto tab = export_tabular(r);
        auto frames = import_tabular_frames(tab.frames_csv);
        CHECK(summarize(frames, t, cfg.duration) == import_tabular_aggregates(tab.aggregates_csv));

        const auto& a = r.aggregates;
        if (a.delivered > 0) {
            CHECK(a.latency_min_ns <= a.latency_p50_ns);
            CHECK(a.latency_p50_ns <= a.latency_p99_ns);
            CHECK(a.latency_p99_ns <= a.latency_max_ns);
        }
        std::vector<std::uint64_t> lat;
        for (const auto& f : r.frames)
            if (auto l = f.latency_ns())
                lat.push_back(*l);
        CHECK(a.latency_p50_ns == oracle::nearest_rank(lat, 50));
        CHECK(a.latency_p99_ns == oracle::nearest_rank(lat, 99));
    }
}

TEST_CASE("deadline list is the independent scan") {
    gen::Rng rng(909);
    for (int i = 0; i < kCases; ++i) {
        auto t = gen::topology(rng);
        auto r = run(t, gen::config(rng));
        const auto& d = t.deadlines;
        std::vector<DeadlineViolation> expect;
        std::vector<double> errs;
        for (const auto& f : r.frames) {
            errs.push_back(static_cast<double>(f.timestamp_error_ns()));
            if (f.disposition != Disposition::Delivered)
                continue;
            auto l = f.stages.back().last_out.ns - f.stages.front().last_out.ns;
            if (l > d.safety_deadline_ns)
                expect.push_back({ViolationKind::Safety, f.frame_id, double(l), double(d.safety_deadline_ns)});
            if (l > d.control_deadline_ns)
                expect.push_back({ViolationKind::Control, f.frame_id, double(l), double(d.control_deadline_ns)});
        }
        if (!errs.empty()) {
            double rms = oracle::rms(errs);
            CHECK(r.aggregates.timestamp_rms_ns == doctest::Approx(rms).epsilon(1e-12));
            if (r.aggregates.timestamp_rms_ns > d.timestamp_rms_budget_ns)
                expect.push_back({ViolationKind::Timestamp, std::nullopt,
                                  r.aggregates.timestamp_rms_ns, d.timestamp_rms_budget_ns});
        }
        CHECK(r.aggregates.violations == expect);
    }
}

TEST_CASE("timestamp rms symmetry and scaling") {
    gen::Rng rng(1001);
    for (int i = 0; i < kCases; ++i) {
        auto n = rng.between(1, 40);
        std::vector<FrameRecord> plus;
        std::vector<FrameRecord> minus;
        std::vector<FrameRecord> scaled;
        auto k = rng.between(2, 9);
        for (std::uint64_t j = 0; j < n; ++j) {
            auto e = static_cast<std::int64_t>(rng.between(0, 2000)) - 1000;
            FrameRecord f;
            f.generated_at = SimTime{100'000};
            auto g = f;
            auto h = f;
            f.camera_timestamp = SimTime{static_cast<std::uint64_t>(100'000 + e)};
            g.camera_timestamp = SimTime{static_cast<std::uint64_t>(100'000 - e)};
            h.camera_timestamp = SimTime{static_cast<std::uint64_t>(100'000 + e * static_cast<std::int64_t>(k))};
            plus.push_back(f);
            minus.push_back(g);
            scaled.push_back(h);
        }
        CHECK(timestamp_rms(plus) == timestamp_rms(minus));
        CHECK(timestamp_rms(scaled) == doctest::Approx(static_cast<double>(k) * timestamp_rms(plus)));
    }
}

TEST_CASE("identity clock on random inputs") {
    gen::Rng rng(1102);
    NoiseStream n(5);
    for (int i = 0; i < kCases; ++i) {
        SimTime t{rng.between(0, 1ULL << 50)};
        CHECK(sample_timestamp(ClockModel{}, t, n).value == t);
    }
}

TEST_CASE("architecture builders") {
    gen::Rng rng(1203);
    for (int i = 0; i < kCases; ++i) {
        auto cam = gen::camera(rng);
        auto ci = gen::link(rng);
        auto pcie = LinkSpec::pcie(static_cast<int>(rng.between(1, 5)), 1 << rng.between(0, 4));
        auto classic = build_classic(cam, ci, pcie, rng.between(1, 1ULL << 30));
        auto direct = build_direct(cam, pcie);
        CHECK(validate(classic).empty());
        CHECK(validate(direct).empty());
        CHECK(copy_count(classic) == copy_count(direct) + 1);
        auto grabbers = [](const Topology& t) {
            return std::count_if(t.stages.begin(), t.stages.end(),
                                 [](const auto& s) { return s.kind == StageKind::FrameGrabber; });
        };
        CHECK(grabbers(classic) == 1);
        CHECK(grabbers(direct) == 0);
        CHECK(topology_from_json(to_json(classic)) == classic);
        auto rt = gen::topology(rng);
        CHECK(canonical(to_json(topology_from_json(to_json(rt)))) == canonical(to_json(rt)));
    }
}

TEST_CASE("compare is antisymmetric") {
    gen::Rng rng(1304);
    for (int i = 0; i < kCases / 4; ++i) {
        auto t = gen::topology(rng);
        auto u = gen::topology(rng);
        u.camera = t.camera;
        auto n = rng.between(0, 10);
        auto a = run(t, SimConfig::frames(n, rng.seed()));
        auto b = run(u, SimConfig::frames(n, rng.seed()));
        auto ab = compare(a, b);
        auto ba = compare(b, a);
        for (std::size_t k = 0; k < ab.rows.size(); ++k)
            CHECK(ab.rows[k].delta == -ba.rows[k].delta);
        for (const auto& row : compare(a, a).rows)
            CHECK(row.delta == 0.0);
    }
}

TEST_CASE("budget table agrees with the rate function") {
    gen::Rng rng(1405);
    int gens[] = {1, 2, 3, 4, 5};
    for (int i = 0; i < kCases; ++i) {
        double eff = rng.real(0.01, 1.0);
        for (const auto& row : budget_table(gens, kLaneWidths, eff, true)) {
            (void)row;
        }
        auto rows = budget_table(gens, kLaneWidths, eff, false);
        for (const auto& row : rows)
            CHECK(row.rate_gbps == effective_link_rate(LinkSpec::pcie(row.generation, row.lanes, eff)));
    }
}

}
