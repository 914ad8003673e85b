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
#include "camsim/topology.hpp"

#include <doctest.h>

#include <algorithm>

using namespace camsim;

namespace {

const CameraSpec kCam{1'000'000, 8, 1000.0};
const LinkSpec kClFull = LinkSpec::camera_link(CameraLinkConfig::Full);

std::vector<StageKind> kinds(const Topology& t) {
    std::vector<StageKind> out;
    for (const auto& s : t.stages)
        out.push_back(s.kind);
    return out;
}

bool has_rule(const std::vector<TopologyViolation>& v, std::string_view rule) {
    return std::any_of(v.begin(), v.end(), [&](const auto& x) { return x.rule == rule; });
}

Topology chain(std::vector<StageSpec> stages) {
    Topology t;
    t.name = "hand-built";
    t.camera = kCam;
    t.stages = std::move(stages);
    return t;
}

} // namespace

TEST_SUITE("topology") {

TEST_CASE("classic chain") {
    auto t = build_classic(kCam, kClFull, LinkSpec::pcie(3, 4), 64 * MiB);
    using K = StageKind;
    CHECK(kinds(t) == std::vector<K>{K::Sensor, K::Buffer, K::Link, K::FrameGrabber, K::Link,
                                     K::HostMemory, K::Processor});
    CHECK(validate(t).empty());
    CHECK(copy_count(t) == 3);
    CHECK(t.stages[3].capacity_bytes == 64 * MiB);
    CHECK(t.stages[3].forwarding == Forwarding::StoreAndForward);
    CHECK(t.stages[1].forwarding == Forwarding::StoreAndForward);
    CHECK(t.stages[2].link == kClFull);
}

TEST_CASE("classic rejects a zero-capacity grabber") {
    CHECK_THROWS_AS(build_classic(kCam, kClFull, LinkSpec::pcie(3, 4), 0), InvalidSpec);
}

TEST_CASE("direct chain") {
    auto t = build_direct(kCam, LinkSpec::pcie(3, 2));
    using K = StageKind;
    CHECK(kinds(t) == std::vector<K>{K::Sensor, K::Buffer, K::Link, K::HostMemory, K::Processor});
    CHECK(validate(t).empty());
    CHECK(copy_count(t) == 2);
    CHECK(std::none_of(t.stages.begin(), t.stages.end(),
                       [](const auto& s) { return s.kind == K::FrameGrabber; }));
    CHECK(t.stages[1].forwarding == Forwarding::CutThrough);
}

TEST_CASE("camera buffer forwarding is overridable") {
    ArchitectureOptions o;
    o.camera_buffer_forwarding = Forwarding::StoreAndForward;
    CHECK(build_direct(kCam, LinkSpec::pcie(3, 2), o).stages[1].forwarding ==
          Forwarding::StoreAndForward);
    o.camera_buffer_forwarding = Forwarding::CutThrough;
    CHECK(build_classic(kCam, kClFull, LinkSpec::pcie(3, 2), MiB, o).stages[1].forwarding ==
          Forwarding::CutThrough);
}

TEST_CASE("builders propagate invalid links") {
    CHECK_THROWS_AS(build_direct(kCam, LinkSpec::pcie(3, 3)), InvalidSpec);
    CHECK_THROWS_AS(build_classic(kCam, LinkSpec::gige_vision(4), LinkSpec::pcie(3, 1), MiB),
                    InvalidSpec);
}

TEST_CASE("validate names each broken rule") {
    auto proc = StageSpec::processor(ProcessingTime::fixed(0));
    auto link = StageSpec::link_stage(LinkSpec::pcie(3, 1));
    auto host = StageSpec::host_memory();

    SUBCASE("missing sensor head") {
        auto v = validate(chain({StageSpec::buffer(MiB, Forwarding::CutThrough), link, host, proc}));
        REQUIRE(v.size() == 1);
        CHECK(v[0].rule == rules::kFirstIsSensor);
        CHECK(v[0].stage == 0);
    }
    SUBCASE("two processors") {
        auto v = validate(chain({StageSpec::sensor(), link, proc, proc}));
        CHECK(has_rule(v, rules::kSingleProcessor));
        CHECK(v.front().stage == 2);
    }
    SUBCASE("processor not last") {
        auto v = validate(chain({StageSpec::sensor(), link, proc, host}));
        CHECK(has_rule(v, rules::kLastIsProcessor));
        CHECK(has_rule(v, rules::kSingleProcessor));
    }
    SUBCASE("two sensors") {
        auto v = validate(chain({StageSpec::sensor(), StageSpec::sensor(), link, host, proc}));
        CHECK(has_rule(v, rules::kSingleSensor));
    }
    SUBCASE("no link") {
        auto v = validate(chain({StageSpec::sensor(), host, proc}));
        REQUIRE(v.size() == 1);
        CHECK(v[0].rule == rules::kHasLink);
    }
    SUBCASE("link fed by host memory") {
        auto v = validate(chain({StageSpec::sensor(), link, host, link, proc}));
        REQUIRE(v.size() == 1);
        CHECK(v[0].rule == rules::kLinkFedByEmitter);
        CHECK(v[0].stage == 3);
    }
    SUBCASE("zero capacity buffer") {
        auto v = validate(
            chain({StageSpec::sensor(), StageSpec::buffer(0, Forwarding::CutThrough), link, host,
                   proc}));
        CHECK(has_rule(v, rules::kCapacity));
    }
    SUBCASE("cut-through frame grabber") {
        auto g = StageSpec::frame_grabber(MiB);
        g.forwarding = Forwarding::CutThrough;
        auto v = validate(chain({StageSpec::sensor(), link, g, link, host, proc}));
        REQUIRE(v.size() == 1);
        CHECK(v[0].rule == rules::kGrabberStoreAndForward);
    }
    SUBCASE("link without a spec") {
        auto bare = link;
        bare.link.reset();
        auto v = validate(chain({StageSpec::sensor(), bare, host, proc}));
        CHECK(has_rule(v, rules::kLinkSpec));
    }
    SUBCASE("malformed processing time") {
        auto v = validate(chain({StageSpec::sensor(), link, host,
                                 StageSpec::processor(ProcessingTime::uniform(10, 5))}));
        CHECK(has_rule(v, rules::kProcessing));
        v = validate(chain({StageSpec::sensor(), link, host,
                            StageSpec::processor(ProcessingTime::normal(10, -1))}));
        CHECK(has_rule(v, rules::kProcessing));
    }
    SUBCASE("empty chain") {
        auto v = validate(chain({}));
        CHECK(has_rule(v, rules::kFirstIsSensor));
        CHECK(has_rule(v, rules::kLastIsProcessor));
        CHECK(has_rule(v, rules::kHasLink));
    }
    SUBCASE("bad camera and deadlines") {
        auto t = chain({StageSpec::sensor(), link, host, proc});
        t.camera.bit_depth = 0;
        t.deadlines.safety_deadline_ns = 0;
        auto v = validate(t);
        CHECK(has_rule(v, rules::kCamera));
        CHECK(has_rule(v, rules::kDeadlines));
    }
}

TEST_CASE("copy count") {
    auto link = StageSpec::link_stage(LinkSpec::pcie(3, 1));
    auto proc = StageSpec::processor(ProcessingTime::fixed(0));
    CHECK(copy_count(chain({StageSpec::sensor(), link, proc})) == 0);
    CHECK(copy_count(chain({StageSpec::sensor(), StageSpec::buffer(MiB, Forwarding::CutThrough),
                            link, StageSpec::frame_grabber(MiB), link, StageSpec::host_memory(),
                            proc})) == 3);
}

TEST_CASE("processing time draws") {
    NoiseStream n(1);
    CHECK(ProcessingTime::fixed(42).draw(n) == SimTime{42});
    CHECK(n.draws() == 0);
    auto u = ProcessingTime::uniform(100, 110);
    for (int i = 0; i < 200; ++i) {
        auto d = u.draw(n).ns;
        CHECK(d >= 100);
        CHECK(d <= 110);
    }
    auto z = ProcessingTime::normal(-1000.0, 1.0);
    CHECK(z.draw(n) == SimTime{0});
}

TEST_CASE("topology serialization round-trips") {
    ArchitectureOptions o;
    o.processing = ProcessingTime::normal(5000.5, 12.25);
    o.host_latency_ns = 7;
    auto t = build_classic(kCam, LinkSpec::coaxpress(12, 4, 12.5), LinkSpec::pcie(4, 8, 0.75),
                           32 * MiB, o);
    auto j = to_json(t);
    auto back = topology_from_json(j);
    CHECK(back == t);
    CHECK(canonical(to_json(back)) == canonical(j));
    CHECK(topology_digest(back) == topology_digest(t));
    CHECK(topology_digest(t).size() == 16);

    auto d = build_direct(kCam, LinkSpec::pcie(3, 2));
    CHECK(topology_digest(d) != topology_digest(t));
    CHECK(topology_from_json(to_json(d)) == d);
}

TEST_CASE("topology parsing rejects bad input") {
    auto j = to_json(build_direct(kCam, LinkSpec::pcie(3, 2)));
    auto bad_kind = j;
    bad_kind["stages"][0]["kind"] = "Teleporter";
    CHECK_THROWS_AS(topology_from_json(bad_kind), ConfigError);
    auto bad_link = j;
    bad_link["stages"][2]["link"]["kind"] = "Carrier pigeon";
    CHECK_THROWS_AS(topology_from_json(bad_link), ConfigError);
    auto negative = j;
    negative["stages"][1]["capacity_bytes"] = -5;
    CHECK_THROWS_AS(topology_from_json(negative), ConfigError);
    CHECK_THROWS_AS(topology_from_json(Json::array()), ConfigError);
}

}
