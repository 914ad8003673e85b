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

#include "camsim/simcore.hpp"

#include "camsim/json_io.hpp"
#include "camsim/metrics.hpp"
#include "occupancy.hpp"

#include <cassert>
#include <cmath>
#include <deque>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>

namespace camsim {

std::string_view to_string(DropPolicy p) {
    return p == DropPolicy::DropNewest ? "DropNewest" : "DropOldest";
}

DropPolicy parse_drop_policy(std::string_view s) {
    if (s == "DropNewest")
        return DropPolicy::DropNewest;
    if (s == "DropOldest")
        return DropPolicy::DropOldest;
    throw ConfigError("unknown drop policy '" + std::string(s) + "'");
}

void validate_config(const SimConfig& cfg) {
    if (cfg.n_frames.has_value() == cfg.duration.has_value())
        throw InvalidSpec("exactly one of n_frames and duration must be set");
    validate_clock(cfg.clock);
}

SimTime serialization_time(std::uint64_t size_bytes, double rate_gbps) {
    if (!(rate_gbps > 0.0) || !std::isfinite(rate_gbps))
        throw InvalidSpec("link rate must be positive");
    double ns = static_cast<double>(size_bytes) * 8.0 / rate_gbps;
    double whole = std::nearbyint(ns);
    if (std::fabs(ns - whole) <= 1e-12 * ns + 1e-9)
        return SimTime{static_cast<std::uint64_t>(whole)};
    return SimTime{static_cast<std::uint64_t>(std::ceil(ns))};
}

SimTime transmission_time(std::uint64_t size_bytes, const LinkSpec& link) {
    if (size_bytes == 0)
        throw std::invalid_argument("transmission of an empty frame");
    return serialization_time(size_bytes, effective_link_rate(link)) + propagation_delay(link);
}

namespace {

enum class EventKind { Generate, Arrive, SensorRelease, Complete };

struct Event {
    SimTime at;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::Generate;
    std::uint64_t frame = 0;
    std::size_t stage = 0;
    std::uint64_t generation = 0;
};

struct EventOrder {
    bool operator()(const Event& a, const Event& b) const {
        return std::tie(a.at, a.seq) > std::tie(b.at, b.seq);
    }
};

struct Reservation {
    std::uint64_t frame = 0;
    SimTime start;
    SimTime end;
};

// A link or processor: serves one frame at a time, in order.
struct Server {
    std::deque<Reservation> booked;
    SimTime retired_free;
    // Busy with bytes of a frame that was dropped upstream mid-transfer.
    SimTime abort_floor;

    SimTime free() const {
        SimTime f = max(retired_free, abort_floor);
        if (!booked.empty())
            f = max(f, booked.back().end);
        return f;
    }

    void book(std::uint64_t frame, SimTime start, SimTime end) {
        booked.push_back({frame, start, end});
    }

    // Forget bookings that have not started by `now`.
    void unbook_after(SimTime now) {
        while (!booked.empty() && booked.back().start > now)
            booked.pop_back();
    }

    void retire(SimTime now) {
        while (!booked.empty() && booked.front().end <= now) {
            retired_free = max(retired_free, booked.front().end);
            booked.pop_front();
        }
    }
};

struct Departure {
    SimTime first_out;
    SimTime last_out;
    // Processor only.
    SimTime processing;
};

class Engine {
public:
    Engine(const Topology& t, const SimConfig& cfg)
        : topo_(t), cfg_(cfg), clock_noise_(derive_seed(cfg.seed, 0)),
          proc_noise_(derive_seed(cfg.seed, 1)), servers_(t.stages.size()),
          residents_(t.stages.size()), frame_bytes_(t.camera.frame_bytes()) {
        for (const auto& s : t.stages) {
            if (s.kind == StageKind::Link) {
                serialization_.push_back(
                    serialization_time(frame_bytes_, effective_link_rate(*s.link)));
                propagation_.push_back(propagation_delay(*s.link));
            } else {
                serialization_.emplace_back();
                propagation_.emplace_back();
            }
        }
        if (t.camera.frame_rate > 0.0)
            period_ = SimTime{static_cast<std::uint64_t>(std::llround(1e9 / t.camera.frame_rate))};
    }

    std::vector<FrameRecord> run() {
        bool any = t_frame_rate_positive() && (cfg_.n_frames ? *cfg_.n_frames > 0
                                                             : cfg_.duration->ns > 0);
        if (cfg_.duration && any && period_.ns == 0)
            throw InvalidSpec("frame period rounds to zero nanoseconds");
        if (any)
            push(SimTime{0}, EventKind::Generate, 0, 0);

        while (!queue_.empty()) {
            Event e = queue_.top();
            queue_.pop();
            assert(e.at >= now_);
            now_ = e.at;
            switch (e.kind) {
            case EventKind::Generate:
                on_generate(e.frame);
                break;
            case EventKind::SensorRelease:
                if (live(e))
                    on_sensor_release(e.frame);
                break;
            case EventKind::Arrive:
                if (live(e))
                    on_arrive(e.frame, e.stage);
                break;
            case EventKind::Complete:
                if (live(e))
                    frames_[e.frame].disposition = Disposition::Delivered;
                break;
            }
        }
        if (cfg_.duration)
            apply_horizon(*cfg_.duration);
        return std::move(frames_);
    }

private:
    bool t_frame_rate_positive() const { return topo_.camera.frame_rate > 0.0; }

    bool live(const Event& e) const { return generation_[e.frame] == e.generation; }

    void push(SimTime at, EventKind kind, std::uint64_t frame, std::size_t stage) {
        std::uint64_t gen = frame < generation_.size() ? generation_[frame] : 0;
        queue_.push(Event{at, seq_++, kind, frame, stage, gen});
    }

    bool more_frames(std::uint64_t next) const {
        if (cfg_.n_frames)
            return next < *cfg_.n_frames;
        return period_.ns * next < cfg_.duration->ns;
    }

    const StageSpec& stage(std::size_t k) const { return topo_.stages[k]; }

    void on_generate(std::uint64_t id) {
        FrameRecord rec;
        rec.frame_id = id;
        rec.size_bytes = frame_bytes_;
        rec.generated_at = now_;
        auto ts = sample_timestamp(cfg_.clock, now_, clock_noise_);
        rec.camera_timestamp = ts.value;
        rec.timestamp_clamped = ts.clamped;
        SimTime out = now_ + SimTime{stage(0).fixed_latency_ns};
        rec.stages.push_back({now_, now_, out, out});
        frames_.push_back(std::move(rec));
        generation_.push_back(0);
        processing_.emplace_back();

        if (stage(1).kind == StageKind::Link) {
            push(out, EventKind::SensorRelease, id, 0);
        } else {
            frames_[id].stages.push_back({out, out, SimTime{}, SimTime{}});
            push(out, EventKind::Arrive, id, 1);
        }
        if (more_frames(id + 1))
            push(now_ + period_, EventKind::Generate, id + 1, 0);
    }

    void drop(std::uint64_t f, std::size_t k, DropReason reason, SimTime at) {
        auto& rec = frames_[f];
        rec.stages.resize(k + 1);
        rec.disposition = Disposition::Dropped;
        rec.drop = DropInfo{k, reason, at};
        ++generation_[f];
    }

    SimTime processing_time(std::uint64_t f, std::size_t k) {
        if (!processing_[f])
            processing_[f] = stage(k).processing.draw(proc_noise_);
        return *processing_[f];
    }

    // Earliest departure of frame f from stage k given the release window and
    // the downstream server's availability.
    Departure plan(std::uint64_t f, std::size_t k, SimTime release_start, SimTime release_end,
                   SimTime server_free) {
        const auto& next = stage(k + 1);
        if (next.kind == StageKind::Link) {
            SimTime start = max(max(release_start, server_free), now_);
            SimTime end = max(start + serialization_[k + 1], release_end);
            return {start, end, SimTime{}};
        }
        if (next.kind == StageKind::Processor) {
            SimTime start = max(max(release_end, server_free), now_);
            return {start, start, processing_time(f, k + 1)};
        }
        return {release_start, release_end, SimTime{}};
    }

    // Records the departure, books the downstream server and schedules the
    // frame's next event. The sensor keeps its own egress.
    void commit(std::uint64_t f, std::size_t k, const Departure& d) {
        auto& rec = frames_[f];
        rec.stages.resize(k + 1);
        if (k > 0) {
            rec.stages[k].first_out = d.first_out;
            rec.stages[k].last_out = d.last_out;
        }
        const auto& next = stage(k + 1);
        if (next.kind == StageKind::Link) {
            SimTime prop = propagation_[k + 1];
            servers_[k + 1].book(f, d.first_out, d.last_out);
            rec.stages.push_back({d.first_out, d.last_out, d.first_out + prop, d.last_out + prop});
            rec.stages.push_back({d.first_out + prop, d.last_out + prop, SimTime{}, SimTime{}});
            push(d.first_out + prop, EventKind::Arrive, f, k + 2);
        } else if (next.kind == StageKind::Processor) {
            SimTime busy_until = d.first_out + d.processing;
            SimTime done = busy_until + SimTime{next.fixed_latency_ns};
            servers_[k + 1].book(f, d.first_out, busy_until);
            rec.stages.push_back({d.first_out, d.first_out, done, done});
            push(done, EventKind::Complete, f, k + 1);
        } else {
            rec.stages.push_back({d.first_out, d.last_out, SimTime{}, SimTime{}});
            push(d.first_out, EventKind::Arrive, f, k + 1);
        }
    }

    std::pair<SimTime, SimTime> release_window(std::uint64_t f, std::size_t k) const {
        const auto& s = stage(k);
        const auto& times = frames_[f].stages[k];
        SimTime lat{s.fixed_latency_ns};
        if (s.kind == StageKind::Sensor)
            return {times.last_out, times.last_out};
        if (s.kind != StageKind::HostMemory && s.forwarding == Forwarding::CutThrough)
            return {times.first_in + lat, times.last_in + lat};
        return {times.last_in + lat, times.last_in + lat};
    }

    bool has_server(std::size_t k) const {
        auto kind = stage(k + 1).kind;
        return kind == StageKind::Link || kind == StageKind::Processor;
    }

    SimTime server_free(std::size_t k) {
        if (!has_server(k))
            return SimTime{};
        servers_[k + 1].retire(now_);
        return servers_[k + 1].free();
    }

    void on_sensor_release(std::uint64_t f) {
        if (server_free(0) > now_) {
            drop(f, 0, DropReason::Backpressure, now_);
            return;
        }
        auto [rs, re] = release_window(f, 0);
        commit(f, 0, plan(f, 0, rs, re, server_free(0)));
    }

    void on_arrive(std::uint64_t f, std::size_t k) {
        const auto& s = stage(k);
        if (s.kind == StageKind::Processor) {
            arrive_at_processor(f, k);
            return;
        }
        auto [rs, re] = release_window(f, k);
        if (!s.has_capacity()) {
            commit(f, k, plan(f, k, rs, re, server_free(k)));
            return;
        }
        admit(f, k, rs, re);
    }

    // Processor fed directly by a link: no memory to wait in.
    void arrive_at_processor(std::uint64_t f, std::size_t k) {
        auto& times = frames_[f].stages[k];
        SimTime start = times.last_in;
        servers_[k].retire(now_);
        if (servers_[k].free() > start) {
            times.first_out = times.last_out = start;
            drop(f, k, DropReason::Backpressure, start);
            return;
        }
        SimTime busy_until = start + processing_time(f, k);
        SimTime done = busy_until + SimTime{stage(k).fixed_latency_ns};
        servers_[k].book(f, start, busy_until);
        times.first_out = times.last_out = done;
        push(done, EventKind::Complete, f, k);
    }

    std::vector<detail::Flow> flows(std::size_t k) const {
        std::vector<detail::Flow> out;
        out.reserve(residents_[k].size() + 1);
        for (auto r : residents_[k]) {
            const auto& rec = frames_[r];
            std::optional<SimTime> cut;
            if (rec.drop && rec.drop->stage == k)
                cut = rec.drop->at;
            out.push_back({rec.stages[k], static_cast<double>(rec.size_bytes), cut});
        }
        return out;
    }

    void prune(std::size_t k) {
        auto& res = residents_[k];
        std::erase_if(res, [&](std::uint64_t r) {
            const auto& rec = frames_[r];
            if (rec.drop && rec.drop->stage == k)
                return rec.drop->at <= now_;
            return rec.stages[k].last_out <= now_;
        });
    }

    bool unstarted(std::uint64_t r, std::size_t k) const {
        const auto& rec = frames_[r];
        return rec.disposition != Disposition::Dropped && rec.stages[k].first_out > now_;
    }

    // Reschedule every resident of stage k that has not begun to leave.
    void replan(std::size_t k) {
        if (has_server(k))
            servers_[k + 1].unbook_after(now_);
        for (auto r : residents_[k]) {
            if (!unstarted(r, k))
                continue;
            ++generation_[r];
            auto [rs, re] = release_window(r, k);
            commit(r, k, plan(r, k, rs, re, server_free(k)));
        }
    }

    void admit(std::uint64_t f, std::size_t k, SimTime rs, SimTime re) {
        prune(k);
        auto capacity = static_cast<double>(stage(k).capacity_bytes);
        const double size = static_cast<double>(frame_bytes_);
        for (;;) {
            Departure d = plan(f, k, rs, re, server_free(k));
            auto candidate = flows(k);
            StageTimes mine = frames_[f].stages[k];
            mine.first_out = d.first_out;
            mine.last_out = d.last_out;
            candidate.push_back({mine, size, std::nullopt});
            auto overflow = detail::first_overflow(candidate, capacity, now_);
            if (!overflow) {
                commit(f, k, d);
                residents_[k].push_back(f);
                return;
            }
            if (cfg_.drop_policy == DropPolicy::DropOldest) {
                auto& res = residents_[k];
                auto victim = std::find_if(res.begin(), res.end(),
                                           [&](std::uint64_t r) { return unstarted(r, k); });
                if (victim != res.end()) {
                    drop(*victim, k, DropReason::BufferOverflow, now_);
                    replan(k);
                    continue;
                }
            }
            frames_[f].stages[k] = mine;
            if (stage(k + 1).kind == StageKind::Link && d.first_out < *overflow) {
                auto& server = servers_[k + 1];
                server.abort_floor = max(server.abort_floor, min(*overflow, d.last_out));
            }
            drop(f, k, DropReason::BufferOverflow, *overflow);
            residents_[k].push_back(f);
            return;
        }
    }

    // Frames still travelling at the horizon are reported as in flight, with
    // only the stages they had entered by then.
    void apply_horizon(SimTime horizon) {
        for (auto& rec : frames_) {
            bool pending = (rec.disposition == Disposition::Delivered &&
                            rec.stages.back().egress() > horizon) ||
                           (rec.disposition == Disposition::Dropped && rec.drop->at > horizon);
            if (!pending)
                continue;
            rec.disposition = Disposition::InFlight;
            rec.drop.reset();
            std::erase_if(rec.stages, [&](const StageTimes& s) { return s.first_in > horizon; });
        }
    }

    const Topology& topo_;
    SimConfig cfg_;
    NoiseStream clock_noise_;
    NoiseStream proc_noise_;
    std::vector<Server> servers_;
    std::vector<std::vector<std::uint64_t>> residents_;
    std::vector<SimTime> serialization_;
    std::vector<SimTime> propagation_;
    std::uint64_t frame_bytes_;
    SimTime period_;

    std::priority_queue<Event, std::vector<Event>, EventOrder> queue_;
    std::uint64_t seq_ = 0;
    SimTime now_;

    std::vector<FrameRecord> frames_;
    std::vector<std::uint64_t> generation_;
    std::vector<std::optional<SimTime>> processing_;
};

} // namespace

SimReport run(const Topology& t, const SimConfig& cfg, std::string scenario) {
    auto violations = validate(t);
    if (!violations.empty()) {
        std::string msg = "topology rejected:";
        for (const auto& v : violations)
            msg += " [stage " + std::to_string(v.stage) + "] " + v.rule + ";";
        throw InvalidSpec(msg);
    }
    validate_config(cfg);

    SimReport report;
    report.scenario = scenario.empty() ? t.name : std::move(scenario);
    report.topology = t;
    report.topology_digest = topology_digest(t);
    report.config = cfg;
    report.frames = Engine(t, cfg).run();
    report.aggregates = summarize(report.frames, t, cfg.duration);
    return report;
}

OccupancyTrace occupancy_profile(std::span<const FrameRecord> frames, const Topology& t,
                                 std::size_t stage, std::optional<SimTime> horizon) {
    if (stage >= t.stages.size())
        throw std::out_of_range("no stage " + std::to_string(stage) + " in topology '" + t.name +
                                "'");
    if (!t.stages[stage].is_memory())
        return {};
    std::vector<detail::Flow> fl;
    for (const auto& rec : frames) {
        if (rec.stages.size() <= stage)
            continue;
        std::optional<SimTime> cut;
        if (rec.drop && rec.drop->stage == stage)
            cut = rec.drop->at;
        fl.push_back({rec.stages[stage], static_cast<double>(rec.size_bytes), cut});
    }
    return detail::trace(fl, horizon);
}

OccupancyTrace occupancy_trace(const SimReport& report, std::size_t stage) {
    return occupancy_profile(report.frames, report.topology, stage, report.config.duration);
}

} // namespace camsim
