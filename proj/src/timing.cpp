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

#include "camsim/timing.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace camsim {

void validate_clock(const ClockModel& clock) {
    if (!std::isfinite(clock.drift_ppm))
        throw InvalidSpec("clock drift must be finite");
    if (!std::isfinite(clock.jitter_sigma_ns) || clock.jitter_sigma_ns < 0.0)
        throw InvalidSpec("clock jitter sigma must be non-negative");
}

void validate_deadlines(const DeadlineSpec& d) {
    if (d.safety_deadline_ns == 0 || d.control_deadline_ns == 0)
        throw InvalidSpec("deadlines must be strictly positive");
    if (!(d.timestamp_rms_budget_ns > 0.0))
        throw InvalidSpec("timestamp RMS budget must be strictly positive");
}

double NoiseStream::unit() {
    // 53 random mantissa bits, shifted to (0, 1] so log() is finite.
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double NoiseStream::gaussian() {
    double u1 = unit();
    double u2 = unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

TimestampSample sample_timestamp(const ClockModel& clock, SimTime true_time, NoiseStream& noise) {
    double jitter = clock.jitter_sigma_ns * noise.gaussian();
    double correction = static_cast<double>(clock.offset_ns) +
                        clock.drift_ppm * 1e-6 * static_cast<double>(true_time.ns) + jitter;
    std::int64_t value = static_cast<std::int64_t>(true_time.ns) + std::llround(correction);
    if (value < 0)
        return {SimTime{0}, true};
    return {SimTime{static_cast<std::uint64_t>(value)}, false};
}

double timestamp_rms(std::span<const FrameRecord> records) {
    if (records.empty())
        throw std::invalid_argument("timestamp RMS of an empty record set");
    double sum = 0.0;
    for (const auto& r : records) {
        double e = static_cast<double>(r.timestamp_error_ns());
        sum += e * e;
    }
    return std::sqrt(sum / static_cast<double>(records.size()));
}

std::string_view to_string(ViolationKind k) {
    switch (k) {
    case ViolationKind::Safety:
        return "Safety";
    case ViolationKind::Control:
        return "Control";
    case ViolationKind::Timestamp:
        return "Timestamp";
    }
    return "?";
}

ViolationKind parse_violation_kind(std::string_view s) {
    if (s == "Safety")
        return ViolationKind::Safety;
    if (s == "Control")
        return ViolationKind::Control;
    if (s == "Timestamp")
        return ViolationKind::Timestamp;
    throw ConfigError("unknown violation kind '" + std::string(s) + "'");
}

std::vector<DeadlineViolation> check_deadlines(std::span<const FrameRecord> frames,
                                               const DeadlineSpec& d) {
    std::vector<DeadlineViolation> out;
    for (const auto& f : frames) {
        auto latency = f.latency_ns();
        if (!latency)
            continue;
        auto measured = static_cast<double>(*latency);
        if (*latency > d.safety_deadline_ns)
            out.push_back({ViolationKind::Safety, f.frame_id, measured,
                           static_cast<double>(d.safety_deadline_ns)});
        if (*latency > d.control_deadline_ns)
            out.push_back({ViolationKind::Control, f.frame_id, measured,
                           static_cast<double>(d.control_deadline_ns)});
    }
    if (!frames.empty()) {
        double rms = timestamp_rms(frames);
        if (rms > d.timestamp_rms_budget_ns)
            out.push_back({ViolationKind::Timestamp, std::nullopt, rms, d.timestamp_rms_budget_ns});
    }
    return out;
}

} // namespace camsim
