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

#include "camsim/records.hpp"
#include "camsim/units.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace camsim {

/// Camera clock relative to true time.
struct ClockModel {
    std::int64_t offset_ns = 0;
    double drift_ppm = 0.0;
    /// Standard deviation of Gaussian per-sample jitter.
    double jitter_sigma_ns = 0.0;

    bool operator==(const ClockModel&) const = default;
};

void validate_clock(const ClockModel& clock);

/// Real-time budgets. Latency is measured from sensor egress to processor egress.
struct DeadlineSpec {
    std::uint64_t safety_deadline_ns = 100'000;
    std::uint64_t control_deadline_ns = 20'000'000;
    double timestamp_rms_budget_ns = 50.0;

    bool operator==(const DeadlineSpec&) const = default;
};

void validate_deadlines(const DeadlineSpec& d);

/// Seeded pseudo-random stream.
///
/// Built on std::mt19937_64, whose output sequence is fixed by the standard;
/// the unit-interval and Gaussian transforms are done here rather than with
/// <random> distributions so values are identical across standard libraries.
class NoiseStream {
public:
    explicit NoiseStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() {
        ++draws_;
        return engine_();
    }
    /// Uniform in (0, 1].
    double unit();
    /// Standard normal, one Box-Muller transform per call.
    double gaussian();

    std::uint64_t draws() const { return draws_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t draws_ = 0;
};

/// Derives an independent sub-stream seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

struct TimestampSample {
    SimTime value;
    bool clamped = false;
};

/// true_time + offset + drift x true_time + N(0, sigma), rounded to ns and
/// clamped at zero. Consumes exactly one Gaussian draw.
TimestampSample sample_timestamp(const ClockModel& clock, SimTime true_time, NoiseStream& noise);

/// sqrt(mean((camera_timestamp - generated_at)^2)). Throws std::invalid_argument on empty input.
double timestamp_rms(std::span<const FrameRecord> records);

enum class ViolationKind { Safety, Control, Timestamp };

std::string_view to_string(ViolationKind k);
ViolationKind parse_violation_kind(std::string_view s);

struct DeadlineViolation {
    ViolationKind kind = ViolationKind::Safety;
    /// Absent for run-level (timestamp) violations.
    std::optional<std::uint64_t> frame_id;
    double measured_ns = 0.0;
    double limit_ns = 0.0;

    bool operator==(const DeadlineViolation&) const = default;
};

/// Per delivered frame: Safety when latency > safety deadline, Control when
/// latency > control deadline. One run-level Timestamp violation when the RMS
/// timestamp error over all frames exceeds the budget. Ordered by frame, then
/// kind; the timestamp entry comes last.
std::vector<DeadlineViolation> check_deadlines(std::span<const FrameRecord> frames,
                                               const DeadlineSpec& d);

} // namespace camsim
