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

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace camsim {

// Unit conventions used across the library:
//   data rates    Gb/s, decimal (1 Gb/s = 1e9 bit/s)
//   sizes         bytes; KiB/MiB/GiB are binary (1 MiB = 1048576 B)
//   time          integer nanoseconds (SimTime)
//
// A bit count divided by a rate in Gb/s is a duration in nanoseconds.

inline constexpr std::uint64_t KiB = 1024ULL;
inline constexpr std::uint64_t MiB = 1024ULL * KiB;
inline constexpr std::uint64_t GiB = 1024ULL * MiB;

/// Absolute tolerance for every rate comparison, in Gb/s.
inline constexpr double kRateTolerance = 1e-9;

/// Simulation clock value or duration in whole nanoseconds.
struct SimTime {
    std::uint64_t ns = 0;

    constexpr SimTime() = default;
    constexpr explicit SimTime(std::uint64_t nanoseconds) : ns(nanoseconds) {}

    static constexpr SimTime max() { return SimTime{std::numeric_limits<std::uint64_t>::max()}; }

    constexpr auto operator<=>(const SimTime&) const = default;

    constexpr SimTime& operator+=(SimTime other) {
        ns += other.ns;
        return *this;
    }
    friend constexpr SimTime operator+(SimTime a, SimTime b) { return SimTime{a.ns + b.ns}; }
    /// Saturates at zero.
    friend constexpr SimTime operator-(SimTime a, SimTime b) {
        return SimTime{a.ns > b.ns ? a.ns - b.ns : 0};
    }
};

constexpr SimTime max(SimTime a, SimTime b) { return a < b ? b : a; }
constexpr SimTime min(SimTime a, SimTime b) { return a < b ? a : b; }

/// A link, camera or topology description violates its invariants.
class InvalidSpec : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// No lane width in {1,2,4,8,16} carries the requested stream.
class NoFeasibleWidth : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two reports cannot be compared (different camera or frame count).
class IncomparableRuns : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Scenario or report document is malformed.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reading or writing a file failed.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace camsim
