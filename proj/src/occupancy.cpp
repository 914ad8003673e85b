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

#include "occupancy.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace camsim::detail {

namespace {

// Slack for byte comparisons against capacity.
constexpr double kByteEps = 1e-6;

double ramp_right(SimTime a, SimTime b, double size, SimTime t) {
    if (t < a)
        return 0.0;
    if (t >= b)
        return size;
    return size * static_cast<double>(t.ns - a.ns) / static_cast<double>(b.ns - a.ns);
}

double ramp_left(SimTime a, SimTime b, double size, SimTime t) {
    if (t <= a)
        return 0.0;
    if (t > b)
        return size;
    return size * static_cast<double>(t.ns - a.ns) / static_cast<double>(b.ns - a.ns);
}

std::vector<SimTime> breakpoints(std::span<const Flow> flows, SimTime from,
                                 std::optional<SimTime> until) {
    std::vector<SimTime> pts;
    pts.reserve(flows.size() * 5 + 2);
    auto add = [&](SimTime t) {
        if (t >= from && (!until || t <= *until))
            pts.push_back(t);
    };
    add(from);
    for (const auto& f : flows) {
        add(f.times.first_in);
        add(f.times.last_in);
        add(f.times.first_out);
        add(f.times.last_out);
        if (f.cut)
            add(*f.cut);
    }
    if (until)
        pts.push_back(*until);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

double sum_value(std::span<const Flow> flows, SimTime t) {
    double s = 0.0;
    for (const auto& f : flows)
        s += value_at(f, t);
    return s;
}

double sum_left(std::span<const Flow> flows, SimTime t) {
    double s = 0.0;
    for (const auto& f : flows)
        s += left_value(f, t);
    return s;
}

} // namespace

double value_at(const Flow& f, SimTime t) {
    if (f.cut && t >= *f.cut)
        return 0.0;
    return ramp_right(f.times.first_in, f.times.last_in, f.size, t) -
           ramp_right(f.times.first_out, f.times.last_out, f.size, t);
}

double left_value(const Flow& f, SimTime t) {
    if (f.cut && t > *f.cut)
        return 0.0;
    return ramp_left(f.times.first_in, f.times.last_in, f.size, t) -
           ramp_left(f.times.first_out, f.times.last_out, f.size, t);
}

std::optional<SimTime> first_overflow(std::span<const Flow> flows, double capacity, SimTime from) {
    auto pts = breakpoints(flows, from, std::nullopt);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double v = sum_value(flows, pts[i]);
        if (v > capacity + kByteEps)
            return pts[i];
        if (i + 1 == pts.size())
            break;
        double next = sum_left(flows, pts[i + 1]);
        if (next > capacity + kByteEps) {
            double span = static_cast<double>(pts[i + 1].ns - pts[i].ns);
            double frac = std::max(0.0, capacity - v) / (next - v);
            auto offset = static_cast<std::uint64_t>(std::floor(frac * span + 1e-7));
            return SimTime{pts[i].ns + offset};
        }
    }
    return std::nullopt;
}

OccupancyTrace trace(std::span<const Flow> flows, std::optional<SimTime> horizon) {
    OccupancyTrace out;
    if (flows.empty())
        return out;
    SimTime start = SimTime::max();
    for (const auto& f : flows)
        start = min(start, f.times.first_in);
    if (horizon && start > *horizon)
        return out;
    for (SimTime t : breakpoints(flows, start, horizon)) {
        double left = sum_left(flows, t);
        double right = sum_value(flows, t);
        if (std::fabs(left - right) > 1e-9)
            out.emplace_back(t, left);
        out.emplace_back(t, right);
    }
    return out;
}

} // namespace camsim::detail
