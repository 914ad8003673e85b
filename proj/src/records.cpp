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

#include "camsim/records.hpp"

#include <string>

namespace camsim {

std::optional<std::uint64_t> FrameRecord::latency_ns() const {
    if (disposition != Disposition::Delivered || stages.empty())
        return std::nullopt;
    return (stages.back().egress() - stages.front().egress()).ns;
}

SimTime FrameRecord::completed_at() const {
    switch (disposition) {
    case Disposition::Delivered:
        return stages.empty() ? SimTime{} : stages.back().egress();
    case Disposition::Dropped:
        return drop ? drop->at : SimTime{};
    case Disposition::InFlight:
        break;
    }
    return SimTime{};
}

std::string_view to_string(Disposition d) {
    switch (d) {
    case Disposition::Delivered:
        return "Delivered";
    case Disposition::Dropped:
        return "Dropped";
    case Disposition::InFlight:
        return "InFlight";
    }
    return "?";
}

std::string_view to_string(DropReason r) {
    switch (r) {
    case DropReason::BufferOverflow:
        return "BufferOverflow";
    case DropReason::Backpressure:
        return "Backpressure";
    }
    return "?";
}

Disposition parse_disposition(std::string_view s) {
    if (s == "Delivered")
        return Disposition::Delivered;
    if (s == "Dropped")
        return Disposition::Dropped;
    if (s == "InFlight")
        return Disposition::InFlight;
    throw ConfigError("unknown disposition '" + std::string(s) + "'");
}

DropReason parse_drop_reason(std::string_view s) {
    if (s == "BufferOverflow")
        return DropReason::BufferOverflow;
    if (s == "Backpressure")
        return DropReason::Backpressure;
    throw ConfigError("unknown drop reason '" + std::string(s) + "'");
}

} // namespace camsim
