#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <string>

namespace faultline::support {

// All dataset timestamps are logical seconds from the experiment epoch.
// For human-readable log lines they are rendered against a fixed calendar
// origin so identical runs produce identical text.
inline constexpr int64_t kLogEpochYear = 2026;

// Logical milliseconds -> "2026-01-01T00:00:12.345Z". Input is non-negative
// and bounded by experiment length, so days never roll past January.
inline std::string iso_from_ms(int64_t millis_total) {
    if (millis_total < 0) {
        millis_total = 0;
    }
    const int64_t millis = millis_total % 1000;
    int64_t secs = millis_total / 1000;
    const int64_t sec = secs % 60;
    secs /= 60;
    const int64_t minute = secs % 60;
    secs /= 60;
    const int64_t hour = secs % 24;
    const int64_t day = 1 + secs / 24;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%04lld-01-%02lldT%02lld:%02lld:%02lld.%03lldZ",
                  static_cast<long long>(kLogEpochYear), static_cast<long long>(day),
                  static_cast<long long>(hour), static_cast<long long>(minute),
                  static_cast<long long>(sec), static_cast<long long>(millis));
    return buf;
}

inline std::string iso_from_logical(double seconds) {
    return iso_from_ms(static_cast<int64_t>(seconds * 1000.0 + 0.5));
}

inline double wall_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point origin = clock::now();
    return std::chrono::duration<double>(clock::now() - origin).count();
}

}  // namespace faultline::support
