#pragma once

#include <cstdint>
#include <stdexcept>

namespace faultline::cloud {

// Logical experiment time in milliseconds. The datastore owns the single
// instance; every timestamped event asks it for a fresh stamp, so event
// order is total and runs are reproducible regardless of wall-clock timing.
class VirtualClock {
public:
    // Current time without advancing it.
    int64_t now_ms() const { return now_ms_; }

    // One event happened: move time forward one millisecond and stamp it.
    int64_t stamp() { return ++now_ms_; }

    // A waiter chose to let time pass (poll intervals, settle delays).
    // Time never moves backward or stands still here; a zero or negative
    // delta is a caller bug, not a no-op.
    void advance(int64_t delta_ms) {
        if (delta_ms <= 0) {
            throw std::invalid_argument("clock advance needs a positive delta");
        }
        now_ms_ += delta_ms;
    }

    void reset(int64_t to_ms) { now_ms_ = to_ms; }

private:
    int64_t now_ms_ = 0;
};

}  // namespace faultline::cloud
