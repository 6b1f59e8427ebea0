#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace faultline::support {

// Deterministic sampling helpers. std::mt19937_64 has a fixed, portable
// output sequence; the shuffle below is spelled out because std::shuffle's
// use of the engine is implementation-defined and would break cross-run
// reproducibility guarantees if the toolchain ever changed.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // Uniform in [0, bound) via rejection sampling, bias-free.
    uint64_t next_below(uint64_t bound) {
        if (bound == 0) {
            throw std::invalid_argument("next_below: bound must be positive");
        }
        const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        uint64_t value = engine_();
        while (value >= limit) {
            value = engine_();
        }
        return value % bound;
    }

    // Fisher-Yates; deterministic for a given seed and input order.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (size_t i = items.size(); i > 1; --i) {
            const size_t j = static_cast<size_t>(next_below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    // First k items of a deterministic shuffle; input order preserved as the
    // sampling domain, output order is the shuffled prefix.
    template <typename T>
    std::vector<T> sample(const std::vector<T>& items, size_t k) {
        std::vector<T> pool = items;
        shuffle(pool);
        if (k < pool.size()) {
            pool.resize(k);
        }
        return pool;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace faultline::support
