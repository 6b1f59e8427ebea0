#include "faultline/analyze/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace faultline::analyze {

double mean(const std::vector<double>& values) {
    if (values.empty()) {
        throw std::invalid_argument("mean of an empty set");
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double percentile_nearest_rank(std::vector<double> values, double p) {
    if (values.empty()) {
        throw std::invalid_argument("percentile of an empty set");
    }
    if (!(p > 0.0) || p > 1.0) {
        throw std::invalid_argument("percentile parameter must be in (0, 1]");
    }
    std::sort(values.begin(), values.end());
    auto rank = static_cast<size_t>(std::ceil(p * static_cast<double>(values.size())));
    return values[rank - 1];
}

}  // namespace faultline::analyze
