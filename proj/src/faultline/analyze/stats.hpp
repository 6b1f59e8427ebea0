#pragma once

#include <vector>

namespace faultline::analyze {

// Plain arithmetic mean. Throws std::invalid_argument on an empty input.
double mean(const std::vector<double>& values);

// Nearest-rank percentile: the element at 1-based index ceil(p * n) of the
// sorted values, p in (0, 1]. Throws std::invalid_argument on an empty input
// or a p outside the range.
double percentile_nearest_rank(std::vector<double> values, double p);

}  // namespace faultline::analyze
