#pragma once

#include "faultline/support/jsonio.hpp"

#include <string>
#include <vector>

namespace faultline::engine {

// One text replacement, [begin, end) in byte offsets of the original source.
// begin == end inserts.
struct Splice {
    size_t begin = 0;
    size_t end = 0;
    std::string replacement;
};

// Applies splices back to front so earlier offsets stay valid. Overlapping
// splices indicate a planner bug and throw.
std::string apply_splices(const std::string& source, std::vector<Splice> splices);

// Source text for a literal default value: null, true/false, integers,
// quoted strings, [] and {}.
std::string render_literal(const support::json& value);

}  // namespace faultline::engine
