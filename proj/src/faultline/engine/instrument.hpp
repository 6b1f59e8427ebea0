#pragma once

#include "faultline/engine/points.hpp"
#include "faultline/engine/scanner.hpp"

#include <string>
#include <utility>
#include <vector>

namespace faultline::engine {

// Source tree with coverage probes: every call site that carries points is
// wrapped so a marker fires when execution reaches it, and every guarded
// try body gets a marker as its first statement. Markers list the point ids
// they prove reachable. Behavior is otherwise unchanged.
struct InstrumentedTree {
    std::vector<std::pair<std::string, std::string>> files;  // rel_path, source
    int marker_count = 0;
};

InstrumentedTree instrument_coverage(const TargetTree& tree,
                                     const std::vector<InjectionPoint>& points);

}  // namespace faultline::engine
