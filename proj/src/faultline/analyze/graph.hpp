#pragma once

#include "faultline/analyze/classify.hpp"
#include "faultline/analyze/dataset.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace faultline::analyze {

// Tripartite counted edges: injected subsystem, assertion check, API-error
// subsystem. Each failed record contributes one path: through its first
// failed assertion when one exists, then on to the API-error subsystem when
// the trace has an API error; records failing straight at the API contribute
// a direct edge.
struct PropagationGraph {
    std::map<std::pair<std::string, std::string>, int> injected_to_assertion;
    std::map<std::pair<std::string, std::string>, int> assertion_to_api;
    std::map<std::pair<std::string, std::string>, int> injected_to_api;

    // Failed records attributed per injected subsystem; the sum of first-hop
    // edge counts out of a subsystem must equal this.
    std::map<std::string, int> failures_by_subsystem;
};

enum class GraphRound { Faulty, FaultFree };

PropagationGraph build_propagation_graph(const std::vector<ExperimentRecord>& records,
                                         GraphRound round);

std::string graph_to_dot(const PropagationGraph& g, const std::string& name);

}  // namespace faultline::analyze
