#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace faultline::cloud {

// Lifecycle edge: a requested transition from one state to another becomes
// visible after a fixed settle delay of logical time. Resources sit in the
// source state until the delay elapses, which is what the polling checks in
// the workload are really waiting on.
struct TransitionEdge {
    std::string from;
    std::string to;
    int64_t settle_ms;
};

struct ResourceRules {
    std::string kind;
    std::vector<std::string> initial_states;
    std::vector<TransitionEdge> edges;
};

// Rules for every kind with a managed lifecycle. Kinds not listed here are
// plain records: any fields, no state enforcement.
const std::vector<ResourceRules>& lifecycle_rules();

const ResourceRules* rules_for_kind(const std::string& kind);
bool legal_initial_state(const std::string& kind, const std::string& state);

// Null when the edge does not exist.
const TransitionEdge* find_edge(const std::string& kind, const std::string& from,
                                const std::string& to);

}  // namespace faultline::cloud
