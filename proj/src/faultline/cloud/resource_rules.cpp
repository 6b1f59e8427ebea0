#include "faultline/cloud/resource_rules.hpp"

#include <algorithm>

namespace faultline::cloud {

const std::vector<ResourceRules>& lifecycle_rules() {
    static const std::vector<ResourceRules> rules = {
        {"image",
         {"QUEUED"},
         {{"QUEUED", "ACTIVE", 300}, {"QUEUED", "ERROR", 0}}},
        {"instance",
         {"BUILDING"},
         {{"BUILDING", "ACTIVE", 400}, {"BUILDING", "ERROR", 0}, {"ACTIVE", "ERROR", 0}}},
        {"volume",
         {"CREATING"},
         {{"CREATING", "AVAILABLE", 300},
          {"CREATING", "ERROR", 0},
          {"AVAILABLE", "IN_USE", 200},
          {"AVAILABLE", "ERROR", 0},
          {"IN_USE", "AVAILABLE", 200},
          {"IN_USE", "ERROR", 0}}},
        {"network",
         {"CREATING"},
         {{"CREATING", "ACTIVE", 200}, {"CREATING", "ERROR", 0}}},
        {"router",
         {"CREATING"},
         {{"CREATING", "ACTIVE", 200}, {"CREATING", "ERROR", 0}}},
        {"fip",
         {"CREATED"},
         {{"CREATED", "ASSOCIATED", 200}, {"CREATED", "ERROR", 0}}},
    };
    return rules;
}

const ResourceRules* rules_for_kind(const std::string& kind) {
    for (const auto& r : lifecycle_rules()) {
        if (r.kind == kind) {
            return &r;
        }
    }
    return nullptr;
}

bool legal_initial_state(const std::string& kind, const std::string& state) {
    const ResourceRules* rules = rules_for_kind(kind);
    if (rules == nullptr) {
        return true;
    }
    return std::find(rules->initial_states.begin(), rules->initial_states.end(), state) !=
           rules->initial_states.end();
}

const TransitionEdge* find_edge(const std::string& kind, const std::string& from,
                                const std::string& to) {
    const ResourceRules* rules = rules_for_kind(kind);
    if (rules == nullptr) {
        return nullptr;
    }
    for (const auto& edge : rules->edges) {
        if (edge.from == from && edge.to == to) {
            return &edge;
        }
    }
    return nullptr;
}

}  // namespace faultline::cloud
