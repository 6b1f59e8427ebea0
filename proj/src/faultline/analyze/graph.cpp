#include "faultline/analyze/graph.hpp"

#include <sstream>

namespace faultline::analyze {

PropagationGraph build_propagation_graph(const std::vector<ExperimentRecord>& records,
                                         GraphRound round) {
    PropagationGraph g;
    for (const auto& rec : records) {
        const auto& trace = round == GraphRound::Faulty ? rec.faulty : rec.fault_free;
        if (classify_failure(trace) == FailureClass::NoFailure) continue;
        g.failures_by_subsystem[rec.subsystem] += 1;

        std::optional<workload::AssertionEvent> first_failed;
        for (const auto& ev : trace.failed_assertions()) {
            if (!first_failed) first_failed = ev;
        }
        auto error = trace.first_api_error();

        if (first_failed) {
            g.injected_to_assertion[{rec.subsystem, first_failed->id}] += 1;
            if (error) {
                g.assertion_to_api[{first_failed->id, error->subsystem}] += 1;
            }
        } else if (error) {
            g.injected_to_api[{rec.subsystem, error->subsystem}] += 1;
        }
    }
    return g;
}

std::string graph_to_dot(const PropagationGraph& g, const std::string& name) {
    std::ostringstream out;
    out << "digraph " << name << " {\n";
    out << "  rankdir=TB;\n";
    out << "  node [shape=box];\n";
    for (const auto& [edge, count] : g.injected_to_assertion) {
        out << "  \"inj:" << edge.first << "\" -> \"chk:" << edge.second << "\" [label=\""
            << count << "\"];\n";
    }
    for (const auto& [edge, count] : g.assertion_to_api) {
        out << "  \"chk:" << edge.first << "\" -> \"api:" << edge.second << "\" [label=\""
            << count << "\"];\n";
    }
    for (const auto& [edge, count] : g.injected_to_api) {
        out << "  \"inj:" << edge.first << "\" -> \"api:" << edge.second << "\" [label=\""
            << count << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace faultline::analyze
