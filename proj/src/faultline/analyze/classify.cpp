#include "faultline/analyze/classify.hpp"

#include <algorithm>
#include <cmath>

namespace faultline::analyze {

namespace {

// Chronological scan of a trace: every row's timestamp must be reachable
// without going backwards. Returns the interesting marks.
struct TraceMarks {
    std::vector<workload::AssertionEvent> failed;
    std::optional<workload::ApiEvent> first_error;
};

TraceMarks scan_trace(const workload::EventTrace& trace) {
    TraceMarks marks;
    int64_t cursor = 0;
    for (const auto& row : trace.rows()) {
        auto kind = row.at("event").get<std::string>();
        if (kind == "api") {
            auto ev = workload::api_event_from_row(row);
            if (ev.t_req < cursor || ev.t_res < ev.t_req) {
                throw AnalysisError("trace timestamps out of order at api event " + ev.endpoint);
            }
            cursor = ev.t_res;
            if (!ev.ok && !marks.first_error) marks.first_error = ev;
        } else if (kind == "assertion") {
            auto ev = workload::assertion_event_from_row(row);
            if (ev.t < cursor) {
                throw AnalysisError("trace timestamps out of order at assertion " + ev.id);
            }
            cursor = ev.t;
            if (!ev.ok) marks.failed.push_back(ev);
        } else if (kind == "end") {
            int64_t t = row.at("t").get<int64_t>();
            if (t < cursor) {
                throw AnalysisError("trace timestamps out of order at end marker");
            }
            cursor = t;
        } else {
            throw AnalysisError("unknown trace event kind: " + kind);
        }
    }
    return marks;
}

int64_t secs_to_ms(double secs) {
    return static_cast<int64_t>(std::llround(secs * 1000.0));
}

}  // namespace

const char* failure_class_name(FailureClass cls) {
    switch (cls) {
        case FailureClass::NoFailure: return "NO_FAILURE";
        case FailureClass::ApiErrorOnly: return "API_ERROR_ONLY";
        case FailureClass::AssertionOnly: return "ASSERTION_ONLY";
        case FailureClass::AssertionThenApi: return "ASSERTION_THEN_API";
    }
    return "NO_FAILURE";
}

const std::vector<FailureClass>& all_failure_classes() {
    static const std::vector<FailureClass> classes = {
        FailureClass::NoFailure, FailureClass::ApiErrorOnly, FailureClass::AssertionOnly,
        FailureClass::AssertionThenApi};
    return classes;
}

const char* latency_category_name(LatencyCategory cat) {
    switch (cat) {
        case LatencyCategory::ApiAfterAssertion: return "API_AFTER_ASSERTION";
        case LatencyCategory::ApiOnly: return "API_ONLY";
    }
    return "API_ONLY";
}

FailureClass classify_failure(const workload::EventTrace& faulty) {
    auto marks = scan_trace(faulty);
    if (marks.first_error) {
        int64_t err_t = marks.first_error->t_res;
        bool assertion_before = std::any_of(
            marks.failed.begin(), marks.failed.end(),
            [err_t](const workload::AssertionEvent& ev) { return ev.t < err_t; });
        return assertion_before ? FailureClass::AssertionThenApi : FailureClass::ApiErrorOnly;
    }
    return marks.failed.empty() ? FailureClass::NoFailure : FailureClass::AssertionOnly;
}

bool classify_round_propagated(const workload::EventTrace& fault_free) {
    auto marks = scan_trace(fault_free);
    return marks.first_error.has_value() || !marks.failed.empty();
}

bool is_logged(const ExperimentRecord& rec) {
    const int threshold = cloud::severity_rank(cloud::Severity::Error);
    return std::any_of(rec.logs.begin(), rec.logs.end(), [threshold](const LogEntry& line) {
        return line.round == "faulty" && cloud::severity_rank(line.sev) >= threshold;
    });
}

LatencyOutcome compute_latency(const workload::EventTrace& faulty,
                               const std::vector<double>& trigger_secs) {
    LatencyOutcome out;
    auto marks = scan_trace(faulty);
    if (!marks.first_error) return out;

    int64_t err_ms = marks.first_error->t_res;
    std::optional<int64_t> last_before;
    for (double t : trigger_secs) {
        int64_t ms = secs_to_ms(t);
        if (ms <= err_ms && (!last_before || ms > *last_before)) last_before = ms;
    }
    if (!last_before) {
        out.flagged = true;
        return out;
    }
    out.secs = static_cast<double>(err_ms - *last_before) / 1000.0;
    bool assertion_before = std::any_of(
        marks.failed.begin(), marks.failed.end(),
        [err_ms](const workload::AssertionEvent& ev) { return ev.t < err_ms; });
    out.category =
        assertion_before ? LatencyCategory::ApiAfterAssertion : LatencyCategory::ApiOnly;
    return out;
}

RecordVerdict classify_record(const ExperimentRecord& rec) {
    RecordVerdict v;
    auto marks = scan_trace(rec.faulty);
    v.cls = classify_failure(rec.faulty);
    v.fault_free_propagated = classify_round_propagated(rec.fault_free);
    v.logged_faulty = is_logged(rec);
    {
        const int threshold = cloud::severity_rank(cloud::Severity::Error);
        v.logged_fault_free =
            std::any_of(rec.logs.begin(), rec.logs.end(), [threshold](const LogEntry& line) {
                return line.round == "fault_free" && cloud::severity_rank(line.sev) >= threshold;
            });
    }

    auto latency = compute_latency(rec.faulty, rec.trigger_secs);
    v.latency_secs = latency.secs;
    v.latency_category = latency.category;
    v.latency_flagged = latency.flagged;

    for (const auto& ev : marks.failed) {
        if (std::find(v.failed_assertion_subsystems.begin(), v.failed_assertion_subsystems.end(),
                      ev.subsystem) == v.failed_assertion_subsystems.end()) {
            v.failed_assertion_subsystems.push_back(ev.subsystem);
        }
    }
    if (!marks.failed.empty()) v.first_failed_assertion = marks.failed.front().id;
    if (marks.first_error) {
        v.api_error_subsystem = marks.first_error->subsystem;
        v.api_error_endpoint = marks.first_error->endpoint;
        v.api_error_code = marks.first_error->code;
    }

    if (v.cls != FailureClass::NoFailure) {
        for (const auto& sub : v.failed_assertion_subsystems) {
            if (sub != rec.subsystem) v.spatial = true;
        }
        if (v.api_error_subsystem && *v.api_error_subsystem != rec.subsystem) v.spatial = true;
    }
    return v;
}

}  // namespace faultline::analyze
