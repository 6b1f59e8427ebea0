#pragma once

#include "faultline/analyze/dataset.hpp"
#include "faultline/workload/trace.hpp"

#include <optional>
#include <string>
#include <vector>

namespace faultline::analyze {

// How one experiment failed, judged from its faulty-round trace alone.
enum class FailureClass { NoFailure, ApiErrorOnly, AssertionOnly, AssertionThenApi };

const char* failure_class_name(FailureClass cls);  // e.g. "ASSERTION_THEN_API"
const std::vector<FailureClass>& all_failure_classes();

enum class LatencyCategory { ApiAfterAssertion, ApiOnly };
const char* latency_category_name(LatencyCategory cat);

// NO_FAILURE: no failed assertion, no API error. API_ERROR_ONLY: an API error
// with no failed assertion before it. ASSERTION_ONLY: failed assertions and
// no API error. ASSERTION_THEN_API: a failed assertion strictly before an
// API error. Throws AnalysisError when the trace's timestamps run backwards.
FailureClass classify_failure(const workload::EventTrace& faulty);

// True when the fault-free round still shows a failure: residue of the bug
// survived into the round where the trigger was off.
bool classify_round_propagated(const workload::EventTrace& fault_free);

// True when the faulty-round window holds at least one log record of ERROR
// or CRITICAL severity.
bool is_logged(const ExperimentRecord& rec);

struct LatencyOutcome {
    std::optional<double> secs;                    // first API error minus the
    std::optional<LatencyCategory> category;       // last trigger before it
    bool flagged = false;  // an API error happened with no trigger before it
};

// Seconds from the last trigger execution preceding the first API error to
// that error. Absent when the trace has no API error; flagged when it has one
// but no trigger execution precedes it.
LatencyOutcome compute_latency(const workload::EventTrace& faulty,
                               const std::vector<double>& trigger_secs);

// Full per-record verdict used by reports and graphs.
struct RecordVerdict {
    FailureClass cls = FailureClass::NoFailure;
    bool fault_free_propagated = false;
    bool logged_faulty = false;
    bool logged_fault_free = false;
    std::optional<double> latency_secs;
    std::optional<LatencyCategory> latency_category;
    bool latency_flagged = false;
    std::vector<std::string> failed_assertion_subsystems;  // unique, in first-failure order
    std::optional<std::string> first_failed_assertion;     // assertion name
    std::optional<std::string> api_error_subsystem;        // owner of the failing endpoint
    std::optional<std::string> api_error_endpoint;
    std::optional<std::string> api_error_code;
    bool spatial = false;  // manifestation subsystem differs from the injected one
};

RecordVerdict classify_record(const ExperimentRecord& rec);

}  // namespace faultline::analyze
