#pragma once

#include "faultline/support/jsonio.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace faultline::workload {

// Rows of the event trace a workload run produces. Times are logical
// milliseconds stamped by the datastore clock.
struct ApiEvent {
    int step = 0;
    std::string subsystem;
    std::string endpoint;
    int64_t t_req = 0;
    int64_t t_res = 0;
    bool ok = true;
    std::string code;  // error code when !ok, empty otherwise
};

struct AssertionEvent {
    int step = 0;
    std::string id;
    std::string subsystem;
    int64_t t = 0;
    bool ok = true;
    int polls = 0;          // reads performed before resolving
    std::string detail;     // short reason when !ok
};

class EventTrace {
public:
    EventTrace() = default;

    void add_api(const ApiEvent& ev);
    void add_assertion(const AssertionEvent& ev);
    void finish(bool aborted, int64_t t);

    const std::vector<support::json>& rows() const { return rows_; }
    bool finished() const { return finished_; }
    bool aborted() const;
    int64_t end_time() const;

    std::vector<ApiEvent> api_events() const;
    std::vector<AssertionEvent> assertion_events() const;
    std::optional<ApiEvent> first_api_error() const;
    std::vector<AssertionEvent> failed_assertions() const;

    // Rows with every logical timestamp and poll count zeroed, for comparing
    // behaviour while ignoring scheduling detail.
    std::vector<support::json> rows_without_times() const;

    void save(const std::filesystem::path& path) const;
    static EventTrace load(const std::filesystem::path& path);
    static EventTrace from_rows(std::vector<support::json> rows);

    // Throws std::runtime_error when the row sequence is malformed: unknown
    // event kind, rows after the end marker, or a missing end marker.
    void validate() const;

private:
    std::vector<support::json> rows_;
    bool finished_ = false;
};

ApiEvent api_event_from_row(const support::json& row);
AssertionEvent assertion_event_from_row(const support::json& row);

}  // namespace faultline::workload
