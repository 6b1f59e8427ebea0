#include "faultline/workload/trace.hpp"

#include <stdexcept>

namespace faultline::workload {

namespace {

support::json api_row(const ApiEvent& ev) {
    support::json row;
    row["event"] = "api";
    row["step"] = ev.step;
    row["subsystem"] = ev.subsystem;
    row["endpoint"] = ev.endpoint;
    row["t_req"] = ev.t_req;
    row["t_res"] = ev.t_res;
    row["ok"] = ev.ok;
    row["code"] = ev.code;
    return row;
}

support::json assertion_row(const AssertionEvent& ev) {
    support::json row;
    row["event"] = "assertion";
    row["step"] = ev.step;
    row["id"] = ev.id;
    row["subsystem"] = ev.subsystem;
    row["t"] = ev.t;
    row["ok"] = ev.ok;
    row["polls"] = ev.polls;
    row["detail"] = ev.detail;
    return row;
}

}  // namespace

ApiEvent api_event_from_row(const support::json& row) {
    ApiEvent ev;
    ev.step = row.at("step").get<int>();
    ev.subsystem = row.at("subsystem").get<std::string>();
    ev.endpoint = row.at("endpoint").get<std::string>();
    ev.t_req = row.at("t_req").get<int64_t>();
    ev.t_res = row.at("t_res").get<int64_t>();
    ev.ok = row.at("ok").get<bool>();
    ev.code = row.at("code").get<std::string>();
    return ev;
}

AssertionEvent assertion_event_from_row(const support::json& row) {
    AssertionEvent ev;
    ev.step = row.at("step").get<int>();
    ev.id = row.at("id").get<std::string>();
    ev.subsystem = row.at("subsystem").get<std::string>();
    ev.t = row.at("t").get<int64_t>();
    ev.ok = row.at("ok").get<bool>();
    ev.polls = row.at("polls").get<int>();
    ev.detail = row.at("detail").get<std::string>();
    return ev;
}

void EventTrace::add_api(const ApiEvent& ev) {
    if (finished_) throw std::logic_error("trace already finished");
    rows_.push_back(api_row(ev));
}

void EventTrace::add_assertion(const AssertionEvent& ev) {
    if (finished_) throw std::logic_error("trace already finished");
    rows_.push_back(assertion_row(ev));
}

void EventTrace::finish(bool aborted, int64_t t) {
    if (finished_) throw std::logic_error("trace already finished");
    support::json row;
    row["event"] = "end";
    row["aborted"] = aborted;
    row["t"] = t;
    rows_.push_back(row);
    finished_ = true;
}

bool EventTrace::aborted() const {
    if (!finished_) throw std::logic_error("trace not finished");
    return rows_.back().at("aborted").get<bool>();
}

int64_t EventTrace::end_time() const {
    if (!finished_) throw std::logic_error("trace not finished");
    return rows_.back().at("t").get<int64_t>();
}

std::vector<ApiEvent> EventTrace::api_events() const {
    std::vector<ApiEvent> out;
    for (const auto& row : rows_) {
        if (row.at("event") == "api") out.push_back(api_event_from_row(row));
    }
    return out;
}

std::vector<AssertionEvent> EventTrace::assertion_events() const {
    std::vector<AssertionEvent> out;
    for (const auto& row : rows_) {
        if (row.at("event") == "assertion") out.push_back(assertion_event_from_row(row));
    }
    return out;
}

std::optional<ApiEvent> EventTrace::first_api_error() const {
    for (const auto& row : rows_) {
        if (row.at("event") != "api") continue;
        auto ev = api_event_from_row(row);
        if (!ev.ok) return ev;
    }
    return std::nullopt;
}

std::vector<AssertionEvent> EventTrace::failed_assertions() const {
    std::vector<AssertionEvent> out;
    for (const auto& ev : assertion_events()) {
        if (!ev.ok) out.push_back(ev);
    }
    return out;
}

std::vector<support::json> EventTrace::rows_without_times() const {
    std::vector<support::json> out;
    for (auto row : rows_) {
        for (const char* key : {"t", "t_req", "t_res", "polls"}) {
            if (row.contains(key)) row[key] = 0;
        }
        out.push_back(std::move(row));
    }
    return out;
}

void EventTrace::save(const std::filesystem::path& path) const {
    support::save_jsonl_file(path, rows_);
}

EventTrace EventTrace::load(const std::filesystem::path& path) {
    return from_rows(support::load_jsonl_file(path));
}

EventTrace EventTrace::from_rows(std::vector<support::json> rows) {
    EventTrace trace;
    trace.rows_ = std::move(rows);
    if (!trace.rows_.empty() && trace.rows_.back().value("event", "") == "end") {
        trace.finished_ = true;
    }
    trace.validate();
    return trace;
}

void EventTrace::validate() const {
    for (size_t i = 0; i < rows_.size(); ++i) {
        const auto& row = rows_[i];
        std::string kind = row.value("event", "");
        if (kind == "api") {
            api_event_from_row(row);
        } else if (kind == "assertion") {
            assertion_event_from_row(row);
        } else if (kind == "end") {
            if (i + 1 != rows_.size()) throw std::runtime_error("trace rows after end marker");
        } else {
            throw std::runtime_error("unknown trace event kind: " + kind);
        }
    }
    if (finished_ && (rows_.empty() || rows_.back().value("event", "") != "end")) {
        throw std::runtime_error("finished trace lacks end marker");
    }
}

}  // namespace faultline::workload
