#include "faultline/analyze/dataset.hpp"

#include "faultline/support/jsonio.hpp"

#include <algorithm>

namespace faultline::analyze {

namespace {

using support::json;

std::string invalid_reason_of(const json& rec) {
    return rec.value("invalid_reason", std::string("unknown"));
}

}  // namespace

ExperimentRecord ExperimentRecord::load(const std::filesystem::path& exp_dir) {
    auto rec = support::load_json_file(exp_dir / "record");
    ExperimentRecord out;
    out.point_id = rec.at("point").at("id").get<std::string>();
    out.subsystem = rec.at("point").at("subsystem").get<std::string>();
    out.bug_type = rec.at("point").at("bug_type").get<std::string>();
    if (rec.at("status").get<std::string>() != "COMPLETED") {
        throw AnalysisError("record " + out.point_id + " is not COMPLETED");
    }
    const auto& rounds = rec.at("rounds");
    out.faulty = workload::EventTrace::load(
        exp_dir / rounds.at("faulty").at("trace").get<std::string>());
    out.fault_free = workload::EventTrace::load(
        exp_dir / rounds.at("fault_free").at("trace").get<std::string>());
    out.faulty.validate();
    out.fault_free.validate();
    for (const auto& entry : rec.at("logs")) {
        LogEntry line;
        line.t_ms = entry.at("t_ms").get<int64_t>();
        auto sev_name = entry.at("severity").get<std::string>();
        if (!cloud::parse_severity(sev_name, line.sev)) {
            throw AnalysisError("record " + out.point_id + " has unknown severity " + sev_name);
        }
        line.component = entry.at("component").get<std::string>();
        line.message = entry.at("message").get<std::string>();
        line.round = entry.at("round").get<std::string>();
        out.logs.push_back(std::move(line));
    }
    for (const auto& t : rec.at("trigger_executions")) {
        out.trigger_secs.push_back(t.get<double>());
    }
    const auto& windows = rec.at("windows");
    out.enabled_ms = windows.at("enabled_ms").get<int64_t>();
    out.disabled_ms = windows.at("disabled_ms").get<int64_t>();
    out.end_ms = windows.at("end_ms").get<int64_t>();
    out.sentinel_seen = rec.value("sentinel_seen", false);
    out.fresh_store = rec.value("fresh_store", false);
    return out;
}

Dataset Dataset::load(const std::filesystem::path& out_dir) {
    Dataset ds;
    std::vector<std::filesystem::path> exp_dirs;
    if (std::filesystem::is_directory(out_dir)) {
        for (const auto& entry : std::filesystem::directory_iterator(out_dir)) {
            if (entry.is_directory() && entry.path().filename().string().rfind("exp-", 0) == 0) {
                exp_dirs.push_back(entry.path());
            }
        }
    }
    std::sort(exp_dirs.begin(), exp_dirs.end());
    if (exp_dirs.empty()) {
        throw AnalysisError("no experiments found under " + out_dir.string());
    }

    for (const auto& dir : exp_dirs) {
        auto fallback_id = dir.filename().string().substr(4);
        json rec;
        try {
            rec = support::load_json_file(dir / "record");
        } catch (const std::exception& e) {
            ds.excluded.emplace_back(fallback_id, std::string("unreadable record: ") + e.what());
            continue;
        }
        std::string status;
        try {
            status = rec.at("status").get<std::string>();
        } catch (const std::exception&) {
            ds.excluded.emplace_back(fallback_id, "record has no status");
            continue;
        }
        if (status == "INVALID") {
            ds.invalid.emplace_back(fallback_id, invalid_reason_of(rec));
            continue;
        }
        try {
            ds.completed.push_back(ExperimentRecord::load(dir));
        } catch (const std::exception& e) {
            ds.excluded.emplace_back(fallback_id, e.what());
        }
    }
    std::sort(ds.completed.begin(), ds.completed.end(),
              [](const ExperimentRecord& a, const ExperimentRecord& b) {
                  return a.point_id < b.point_id;
              });
    return ds;
}

}  // namespace faultline::analyze
