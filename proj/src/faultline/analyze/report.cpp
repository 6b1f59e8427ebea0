#include "faultline/analyze/report.hpp"

#include "faultline/analyze/graph.hpp"
#include "faultline/analyze/stats.hpp"
#include "faultline/support/csv.hpp"
#include "faultline/support/fs.hpp"
#include "faultline/workload/assertions.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace faultline::analyze {

namespace {

using support::CsvWriter;
using support::format_fixed;

struct Classified {
    const ExperimentRecord* rec;
    RecordVerdict v;
};

std::string pct(int part, int whole) {
    if (whole == 0) return "-";
    return format_fixed(100.0 * part / whole, 2);
}

std::vector<std::string> subsystem_axis(const std::vector<Classified>& rows) {
    std::set<std::string> subs;
    for (const auto& row : rows) subs.insert(row.rec->subsystem);
    std::vector<std::string> axis(subs.begin(), subs.end());
    axis.push_back("all");
    return axis;
}

bool in_subsystem(const Classified& row, const std::string& sub) {
    return sub == "all" || row.rec->subsystem == sub;
}

std::string failure_distribution(const std::vector<Classified>& rows) {
    CsvWriter csv({"subsystem", "failure_class", "count", "share_pct"});
    for (const auto& sub : subsystem_axis(rows)) {
        int total = 0;
        for (const auto& row : rows) {
            if (in_subsystem(row, sub)) total += 1;
        }
        for (auto cls : all_failure_classes()) {
            int count = 0;
            for (const auto& row : rows) {
                if (in_subsystem(row, sub) && row.v.cls == cls) count += 1;
            }
            csv.add_row({sub, failure_class_name(cls), std::to_string(count), pct(count, total)});
        }
    }
    return csv.str();
}

std::string assertion_failures(const std::vector<Classified>& rows) {
    std::map<std::string, int> counts;
    for (const auto& row : rows) {
        for (const auto& ev : row.rec->faulty.failed_assertions()) {
            counts[ev.id] += 1;
        }
    }
    CsvWriter csv({"assertion", "subsystem", "count"});
    std::set<std::string> known;
    for (const auto& def : workload::assertion_defs()) {
        known.insert(def.name);
        csv.add_row({def.name, def.subsystem, std::to_string(counts[def.name])});
    }
    // Synthetic datasets may use assertion names outside the built-in list;
    // keep their counts visible rather than dropping them.
    for (const auto& [name, count] : counts) {
        if (!known.count(name)) csv.add_row({name, "-", std::to_string(count)});
    }
    return csv.str();
}

std::string api_error_endpoints(const std::vector<Classified>& rows) {
    std::map<std::tuple<std::string, std::string, std::string>, int> counts;
    for (const auto& row : rows) {
        if (row.v.api_error_endpoint) {
            counts[{*row.v.api_error_subsystem, *row.v.api_error_endpoint,
                    *row.v.api_error_code}] += 1;
        }
    }
    CsvWriter csv({"subsystem", "endpoint", "code", "count"});
    for (const auto& [key, count] : counts) {
        csv.add_row({std::get<0>(key), std::get<1>(key), std::get<2>(key),
                     std::to_string(count)});
    }
    return csv.str();
}

std::vector<double> latencies_for(const std::vector<Classified>& rows, const std::string& sub,
                                  std::optional<LatencyCategory> cat) {
    std::vector<double> values;
    for (const auto& row : rows) {
        if (!row.v.latency_secs) continue;
        if (!in_subsystem(row, sub)) continue;
        if (cat && row.v.latency_category != *cat) continue;
        values.push_back(*row.v.latency_secs);
    }
    return values;
}

void add_latency_row(CsvWriter& csv, const std::string& sub, const std::string& cat_name,
                     const std::vector<double>& values) {
    if (values.empty()) {
        csv.add_row({sub, cat_name, "0", "-", "-", "-"});
        return;
    }
    csv.add_row({sub, cat_name, std::to_string(values.size()),
                 format_fixed(mean(values), 3),
                 format_fixed(percentile_nearest_rank(values, 0.5), 3),
                 format_fixed(percentile_nearest_rank(values, 0.9), 3)});
}

std::string latency_stats(const std::vector<Classified>& rows) {
    CsvWriter csv({"subsystem", "category", "samples", "avg_secs", "p50_secs", "p90_secs"});
    for (const auto& sub : subsystem_axis(rows)) {
        add_latency_row(csv, sub, latency_category_name(LatencyCategory::ApiAfterAssertion),
                        latencies_for(rows, sub, LatencyCategory::ApiAfterAssertion));
        add_latency_row(csv, sub, latency_category_name(LatencyCategory::ApiOnly),
                        latencies_for(rows, sub, LatencyCategory::ApiOnly));
        add_latency_row(csv, sub, "all", latencies_for(rows, sub, std::nullopt));
    }
    return csv.str();
}

std::string latency_cdf(const std::vector<Classified>& rows) {
    auto values = latencies_for(rows, "all", std::nullopt);
    std::sort(values.begin(), values.end());
    CsvWriter csv({"latency_secs", "cum_fraction"});
    for (size_t i = 0; i < values.size(); ++i) {
        csv.add_row({format_fixed(values[i], 3),
                     format_fixed(static_cast<double>(i + 1) / values.size(), 2)});
    }
    return csv.str();
}

std::string logging_coverage(const std::vector<Classified>& rows) {
    CsvWriter csv({"subsystem", "failure_class", "failures", "logged", "coverage_pct"});
    for (const auto& sub : subsystem_axis(rows)) {
        for (auto cls : all_failure_classes()) {
            if (cls == FailureClass::NoFailure) continue;
            int failures = 0;
            int logged = 0;
            for (const auto& row : rows) {
                if (!in_subsystem(row, sub) || row.v.cls != cls) continue;
                failures += 1;
                if (row.v.logged_faulty) logged += 1;
            }
            csv.add_row({sub, failure_class_name(cls), std::to_string(failures),
                         std::to_string(logged), pct(logged, failures)});
        }
    }
    return csv.str();
}

std::string opt_str(const std::optional<std::string>& v) { return v ? *v : "-"; }

std::string classifications(const std::vector<Classified>& rows) {
    CsvWriter csv({"point", "subsystem", "bug_type", "failure_class", "propagation_round",
                   "logged", "logged_fault_free", "latency_secs", "latency_category",
                   "latency_flagged", "spatial", "first_failed_assertion",
                   "api_error_subsystem", "api_error_code", "sentinel_seen", "fresh_store"});
    for (const auto& row : rows) {
        const auto& v = row.v;
        bool failed = v.cls != FailureClass::NoFailure;
        csv.add_row({row.rec->point_id,
                     row.rec->subsystem,
                     row.rec->bug_type,
                     failure_class_name(v.cls),
                     v.fault_free_propagated ? "FAULT_FREE_PROPAGATED" : "FAULTY_ONLY",
                     failed ? (v.logged_faulty ? "true" : "false") : "-",
                     v.logged_fault_free ? "true" : "false",
                     v.latency_secs ? format_fixed(*v.latency_secs, 3) : "-",
                     v.latency_category ? latency_category_name(*v.latency_category) : "-",
                     v.latency_flagged ? "true" : "false",
                     v.spatial ? "true" : "false",
                     opt_str(v.first_failed_assertion),
                     opt_str(v.api_error_subsystem),
                     opt_str(v.api_error_code),
                     row.rec->sentinel_seen ? "true" : "false",
                     row.rec->fresh_store ? "true" : "false"});
    }
    return csv.str();
}

std::string summary_text(const Dataset& ds, const std::vector<Classified>& rows,
                         const std::vector<std::pair<std::string, std::string>>& excluded) {
    std::ostringstream out;
    const int completed = static_cast<int>(rows.size());
    int failed = 0;
    std::map<FailureClass, int> by_class;
    int propagated = 0;
    int spatial = 0;
    int logged = 0;
    for (const auto& row : rows) {
        by_class[row.v.cls] += 1;
        if (row.v.cls != FailureClass::NoFailure) {
            failed += 1;
            if (row.v.logged_faulty) logged += 1;
            if (row.v.spatial) spatial += 1;
        }
        if (row.v.fault_free_propagated) propagated += 1;
    }

    out << "campaign analysis summary\n";
    out << "=========================\n\n";
    out << "experiments\n";
    out << "  completed: " << completed << "\n";
    out << "  invalid:   " << ds.invalid.size() << "\n";
    out << "  excluded:  " << excluded.size() << "\n\n";

    out << "failure classes (share of completed)\n";
    for (auto cls : all_failure_classes()) {
        out << "  " << failure_class_name(cls) << ": " << by_class[cls] << " ("
            << pct(by_class[cls], completed) << "%)\n";
    }
    out << "\n";

    out << "propagation\n";
    out << "  failures: " << failed << " (" << pct(failed, completed) << "% of completed)\n";
    out << "  fault-free round still failing: " << propagated << " (" << pct(propagated, completed)
        << "% of completed)\n";
    out << "  spatial (manifested outside the injected subsystem): " << spatial << " ("
        << pct(spatial, failed) << "% of failures)\n\n";

    out << "logging\n";
    out << "  logged failures (ERROR or above in the faulty round): " << logged << " ("
        << pct(logged, failed) << "% of failures)\n";
    out << "  non-logged failures: " << (failed - logged) << " (" << pct(failed - logged, failed)
        << "% of failures)\n\n";

    auto all_lat = latencies_for(rows, "all", std::nullopt);
    out << "api-error latency (seconds)\n";
    if (all_lat.empty()) {
        out << "  no samples\n";
    } else {
        out << "  samples: " << all_lat.size() << "\n";
        out << "  avg: " << format_fixed(mean(all_lat), 3) << "\n";
        out << "  p50: " << format_fixed(percentile_nearest_rank(all_lat, 0.5), 3) << "\n";
        out << "  p90: " << format_fixed(percentile_nearest_rank(all_lat, 0.9), 3) << "\n";
    }

    if (!ds.invalid.empty()) {
        out << "\ninvalid records\n";
        for (const auto& [id, reason] : ds.invalid) {
            out << "  " << id << ": " << reason << "\n";
        }
    }
    if (!excluded.empty()) {
        out << "\nexcluded records\n";
        for (const auto& [id, reason] : excluded) {
            out << "  " << id << ": " << reason << "\n";
        }
    }
    return out.str();
}

}  // namespace

const std::string* ReportBundle::find(const std::string& name) const {
    for (const auto& [file, content] : files) {
        if (file == name) return &content;
    }
    return nullptr;
}

ReportBundle build_reports(const Dataset& ds) {
    std::vector<Classified> rows;
    auto excluded = ds.excluded;
    for (const auto& rec : ds.completed) {
        try {
            rows.push_back({&rec, classify_record(rec)});
        } catch (const AnalysisError& e) {
            excluded.emplace_back(rec.point_id, e.what());
        }
    }

    ReportBundle bundle;
    bundle.files.emplace_back("failure_distribution.csv", failure_distribution(rows));
    bundle.files.emplace_back("assertion_failures.csv", assertion_failures(rows));
    bundle.files.emplace_back("api_error_endpoints.csv", api_error_endpoints(rows));
    bundle.files.emplace_back("latency_stats.csv", latency_stats(rows));
    bundle.files.emplace_back("latency_cdf.csv", latency_cdf(rows));
    bundle.files.emplace_back("logging_coverage.csv", logging_coverage(rows));
    bundle.files.emplace_back("classifications.csv", classifications(rows));

    std::vector<ExperimentRecord> usable;
    usable.reserve(rows.size());
    for (const auto& row : rows) usable.push_back(*row.rec);
    bundle.files.emplace_back(
        "graph_faulty.dot",
        graph_to_dot(build_propagation_graph(usable, GraphRound::Faulty), "faulty_round"));
    bundle.files.emplace_back(
        "graph_fault_free.dot",
        graph_to_dot(build_propagation_graph(usable, GraphRound::FaultFree), "fault_free_round"));
    bundle.files.emplace_back("summary.txt", summary_text(ds, rows, excluded));
    return bundle;
}

ReportBundle write_reports(const Dataset& ds, const std::filesystem::path& reports_dir) {
    auto bundle = build_reports(ds);
    support::ensure_dir(reports_dir);
    for (const auto& [name, content] : bundle.files) {
        support::write_file(reports_dir / name, content);
    }
    return bundle;
}

}  // namespace faultline::analyze
