#include "faultline/engine/instrument.hpp"

#include "faultline/engine/locate.hpp"
#include "faultline/lang/parser.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace faultline::engine {

namespace {

// Wrap/insert edits that may nest (a matched call inside another matched
// call's argument list). Applied innermost first; enclosing edits take their
// wrapped text from the current buffer, so offsets are adjusted as we go.
struct Edit {
    size_t begin = 0;
    size_t end = 0;          // begin == end: insertion
    std::string prefix;      // text before the original range
    std::string suffix;      // text after it (insertions use prefix only)
};

std::string apply_nesting_edits(const std::string& source, std::vector<Edit> edits,
                                const std::string& rel_path) {
    std::sort(edits.begin(), edits.end(), [](const Edit& a, const Edit& b) {
        const size_t la = a.end - a.begin;
        const size_t lb = b.end - b.begin;
        if (la != lb) {
            return la < lb;
        }
        return a.begin < b.begin;
    });
    std::string text = source;
    for (size_t i = 0; i < edits.size(); ++i) {
        const Edit& edit = edits[i];
        const std::string original = text.substr(edit.begin, edit.end - edit.begin);
        const std::string replacement = edit.prefix + original + edit.suffix;
        text.replace(edit.begin, edit.end - edit.begin, replacement);
        const size_t delta = replacement.size() - original.size();
        for (size_t j = i + 1; j < edits.size(); ++j) {
            Edit& later = edits[j];
            if (later.end <= edit.begin) {
                continue;
            }
            if (later.begin >= edit.end) {
                later.begin += delta;
                later.end += delta;
            } else if (later.begin <= edit.begin && later.end >= edit.end) {
                later.end += delta;
            } else {
                throw std::logic_error("instrument: overlapping probe edits in " + rel_path);
            }
        }
    }
    return text;
}

}  // namespace

InstrumentedTree instrument_coverage(const TargetTree& tree,
                                     const std::vector<InjectionPoint>& points) {
    // Group per file: call-site points share one marker per call span, and
    // each handler-removal point gets a marker at the top of its try body.
    struct FilePlan {
        std::map<std::pair<size_t, size_t>, std::string> call_sites;  // span -> joined ids
        std::vector<std::pair<size_t, std::string>> try_markers;      // insert offset, id
    };
    std::map<std::string, FilePlan> plans;

    for (const auto& point : points) {
        const TargetTree::Entry* entry = tree.find(point.rel_path);
        if (!entry) {
            throw std::runtime_error("instrument: point " + point.id +
                                     " references unknown file " + point.rel_path);
        }
        FilePlan& plan = plans[point.rel_path];
        if (point.bug_type == BugType::MissingExcHandler) {
            const lang::Stmt* try_stmt =
                locate_try(entry->file, point.site_begin, point.site_end);
            if (!try_stmt) {
                throw std::runtime_error("instrument: stale handler site for " + point.id);
            }
            plan.try_markers.emplace_back(try_stmt->body.inner_span.begin, point.id);
        } else {
            std::string& ids = plan.call_sites[{point.site_begin, point.site_end}];
            if (!ids.empty()) {
                ids += ',';
            }
            ids += point.id;
        }
    }

    InstrumentedTree out;
    for (const auto& entry : tree.entries()) {
        auto plan_it = plans.find(entry.file.rel_path);
        if (plan_it == plans.end()) {
            out.files.emplace_back(entry.file.rel_path, entry.file.source);
            continue;
        }
        const FilePlan& plan = plan_it->second;
        std::vector<Edit> edits;
        for (const auto& [span, ids] : plan.call_sites) {
            edits.push_back({span.first, span.second,
                             "__seq(__mark(\"" + ids + "\"), ", ")"});
            ++out.marker_count;
        }
        for (const auto& [offset, id] : plan.try_markers) {
            edits.push_back({offset, offset, " __mark(\"" + id + "\");", ""});
            ++out.marker_count;
        }
        std::string instrumented =
            apply_nesting_edits(entry.file.source, std::move(edits), entry.file.rel_path);
        lang::ParseError error;
        if (!lang::parse_source(instrumented, error)) {
            throw std::logic_error("instrumented source no longer parses (" +
                                   entry.file.rel_path + "): " + error.to_string());
        }
        out.files.emplace_back(entry.file.rel_path, std::move(instrumented));
    }
    return out;
}

}  // namespace faultline::engine
