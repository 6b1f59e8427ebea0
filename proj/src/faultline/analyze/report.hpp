#pragma once

#include "faultline/analyze/classify.hpp"
#include "faultline/analyze/dataset.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace faultline::analyze {

// Every report file as name -> content, in a fixed order. The content is a
// pure function of the dataset, so identical datasets yield identical bytes.
struct ReportBundle {
    std::vector<std::pair<std::string, std::string>> files;

    const std::string* find(const std::string& name) const;
};

ReportBundle build_reports(const Dataset& ds);

// Builds and writes the bundle into reports_dir (created if needed).
ReportBundle write_reports(const Dataset& ds, const std::filesystem::path& reports_dir);

}  // namespace faultline::analyze
