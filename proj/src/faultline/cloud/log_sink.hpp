#pragma once

#include "faultline/cloud/catalog.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace faultline::cloud {

// One component's log file. Every line is stamped with logical time obtained
// from the stamp callback (a datastore round trip in deployed services), so
// identical executions produce identical log bytes.
class LogSink {
public:
    LogSink(std::filesystem::path file, std::string component,
            std::function<int64_t()> stamp);

    void write(Severity sev, const std::string& message);

private:
    std::filesystem::path file_;
    std::string component_;
    std::function<int64_t()> stamp_;
};

struct LogLine {
    int64_t t_ms = 0;
    Severity sev = Severity::Info;
    std::string component;
    std::string message;
};

std::string render_log_line(int64_t t_ms, Severity sev, const std::string& component,
                            const std::string& message);

// Strict parser for the renderer's format; malformed lines throw.
LogLine parse_log_line(const std::string& line);
std::vector<LogLine> parse_log_file(const std::filesystem::path& file);

}  // namespace faultline::cloud
