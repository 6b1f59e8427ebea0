#include "faultline/cloud/log_sink.hpp"

#include "faultline/support/fs.hpp"
#include "faultline/support/timeutil.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace faultline::cloud {

LogSink::LogSink(std::filesystem::path file, std::string component,
                 std::function<int64_t()> stamp)
    : file_(std::move(file)), component_(std::move(component)), stamp_(std::move(stamp)) {
    support::ensure_dir(file_.parent_path());
}

void LogSink::write(Severity sev, const std::string& message) {
    const int64_t t_ms = stamp_();
    support::append_file(file_, render_log_line(t_ms, sev, component_, message) + "\n");
}

std::string render_log_line(int64_t t_ms, Severity sev, const std::string& component,
                            const std::string& message) {
    return support::iso_from_ms(t_ms) + " " + severity_name(sev) + " [" + component + "] " +
           message;
}

LogLine parse_log_line(const std::string& line) {
    // 2026-01-02T03:04:05.678Z SEVERITY [component] message
    const auto bad = [&line](const char* why) {
        throw std::runtime_error(std::string("malformed log line (") + why + "): " + line);
    };

    int year = 0;
    int month = 0;
    int day = 0;
    int hour = 0;
    int minute = 0;
    int sec = 0;
    int millis = 0;
    int consumed = 0;
    if (std::sscanf(line.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d.%3dZ %n", &year, &month, &day,
                    &hour, &minute, &sec, &millis, &consumed) != 7) {
        bad("timestamp");
    }
    LogLine out;
    out.t_ms = ((((static_cast<int64_t>(day) - 1) * 24 + hour) * 60 + minute) * 60 + sec) *
                   1000 +
               millis;

    size_t pos = static_cast<size_t>(consumed);
    const size_t sev_end = line.find(' ', pos);
    if (sev_end == std::string::npos) {
        bad("severity");
    }
    if (!parse_severity(line.substr(pos, sev_end - pos), out.sev)) {
        bad("severity");
    }

    pos = sev_end + 1;
    if (pos >= line.size() || line[pos] != '[') {
        bad("component");
    }
    const size_t comp_end = line.find(']', pos);
    if (comp_end == std::string::npos) {
        bad("component");
    }
    out.component = line.substr(pos + 1, comp_end - pos - 1);

    pos = comp_end + 1;
    if (pos < line.size() && line[pos] == ' ') {
        ++pos;
    }
    out.message = line.substr(pos);
    return out;
}

std::vector<LogLine> parse_log_file(const std::filesystem::path& file) {
    std::vector<LogLine> lines;
    std::ifstream in(file);
    if (!in) {
        return lines;
    }
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) {
            lines.push_back(parse_log_line(line));
        }
    }
    return lines;
}

}  // namespace faultline::cloud
