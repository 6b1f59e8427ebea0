#pragma once

#include <string>
#include <vector>

namespace faultline::support {

// Minimal CSV emitter with the fixed numeric formats used by all reports:
// counts as integers, ratios/percentages with 2 decimals, latencies with 3.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    void add_row(std::vector<std::string> cells);
    std::string str() const;

    static std::string escape(const std::string& cell);

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::string format_fixed(double value, int decimals);

}  // namespace faultline::support
