#include "faultline/support/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace faultline::support {

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvWriter::add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) {
        throw std::invalid_argument("CSV row width " + std::to_string(cells.size()) +
                                    " does not match header width " +
                                    std::to_string(header_.size()));
    }
    rows_.push_back(std::move(cells));
}

std::string CsvWriter::escape(const std::string& cell) {
    bool needs_quotes = false;
    for (char c : cell) {
        if (c == ',' || c == '"' || c == '\n' || c == '\r') {
            needs_quotes = true;
            break;
        }
    }
    if (!needs_quotes) {
        return cell;
    }
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') {
            out += "\"\"";
        } else {
            out += c;
        }
    }
    out += '"';
    return out;
}

std::string CsvWriter::str() const {
    std::string out;
    auto emit = [&out](const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) {
                out += ',';
            }
            out += escape(cells[i]);
        }
        out += '\n';
    };
    emit(header_);
    for (const auto& row : rows_) {
        emit(row);
    }
    return out;
}

std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    // Normalize negative zero so "-0.00" never leaks into reports.
    std::string s = buf;
    bool all_zero = true;
    for (char c : s) {
        if (c >= '1' && c <= '9') {
            all_zero = false;
            break;
        }
    }
    if (all_zero && !s.empty() && s[0] == '-') {
        s.erase(0, 1);
    }
    return s;
}

}  // namespace faultline::support
