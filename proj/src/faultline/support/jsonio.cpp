#include "faultline/support/jsonio.hpp"

#include "faultline/support/fs.hpp"

#include <sstream>
#include <stdexcept>

namespace faultline::support {

json load_json_file(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    try {
        return json::parse(text);
    } catch (const std::exception& ex) {
        throw std::runtime_error("invalid JSON in " + path.string() + ": " + ex.what());
    }
}

void save_json_file(const std::filesystem::path& path, const json& value, int indent) {
    write_file(path, value.dump(indent) + "\n");
}

std::vector<json> load_jsonl_file(const std::filesystem::path& path) {
    std::vector<json> rows;
    std::istringstream in(read_file(path));
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        try {
            rows.push_back(json::parse(line));
        } catch (const std::exception& ex) {
            throw std::runtime_error("invalid JSON at " + path.string() + ":" +
                                     std::to_string(lineno) + ": " + ex.what());
        }
    }
    return rows;
}

void save_jsonl_file(const std::filesystem::path& path, const std::vector<json>& rows) {
    std::string out;
    for (const auto& row : rows) {
        out += row.dump();
        out += '\n';
    }
    write_file(path, out);
}

void append_jsonl_line(const std::filesystem::path& path, const json& row) {
    append_file(path, row.dump() + "\n");
}

std::string canonical_dump(const json& value) {
    // Round-trip through the key-sorted type so object member order cannot
    // depend on insertion history.
    cjson sorted = cjson::parse(value.dump());
    return sorted.dump();
}

}  // namespace faultline::support
