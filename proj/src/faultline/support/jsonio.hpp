#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace faultline::support {

// ordered_json preserves insertion order, which keeps emitted files readable
// and stable. Plain json (sorted keys) is used where canonical byte output
// matters, e.g. datastore snapshots.
using json = nlohmann::ordered_json;
using cjson = nlohmann::json;

json load_json_file(const std::filesystem::path& path);

// Write via temp file + rename so readers never observe a partial file.
void save_json_file(const std::filesystem::path& path, const json& value, int indent = 2);

// One JSON document per line. Blank lines are skipped on read.
std::vector<json> load_jsonl_file(const std::filesystem::path& path);
void save_jsonl_file(const std::filesystem::path& path, const std::vector<json>& rows);
void append_jsonl_line(const std::filesystem::path& path, const json& row);

// Canonical single-line dump with sorted keys, used for hashing and snapshots.
std::string canonical_dump(const json& value);

}  // namespace faultline::support
