#include "faultline/engine/rewrite.hpp"

#include <algorithm>
#include <stdexcept>

namespace faultline::engine {

std::string apply_splices(const std::string& source, std::vector<Splice> splices) {
    std::sort(splices.begin(), splices.end(), [](const Splice& a, const Splice& b) {
        if (a.begin != b.begin) {
            return a.begin < b.begin;
        }
        return a.end < b.end;
    });
    for (size_t i = 0; i + 1 < splices.size(); ++i) {
        if (splices[i].end > splices[i + 1].begin) {
            throw std::logic_error("overlapping splices at offsets " +
                                   std::to_string(splices[i].begin) + " and " +
                                   std::to_string(splices[i + 1].begin));
        }
    }
    if (!splices.empty() && splices.back().end > source.size()) {
        throw std::logic_error("splice past end of source");
    }
    std::string out = source;
    for (auto it = splices.rbegin(); it != splices.rend(); ++it) {
        out.replace(it->begin, it->end - it->begin, it->replacement);
    }
    return out;
}

std::string render_literal(const support::json& value) {
    switch (value.type()) {
        case support::json::value_t::null:
            return "null";
        case support::json::value_t::boolean:
            return value.get<bool>() ? "true" : "false";
        case support::json::value_t::number_integer:
        case support::json::value_t::number_unsigned:
            return value.dump();
        case support::json::value_t::string: {
            std::string out = "\"";
            for (char c : value.get<std::string>()) {
                switch (c) {
                    case '"': out += "\\\""; break;
                    case '\\': out += "\\\\"; break;
                    case '\n': out += "\\n"; break;
                    case '\t': out += "\\t"; break;
                    default: out += c;
                }
            }
            out += '"';
            return out;
        }
        case support::json::value_t::array:
            if (!value.empty()) {
                throw std::invalid_argument("only empty list literals can be rendered");
            }
            return "[]";
        case support::json::value_t::object:
            if (!value.empty()) {
                throw std::invalid_argument("only empty map literals can be rendered");
            }
            return "{}";
        default:
            throw std::invalid_argument("cannot render literal of type " +
                                        std::string(value.type_name()));
    }
}

}  // namespace faultline::engine
