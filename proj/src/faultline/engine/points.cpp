#include "faultline/engine/points.hpp"

#include <cstdio>
#include <stdexcept>

namespace faultline::engine {

const char* bug_type_name(BugType type) {
    switch (type) {
        case BugType::WrongParamValue: return "WRONG_PARAM_VALUE";
        case BugType::MissingParam: return "MISSING_PARAM";
        case BugType::MissingFuncCall: return "MISSING_FUNC_CALL";
        case BugType::WrongReturnValue: return "WRONG_RETURN_VALUE";
        case BugType::MissingExcHandler: return "MISSING_EXC_HANDLER";
    }
    return "?";
}

const char* bug_type_abbrev(BugType type) {
    switch (type) {
        case BugType::WrongParamValue: return "wpv";
        case BugType::MissingParam: return "mp";
        case BugType::MissingFuncCall: return "mfc";
        case BugType::WrongReturnValue: return "wrv";
        case BugType::MissingExcHandler: return "meh";
    }
    return "?";
}

BugType bug_type_from_name(const std::string& name) {
    for (BugType t : {BugType::WrongParamValue, BugType::MissingParam, BugType::MissingFuncCall,
                      BugType::WrongReturnValue, BugType::MissingExcHandler}) {
        if (name == bug_type_name(t)) {
            return t;
        }
    }
    throw std::invalid_argument("unknown bug type: " + name);
}

int bug_type_rank(BugType type) {
    return static_cast<int>(type);
}

const char* call_role_name(CallRole role) {
    switch (role) {
        case CallRole::Statement: return "statement";
        case CallRole::Assigned: return "assigned";
        case CallRole::Nested: return "nested";
    }
    return "?";
}

CallRole call_role_from_name(const std::string& name) {
    for (CallRole r : {CallRole::Statement, CallRole::Assigned, CallRole::Nested}) {
        if (name == call_role_name(r)) {
            return r;
        }
    }
    throw std::invalid_argument("unknown call role: " + name);
}

support::json InjectionPoint::to_json() const {
    support::json j;
    j["id"] = id;
    j["file"] = rel_path;
    j["subsystem"] = subsystem;
    j["bug_type"] = bug_type_name(bug_type);
    j["span"] = {site_begin, site_end};
    if (operand_index >= 0) {
        j["operand_index"] = operand_index;
        j["operand_span"] = {operand_begin, operand_end};
    }
    j["callee"] = callee;
    j["function"] = function;
    j["role"] = call_role_name(role);
    j["line"] = line;
    return j;
}

InjectionPoint InjectionPoint::from_json(const support::json& j) {
    InjectionPoint p;
    p.id = j.at("id").get<std::string>();
    p.rel_path = j.at("file").get<std::string>();
    p.subsystem = j.at("subsystem").get<std::string>();
    p.bug_type = bug_type_from_name(j.at("bug_type").get<std::string>());
    p.site_begin = j.at("span").at(0).get<size_t>();
    p.site_end = j.at("span").at(1).get<size_t>();
    if (j.contains("operand_index")) {
        p.operand_index = j.at("operand_index").get<int>();
        p.operand_begin = j.at("operand_span").at(0).get<size_t>();
        p.operand_end = j.at("operand_span").at(1).get<size_t>();
    }
    p.callee = j.at("callee").get<std::string>();
    p.function = j.at("function").get<std::string>();
    p.role = call_role_from_name(j.at("role").get<std::string>());
    p.line = j.at("line").get<int>();
    return p;
}

std::string mint_point_id(const InjectionPoint& point) {
    std::string slug;
    for (char c : point.rel_path) {
        if (c == '/' ) {
            slug += '_';
        } else if (c == '.') {
            break;  // drop the extension
        } else {
            slug += c;
        }
    }
    char offset[16];
    std::snprintf(offset, sizeof(offset), "%05zu", point.site_begin);
    std::string id = slug + "-" + offset + "-" + bug_type_abbrev(point.bug_type);
    if (point.operand_index >= 0 && point.bug_type != BugType::WrongReturnValue) {
        id += "-" + std::to_string(point.operand_index);
    }
    return id;
}

}  // namespace faultline::engine
