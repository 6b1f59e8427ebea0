#pragma once

#include "faultline/support/jsonio.hpp"

#include <string>

namespace faultline::engine {

// The five fault shapes this engine can plant at a matched call site.
enum class BugType {
    WrongParamValue,
    MissingParam,
    MissingFuncCall,
    WrongReturnValue,
    MissingExcHandler,
};

const char* bug_type_name(BugType type);          // e.g. "WRONG_PARAM_VALUE"
const char* bug_type_abbrev(BugType type);        // e.g. "wpv", used in point ids
BugType bug_type_from_name(const std::string& name);
int bug_type_rank(BugType type);                  // enumeration order within a site

// How the matched call's value is used at its site. Drives which bug types
// apply and how a missing call is realized.
enum class CallRole {
    Statement,   // the call is a whole expression statement
    Assigned,    // the call is the entire right side of an assignment
    Nested,      // the call's value feeds a larger expression
};

const char* call_role_name(CallRole role);
CallRole call_role_from_name(const std::string& name);

// One place where one bug type can be injected. Spans are byte offsets into
// the unmodified source file: `site` covers the matched call (the whole try
// statement for MissingExcHandler), `operand` the affected argument when the
// bug type has one.
struct InjectionPoint {
    std::string id;
    std::string rel_path;
    std::string subsystem;
    BugType bug_type = BugType::WrongParamValue;
    size_t site_begin = 0;
    size_t site_end = 0;
    int operand_index = -1;       // argument index; -1 when not applicable
    size_t operand_begin = 0;     // valid when operand_index >= 0
    size_t operand_end = 0;
    std::string callee;
    std::string function;         // enclosing function
    CallRole role = CallRole::Statement;
    int line = 0;                 // 1-based, location of site_begin

    support::json to_json() const;
    static InjectionPoint from_json(const support::json& j);
};

// Stable, filesystem-safe identifier: <path-slug>-<offset>-<type>[-<operand>].
std::string mint_point_id(const InjectionPoint& point);

}  // namespace faultline::engine
