#include "faultline/engine/corrupt.hpp"

namespace faultline::engine {

const char* corruption_kind_for(const lang::Value& value) {
    switch (value.kind()) {
        case lang::Value::Kind::Map: return "object-reference";
        case lang::Value::Kind::Int: return "integer";
        case lang::Value::Kind::Str: return "string";
        case lang::Value::Kind::Bool: return "boolean";
        case lang::Value::Kind::List: return "collection";
        default: return nullptr;
    }
}

support::json corrupt(const std::string& kind, const support::json& value) {
    if (kind == "object-reference") {
        if (!value.is_object()) {
            throw CorruptError("object-reference corruption needs an object, got " +
                               std::string(value.type_name()));
        }
        return nullptr;
    }
    if (kind == "integer") {
        if (!value.is_number_integer()) {
            throw CorruptError("integer corruption needs an integer, got " +
                               std::string(value.type_name()));
        }
        return -1;
    }
    if (kind == "string") {
        if (!value.is_string()) {
            throw CorruptError("string corruption needs a string, got " +
                               std::string(value.type_name()));
        }
        return "";
    }
    if (kind == "boolean") {
        if (!value.is_boolean()) {
            throw CorruptError("boolean corruption needs a boolean, got " +
                               std::string(value.type_name()));
        }
        return !value.get<bool>();
    }
    if (kind == "collection") {
        if (!value.is_array()) {
            throw CorruptError("collection corruption needs an array, got " +
                               std::string(value.type_name()));
        }
        return support::json::array();
    }
    throw CorruptError("no corruption rule for kind '" + kind + "'");
}

lang::Value corrupt_value(const lang::Value& value) {
    switch (value.kind()) {
        case lang::Value::Kind::Map: return lang::Value::null();
        case lang::Value::Kind::Int: return lang::Value::integer(-1);
        case lang::Value::Kind::Str: return lang::Value::str("");
        case lang::Value::Kind::Bool: return lang::Value::boolean(!value.as_bool());
        case lang::Value::Kind::List: return lang::Value::list({});
        default:
            throw lang::ScriptError{
                "UnsupportedKind",
                std::string("no corruption rule for runtime kind ") +
                    lang::Value::kind_name(value.kind()),
                {}};
    }
}

}  // namespace faultline::engine
