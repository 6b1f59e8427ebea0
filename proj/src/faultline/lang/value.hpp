#pragma once

#include <json.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace faultline::lang {

// Runtime value. Lists and maps have reference semantics (shared between
// bindings, mutations visible through every alias), matching what script
// authors expect from a dynamic language. Map iteration order is key-sorted,
// which keeps every observable behavior deterministic.
class Value {
public:
    using List = std::vector<Value>;
    using ListRef = std::shared_ptr<List>;
    using Map = std::map<std::string, Value>;
    using MapRef = std::shared_ptr<Map>;

    enum class Kind { Null, Bool, Int, Float, Str, List, Map };

    Value() : kind_(Kind::Null) {}

    static Value null() { return Value(); }
    static Value boolean(bool b);
    static Value integer(int64_t i);
    static Value real(double d);
    static Value str(std::string s);
    static Value list(List items);
    static Value map(Map entries);

    Kind kind() const { return kind_; }
    bool is_null() const { return kind_ == Kind::Null; }

    bool as_bool() const { return bool_; }
    int64_t as_int() const { return int_; }
    double as_float() const { return kind_ == Kind::Int ? static_cast<double>(int_) : float_; }
    const std::string& as_str() const { return *str_; }
    const ListRef& list_ref() const { return list_; }
    const MapRef& map_ref() const { return map_; }

    bool truthy() const;
    bool equals(const Value& other) const;

    // Stable textual form: scalars print naturally, containers as canonical
    // JSON with sorted keys. Used by str() and in log messages.
    std::string repr() const;

    nlohmann::ordered_json to_json() const;
    static Value from_json(const nlohmann::json& j);
    static Value from_json(const nlohmann::ordered_json& j);

    // Structural copy that shares nothing with the original.
    Value deep_copy() const;

    static const char* kind_name(Kind kind);

private:
    Kind kind_;
    bool bool_ = false;
    int64_t int_ = 0;
    double float_ = 0.0;
    std::shared_ptr<std::string> str_;
    ListRef list_;
    MapRef map_;
};

// Script-level error. Thrown by the interpreter and by host builtins; caught
// by try/catch in scripts, or converted to an API error at the service shell.
struct ScriptError {
    std::string type;
    std::string message;
    Value::Map detail;  // extra fields exposed to catch binders, e.g. "code"

    std::string to_string() const { return type + ": " + message; }
};

}  // namespace faultline::lang
