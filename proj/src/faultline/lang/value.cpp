#include "faultline/lang/value.hpp"

#include <cmath>
#include <cstdio>

namespace faultline::lang {

Value Value::boolean(bool b) {
    Value v;
    v.kind_ = Kind::Bool;
    v.bool_ = b;
    return v;
}

Value Value::integer(int64_t i) {
    Value v;
    v.kind_ = Kind::Int;
    v.int_ = i;
    return v;
}

Value Value::real(double d) {
    Value v;
    v.kind_ = Kind::Float;
    v.float_ = d;
    return v;
}

Value Value::str(std::string s) {
    Value v;
    v.kind_ = Kind::Str;
    v.str_ = std::make_shared<std::string>(std::move(s));
    return v;
}

Value Value::list(List items) {
    Value v;
    v.kind_ = Kind::List;
    v.list_ = std::make_shared<List>(std::move(items));
    return v;
}

Value Value::map(Map entries) {
    Value v;
    v.kind_ = Kind::Map;
    v.map_ = std::make_shared<Map>(std::move(entries));
    return v;
}

bool Value::truthy() const {
    switch (kind_) {
        case Kind::Null: return false;
        case Kind::Bool: return bool_;
        case Kind::Int: return int_ != 0;
        case Kind::Float: return float_ != 0.0;
        case Kind::Str: return !str_->empty();
        case Kind::List: return !list_->empty();
        case Kind::Map: return !map_->empty();
    }
    return false;
}

bool Value::equals(const Value& other) const {
    if (kind_ != other.kind_) {
        // Int/float compare numerically, everything else only within a kind.
        const bool numeric = (kind_ == Kind::Int || kind_ == Kind::Float) &&
                             (other.kind_ == Kind::Int || other.kind_ == Kind::Float);
        if (!numeric) {
            return false;
        }
        return as_float() == other.as_float();
    }
    switch (kind_) {
        case Kind::Null: return true;
        case Kind::Bool: return bool_ == other.bool_;
        case Kind::Int: return int_ == other.int_;
        case Kind::Float: return float_ == other.float_;
        case Kind::Str: return *str_ == *other.str_;
        case Kind::List: {
            if (list_->size() != other.list_->size()) {
                return false;
            }
            for (size_t i = 0; i < list_->size(); ++i) {
                if (!(*list_)[i].equals((*other.list_)[i])) {
                    return false;
                }
            }
            return true;
        }
        case Kind::Map: {
            if (map_->size() != other.map_->size()) {
                return false;
            }
            auto it = other.map_->begin();
            for (const auto& [key, value] : *map_) {
                if (it->first != key || !value.equals(it->second)) {
                    return false;
                }
                ++it;
            }
            return true;
        }
    }
    return false;
}

std::string Value::repr() const {
    switch (kind_) {
        case Kind::Null: return "null";
        case Kind::Bool: return bool_ ? "true" : "false";
        case Kind::Int: return std::to_string(int_);
        case Kind::Float: {
            char buf[48];
            std::snprintf(buf, sizeof(buf), "%.6g", float_);
            return buf;
        }
        case Kind::Str: return *str_;
        case Kind::List:
        case Kind::Map:
            return nlohmann::json::parse(to_json().dump()).dump();
    }
    return "null";
}

nlohmann::ordered_json Value::to_json() const {
    using oj = nlohmann::ordered_json;
    switch (kind_) {
        case Kind::Null: return nullptr;
        case Kind::Bool: return bool_;
        case Kind::Int: return int_;
        case Kind::Float: return float_;
        case Kind::Str: return *str_;
        case Kind::List: {
            oj arr = oj::array();
            for (const auto& item : *list_) {
                arr.push_back(item.to_json());
            }
            return arr;
        }
        case Kind::Map: {
            oj obj = oj::object();
            for (const auto& [key, value] : *map_) {
                obj[key] = value.to_json();
            }
            return obj;
        }
    }
    return nullptr;
}

namespace {

template <typename J>
Value value_from_json(const J& j) {
    switch (j.type()) {
        case J::value_t::null: return Value::null();
        case J::value_t::boolean: return Value::boolean(j.template get<bool>());
        case J::value_t::number_integer: return Value::integer(j.template get<int64_t>());
        case J::value_t::number_unsigned: {
            const uint64_t u = j.template get<uint64_t>();
            if (u <= static_cast<uint64_t>(INT64_MAX)) {
                return Value::integer(static_cast<int64_t>(u));
            }
            return Value::real(static_cast<double>(u));
        }
        case J::value_t::number_float: return Value::real(j.template get<double>());
        case J::value_t::string: return Value::str(j.template get<std::string>());
        case J::value_t::array: {
            Value::List items;
            items.reserve(j.size());
            for (const auto& item : j) {
                items.push_back(value_from_json(item));
            }
            return Value::list(std::move(items));
        }
        case J::value_t::object: {
            Value::Map entries;
            for (auto it = j.begin(); it != j.end(); ++it) {
                entries.emplace(it.key(), value_from_json(it.value()));
            }
            return Value::map(std::move(entries));
        }
        default: return Value::null();
    }
}

}  // namespace

Value Value::from_json(const nlohmann::json& j) {
    return value_from_json(j);
}

Value Value::from_json(const nlohmann::ordered_json& j) {
    return value_from_json(j);
}

Value Value::deep_copy() const {
    switch (kind_) {
        case Kind::List: {
            List items;
            items.reserve(list_->size());
            for (const auto& item : *list_) {
                items.push_back(item.deep_copy());
            }
            return list(std::move(items));
        }
        case Kind::Map: {
            Map entries;
            for (const auto& [key, value] : *map_) {
                entries.emplace(key, value.deep_copy());
            }
            return map(std::move(entries));
        }
        default:
            return *this;
    }
}

const char* Value::kind_name(Kind kind) {
    switch (kind) {
        case Kind::Null: return "null";
        case Kind::Bool: return "boolean";
        case Kind::Int: return "integer";
        case Kind::Float: return "float";
        case Kind::Str: return "string";
        case Kind::List: return "list";
        case Kind::Map: return "map";
    }
    return "?";
}

}  // namespace faultline::lang
