#pragma once

#include "faultline/lang/value.hpp"
#include "faultline/support/jsonio.hpp"

#include <stdexcept>
#include <string>

namespace faultline::engine {

// Wrong-value corruption rules, one per supported kind:
//   object-reference -> null        integer -> -1       string -> ""
//   boolean          -> negation    collection -> empty
// Anything else is an error; corruption never passes a value through
// untouched, and never silently skips.
struct CorruptError : std::runtime_error {
    explicit CorruptError(const std::string& what) : std::runtime_error(what) {}
};

// Kind name for a runtime value, or nullptr when no rule applies.
const char* corruption_kind_for(const lang::Value& value);

// Explicit-kind form; validates that the value matches the kind.
support::json corrupt(const std::string& kind, const support::json& value);

// Runtime form used by the planted __corrupt calls. Raises a script-level
// "UnsupportedKind" error when the value has no corruption rule, which
// surfaces loudly instead of masking the injection.
lang::Value corrupt_value(const lang::Value& value);

}  // namespace faultline::engine
