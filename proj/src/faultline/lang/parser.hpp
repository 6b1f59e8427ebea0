#pragma once

#include "faultline/lang/ast.hpp"

#include <optional>
#include <string>

namespace faultline::lang {

struct ParseError {
    std::string message;
    int line = 0;
    int column = 0;
    size_t offset = 0;

    std::string to_string() const {
        return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
               message;
    }
};

// Parses a whole file into function definitions. On failure returns nullopt
// and fills `error`. The returned SourceFile keeps the source text; rel_path
// is left for the caller to fill in.
std::optional<SourceFile> parse_source(const std::string& source, ParseError& error);

}  // namespace faultline::lang
