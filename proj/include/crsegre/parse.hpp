#pragma once

#include <string>
#include <vector>

#include "crsegre/series.hpp"

namespace crsegre {

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, int line, int col)
        : std::runtime_error(what + " (line " + std::to_string(line) + ", col " + std::to_string(col) + ")"),
          line(line),
          col(col) {}
    int line, col;
};

/// Parse a polynomial expression over the given frame. Grammar: terms joined
/// by +/-; a term is an optional coefficient (integer, a/b, a/b*i, i, or a
/// parenthesised a/b+c/d*i pair) times a product of var[^k] factors, with *
/// separators optional. Whitespace is insignificant.
Series parse_series(const std::string& text, const std::vector<std::string>& vars, int order,
                    int line_hint = 1, int col_offset = 0);

}  // namespace crsegre
