#ifndef KEYFORGE_PARSE_HPP
#define KEYFORGE_PARSE_HPP

#include <string>

#include "keyforge/algebra.hpp"
#include "keyforge/errors.hpp"
#include "keyforge/ordgroup.hpp"

namespace keyforge {

// Parse failure with 1-based line/column of the offending character.
struct ParseError : Error {
    ParseError(const std::string& msg, int line, int column)
        : Error(msg + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
          line(line),
          column(column) {}
    int line;
    int column;
};

// Polynomial grammar (whitespace-insensitive):
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ('+'|'-')* atom ('^' uint)?
//   atom   := uint | 'x' | 't' | '(' expr ')'
// Division is only defined by constants (degree zero in x); 't' requires a
// rational-function base field.
Poly parse_poly(const FieldPtr& F, const std::string& text);

// Value grammar: "inf", a rational ("3/2", "-1"), or a tuple "(1/2,-3)".
// Rank-1 values may omit the parentheses.
ExtValue parse_value(const GroupDescriptor& g, const std::string& text);

} // namespace keyforge

#endif
