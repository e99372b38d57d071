#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "auxwave/expr.hpp"

namespace auxwave {

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), pos(pos) {}
    size_t pos;
};

// Grammar (ASCII): identifiers [A-Za-z_][A-Za-z0-9_]*; reserved names
// xi (the wave variable), I (imaginary unit), pi; operators + - * / ^ with
// the usual precedence, ^ right-associative, unary minus; numeric literals
// as integers or decimals (converted to exact rationals); functions
// exp, ln, sin, cos, erf, Ei1, and int(f, var) for the unevaluated integral
// of f from 0 to var. The renderer emits this same grammar.
Expr parse(const std::string& text);

// Emits parseable text; parse(render(e)) is structurally equal to e for
// normalized e, and render(parse(t)) == t for text the renderer produced.
std::string render(const Expr& e);

} // namespace auxwave
