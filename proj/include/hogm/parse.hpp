#ifndef HOGM_PARSE_HPP
#define HOGM_PARSE_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "hogm/expr.hpp"

namespace hogm {

// Expression grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' integer)? | '-' factor
//   atom   := number | var | func '(' expr ')' | '(' expr ')'
//   func   := 'sin'|'cos'|'exp'|'ln'|'sqrt'
//   var    := ('q'|'p'|'v') integer '_' integer | 'lam' integer
// The integer after '^' may carry a leading '-'. 'q3_2' is q^3_(2), 'p1_0' is
// p_1^(0), 'v2_1' is v^2_(1), 'lam2' is lambda_2. Division builds an exact
// rational when both operands are numeric, Power(denominator, -1) otherwise.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (byte " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

Expr parse(std::string_view text);

}  // namespace hogm

#endif
