#pragma once

#include "cxdim/numeric.hpp"

#include <string>
#include <string_view>

namespace cxdim {

/// Evaluates a ratio/gap literal in float128.
///
/// Accepted grammar (whitespace ignored):
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | '+' unary | power
///   power   := primary ('^' unary)?          right-associative
///   primary := number | 'pi' | func '(' expr ')' | '(' expr ')'
///   func    := 'sqrt' | 'log' | 'exp'
///
/// So "1/3", "0.25", "2^-1.4142135623730951" and "2^(-1-sqrt(2))" all parse.
/// Throws Error(Errc::parse_error) on malformed input.
Quad parse_literal(std::string_view text);

/// Decimal rendering with 36 significant digits (round-trips float128).
std::string quad_to_string(const Quad& value);

}  // namespace cxdim
