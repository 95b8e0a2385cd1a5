#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "spilab/error.hpp"

namespace spilab::expr {

/// Node of a parsed arithmetic expression in the single variable x.
struct Node {
  virtual ~Node() = default;
  virtual double eval(double x) const = 0;
};

/// Parses the grammar
///   expr   := ['+'|'-'] term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := atom ('^' number)?
///   atom   := number | 'x' | 'abs(x)' | 'exp(' expr ')' | 'log(' expr ')' | '(' expr ')'
/// Throws Error(parse_error) with the byte offset of the offending token.
std::shared_ptr<const Node> parse(std::string_view src);

}  // namespace spilab::expr
