#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "lsc/syntax.hpp"

namespace lsc {

class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, std::size_t column, const std::string &msg);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  std::size_t line_, column_;
};

//   term := '\' ident '.' term | app
//   app  := atom atom*
//   atom := ident | '(' term ')' | atom '[' ident '<-' term ']'
// "λ" is accepted for '\'. '#' starts a comment running to end of line.
Term parse_term(std::string_view src);

std::string print_term(const Term &t);

} // namespace lsc
