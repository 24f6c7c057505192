#ifndef TRAJEX_PARSER_HPP
#define TRAJEX_PARSER_HPP

#include <stdexcept>
#include <string>
#include <string_view>

#include "trajex/ast.hpp"

namespace trajex {

class ParseError : public std::runtime_error {
  public:
    ParseError(std::string message, int line, int col)
        : std::runtime_error(message + " (line " + std::to_string(line) + ", column " +
                             std::to_string(col) + ")"),
          line_(line), col_(col) {}

    int line() const { return line_; }
    int col() const { return col_; }

  private:
    int line_;
    int col_;
};

/// Parses model text into a Program. Declarations must precede use;
/// `parse(format(p))` is structurally equal to `p` for every valid program.
Program parseProgram(std::string_view text);

} // namespace trajex

#endif
