#ifndef TRAJEX_PRINTER_HPP
#define TRAJEX_PRINTER_HPP

#include <string>

#include "trajex/ast.hpp"

namespace trajex {

/// Canonical pretty-printer. The output is a parseable model file;
/// parseProgram(formatProgram(p)) is structurally equal to p, and repeated
/// calls are byte-identical.
std::string formatProgram(const Program &prog);

/// Renders one fact as `pred(args..., sti)` (time appended when indexed).
std::string formatFact(const Program &prog, PredId pred, int sti,
                       const std::vector<GroundTerm> &args);

} // namespace trajex

#endif
