#ifndef TRAJEX_VALIDATE_HPP
#define TRAJEX_VALIDATE_HPP

#include <string>
#include <vector>

#include "trajex/ast.hpp"

namespace trajex {

struct Violation {
    std::string code;    // stable identifier, e.g. "unsafe-negation"
    std::string message; // human-readable, names the offending entity
    std::string ruleId;  // empty for program-level violations
    SourcePos pos;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string summary() const;
};

/// Checks every semantic invariant that the grammar alone cannot enforce:
/// range restriction, negation/choice/aggregate safety, sort agreement,
/// split-directive well-formedness, init-fact sorts and horizons, theorem
/// ranges. Violations are returned, never thrown.
ValidationReport validate(const Program &prog);

/// Sort inferred for each rule variable: index into Program::sorts, or
/// kNumeric for numeric/unconstrained variables, or kConflict.
struct VarSorts {
    static constexpr int kNumeric = -1;
    static constexpr int kConflict = -2;
    std::vector<int> sortOf;
};

VarSorts inferVarSorts(const Program &prog, const Rule &rule);

} // namespace trajex

#endif
