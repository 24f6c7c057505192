#ifndef TRAJEX_SPECIALIZE_HPP
#define TRAJEX_SPECIALIZE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "trajex/ast.hpp"
#include "trajex/engine.hpp"
#include "trajex/partitions.hpp"

namespace trajex {

class SpecializeError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Which dimensions a rule is split by: "time" and/or declared sort names.
struct SplitDirective {
    std::string ruleId;
    std::vector<std::string> dims;
};

struct RuleProvenance {
    std::string origin;                                        // generic rule id
    int sti = -1;                                              // -1 for copied rules
    std::vector<std::pair<std::string, std::string>> bindings; // variable -> instance
};

/// A generic program compiled into time- and instance-specialized rules.
/// Time-indexed predicates are folded: `price(p1, 10, 3)` [STI 3] becomes
/// `price_t3(p1, 10)` [static]. Observables and theorems stay with the
/// generic program; `program` here is pure rule machinery.
struct SpecializedProgram {
    Program program;
    std::vector<RuleMeta> meta;             // parallel to program.rules
    std::vector<RuleProvenance> provenance; // parallel to program.rules
    std::vector<SplitDirective> applied;    // effective directive per generic rule
    std::map<std::string, std::uint64_t> splitCountByOrigin;
    std::uint64_t transitionRulesBefore = 0; // generic time-split rules
    std::uint64_t transitionRulesAfter = 0;  // their specialized counterparts
};

std::string foldedPredName(const std::string &name, int sti);

/// Inverse of the folding name scheme; nullopt if the name carries no
/// `_t<digits>` suffix.
std::optional<std::pair<std::string, int>> parseFoldedName(const std::string &name);

/// Compiles every time-indexed rule into one rule per STI in
/// 1..horizon-1 and per instance combination of its split sorts.
/// Directives come from the rules' own `split by` clauses, overridden by
/// `overrides`, defaulting to time-only. Rules whose time arguments are
/// all constants are folded in place; static rules are copied.
SpecializedProgram specialize(const Program &generic,
                              const std::vector<SplitDirective> &overrides = {});

struct CostPrediction {
    std::string ruleId;
    std::vector<std::string> dims;
    std::uint64_t factor = 1; // nominal scan reduction: (horizon-1) * prod of sort sizes
};

/// Nominal candidate-scan reduction per rule under the given directives.
/// Advisory figures; the benchmark measures the real thing.
std::vector<CostPrediction> predictCost(const Program &generic,
                                        const std::vector<SplitDirective> &overrides = {});

struct EquivalenceReport {
    bool equivalent = true;
    std::uint64_t leavesChecked = 0;
    std::string divergence;      // empty when equivalent
    std::string divergenceLabel; // selection indices of the first divergence
};

/// Runs both programs over the same choice tree and compares every paired
/// leaf: labels, completed/pruned status, and fact sets modulo predicate
/// folding. `sampleLabels`, when given, replays just those trajectories
/// instead of the whole tree.
EquivalenceReport verifyEquivalence(const Program &generic, const SpecializedProgram &split,
                                    const std::vector<std::vector<std::uint32_t>> *sampleLabels = nullptr);

} // namespace trajex

#endif
