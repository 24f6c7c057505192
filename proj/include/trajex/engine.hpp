#ifndef TRAJEX_ENGINE_HPP
#define TRAJEX_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "trajex/ast.hpp"
#include "trajex/database.hpp"
#include "trajex/partitions.hpp"

namespace trajex {

/// Run-level failure (horizon overrun, internal inconsistency). Aborts the
/// whole exploration, unlike builtin failures which abort one branch.
class EngineError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A replay label does not fit the model's choice tree.
class LabelError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Identity of a choice point: originating rule, STI, and the bindings of
/// the non-choice variables at the moment the choice literal is reached.
/// Values are rendered as canonical strings so keys compare identically
/// across a generic program and its specialized twin.
struct ChoiceKey {
    std::string origin;
    int sti = 0;
    std::vector<std::pair<std::string, std::string>> context; // sorted by variable name

    friend bool operator<(const ChoiceKey &a, const ChoiceKey &b) {
        if (a.origin != b.origin) {
            return a.origin < b.origin;
        }
        if (a.sti != b.sti) {
            return a.sti < b.sti;
        }
        return a.context < b.context;
    }
    friend bool operator==(const ChoiceKey &a, const ChoiceKey &b) {
        return a.origin == b.origin && a.sti == b.sti && a.context == b.context;
    }
    std::string toString() const;
};

struct LabelEntry {
    ChoiceKey key;
    std::uint32_t index = 0;
    std::uint32_t candidateCount = 0;
    std::string picked; // rendered candidate
};

/// A trajectory's identity: the sequence of selections, in encounter order.
using Label = std::vector<LabelEntry>;

std::string labelIndices(const Label &label);                    // "0.1.0"
std::vector<std::uint32_t> parseLabelIndices(const std::string &text); // throws LabelError

enum class LeafStatus : std::uint8_t { Completed, Pruned, Aborted };

const char *leafStatusName(LeafStatus s);

/// Exact count of candidate facts scanned while matching, keyed by
/// (origin rule id, STI). For generic programs the STI is the sweep during
/// which the scan happened; specialized rules report their own STI.
struct RunStats {
    std::map<std::pair<std::string, int>, std::uint64_t> scans;

    std::uint64_t total() const {
        std::uint64_t t = 0;
        for (const auto &[k, v] : scans) {
            t += v;
        }
        return t;
    }
};

struct TraceEvent {
    int sweep = 0;
    std::string ruleId;
    PredId pred = 0;
    int factSti = 0;
    FactArgs args;
};
using TraceSink = std::function<void(const TraceEvent &)>;

struct LeafInfo {
    const Label &label;
    LeafStatus status;
    const std::string &diagnostic; // pruning rule, or builtin failure text
    const Database &db;
};
using LeafVisitor = std::function<void(const LeafInfo &)>;

/// Per-rule metadata attached by the specializer: the originating generic
/// rule, the rule's own STI (-1 means "attribute to the current sweep"),
/// and the instance bindings folded into the rule.
struct RuleMeta {
    std::string origin;
    int sti = -1;
    std::vector<std::pair<std::string, std::string>> extraContext;
};

struct RunOptions {
    RunStats *stats = nullptr;
    TraceSink trace;
    const std::vector<RuleMeta> *meta = nullptr; // parallel to Program::rules
};

struct EnumerateResult {
    std::uint64_t completed = 0;
    std::uint64_t pruned = 0;
    std::uint64_t aborted = 0;

    std::uint64_t leaves() const { return completed + pruned + aborted; }
};

/// Depth-first, chronological-backtracking enumeration of every leaf of
/// the choice tree. Leaves are visited in lexicographic label order; the
/// stream is deterministic. `prefix` pins the first selections, so disjoint
/// subtrees can be explored independently (databases are branch-local).
EnumerateResult enumerateTrajectories(const Program &prog, const PartitionPlan &plan,
                                      const LeafVisitor &visit, const RunOptions &opts = {},
                                      const std::vector<std::uint32_t> &prefix = {});

/// Replays exactly one trajectory. Throws LabelError if the selection
/// indices do not match the choice tree (too short, too long, out of range).
LeafStatus replayTrajectory(const Program &prog, const PartitionPlan &plan,
                            const std::vector<std::uint32_t> &picks, const LeafVisitor &visit,
                            const RunOptions &opts = {});

/// Runs the engine until the next undecided choice point under the given
/// prefix; reports its candidate count, or the leaf status when the prefix
/// already reaches a leaf. Used to expand subtree frontiers.
struct ProbeResult {
    bool isLeaf = false;
    LeafStatus status = LeafStatus::Completed;
    std::uint32_t candidateCount = 0;
};
ProbeResult probeChoicePoint(const Program &prog, const PartitionPlan &plan,
                             const std::vector<std::uint32_t> &prefix);

} // namespace trajex

#endif
