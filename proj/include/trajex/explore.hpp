#ifndef TRAJEX_EXPLORE_HPP
#define TRAJEX_EXPLORE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trajex/ast.hpp"
#include "trajex/engine.hpp"
#include "trajex/envelope.hpp"
#include "trajex/observe.hpp"
#include "trajex/specialize.hpp"

namespace trajex {

enum class ExploreMode : std::uint8_t { Prove, Refute, Survey };

const char *exploreModeName(ExploreMode m);

struct LeafRecord {
    std::string label;
    LeafStatus status = LeafStatus::Completed;
    // Observable sequences over STIs 1..horizon; completed leaves only.
    std::vector<std::vector<Rational>> values; // [observable][sti-1]
};

struct Counterexample {
    std::string label;
    std::vector<LabelEntry> choices;
    std::vector<std::vector<Rational>> values; // [observable][sti-1]
};

struct ExplorationReport {
    int schema = 1;
    ExploreMode mode = ExploreMode::Prove;
    std::string theorem;
    bool negated = false;
    std::string verdict; // NECESSARY | COUNTEREXAMPLE | SURVEYED | ERROR
    std::uint64_t completed = 0;
    std::uint64_t pruned = 0;
    std::uint64_t aborted = 0;
    bool theoremHeldOnCompleted = true;
    bool valid = true;
    std::string error;
    Envelope envelope;
    std::optional<Counterexample> counterexample;
    std::vector<LeafRecord> map; // populated with collectMap
    RunStats scanStats;
    bool hasScanStats = false;
    double wallSeconds = 0.0;

    int exitCode() const {
        if (!valid) {
            return 1;
        }
        return verdict == "COUNTEREXAMPLE" ? 2 : 0;
    }
};

struct ExploreOptions {
    ExploreMode mode = ExploreMode::Prove;
    std::string theoremName; // empty: first declared theorem (prove/refute)
    bool negateTheorem = false;
    int jobs = 1;
    bool collectMap = false;
    bool instrument = false; // exact scan counts; forces serial execution
    // Test hook: called for every visited leaf. With jobs > 1 it runs on
    // worker threads; the hook must be thread-safe.
    LeafVisitor leafHook;
};

/// Exhaustively explores the program (specialized form when `split` is
/// given), checks the selected tendency as a negative constraint on each
/// completed trajectory, and accumulates the observable envelope.
/// Prove mode visits every leaf; refute mode stops at the first completed
/// leaf violating the theorem; survey mode skips theorem checking.
/// Reports are deterministic and independent of the parallelism degree.
ExplorationReport explore(const Program &generic, const SpecializedProgram *split,
                          const ExploreOptions &opts);

/// Replays one trajectory and returns its record (observable sequences for
/// completed leaves). Used by the trace command and tests.
LeafRecord replayRecord(const Program &generic, const SpecializedProgram *split,
                        const std::vector<std::uint32_t> &picks, RunStats *stats = nullptr,
                        TraceSink trace = nullptr, const LeafVisitor &leafHook = nullptr);

} // namespace trajex

#endif
