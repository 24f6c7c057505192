#include "trajex/explore.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace trajex {

const char *exploreModeName(ExploreMode m) {
    switch (m) {
    case ExploreMode::Prove: return "prove";
    case ExploreMode::Refute: return "refute";
    case ExploreMode::Survey: return "survey";
    }
    return "?";
}

namespace {

struct StopEnumeration {};

struct RuntimeModel {
    const Program *generic;
    const Program *runtime;
    const std::vector<RuleMeta> *meta;
    ModelView view;
};

RuntimeModel makeModel(const Program &generic, const SpecializedProgram *split) {
    RuntimeModel m;
    m.generic = &generic;
    if (split != nullptr) {
        m.runtime = &split->program;
        m.meta = &split->meta;
        m.view = ModelView{&generic, &split->program, true};
    } else {
        m.runtime = &generic;
        m.meta = nullptr;
        m.view = ModelView::plain(generic);
    }
    return m;
}

std::vector<std::uint32_t> labelToIndices(const Label &label) {
    std::vector<std::uint32_t> out;
    out.reserve(label.size());
    for (const auto &e : label) {
        out.push_back(e.index);
    }
    return out;
}

/// Observable sequences of a completed leaf; throws EngineError when an
/// observable is undefined somewhere (a model bug by contract).
std::vector<std::vector<Rational>> leafValues(const RuntimeModel &model, const LeafInfo &leaf) {
    const Program &generic = *model.generic;
    std::vector<std::vector<Rational>> values(generic.observables.size());
    for (std::size_t o = 0; o < generic.observables.size(); ++o) {
        values[o].reserve(generic.horizon);
        for (int t = 1; t <= generic.horizon; ++t) {
            auto v = evalObservable(model.view, leaf.db, generic.observables[o], t);
            if (!v) {
                throw EngineError("observable '" + generic.observables[o].name +
                                  "' is undefined at STI " + std::to_string(t) +
                                  " on trajectory '" + labelIndices(leaf.label) + "'");
            }
            values[o].push_back(*v);
        }
    }
    return values;
}

/// Everything one subtree exploration accumulates; merged canonically.
struct PartialResult {
    EnumerateResult counts;
    Envelope envelope;
    bool violationFound = false;
    std::vector<std::uint32_t> violationIdx;
    std::optional<Counterexample> counterexample;
    std::vector<LeafRecord> map;
    bool ran = false;
};

struct TheoremCtx {
    bool check = false;
    Theorem theorem;
    std::size_t obsIdx = 0;
};

class SubtreeExplorer {
  public:
    SubtreeExplorer(const RuntimeModel &model, const PartitionPlan &plan, const TheoremCtx &thm,
                    const ExploreOptions &opts, bool stopAtViolation)
        : model_(model), plan_(plan), thm_(thm), opts_(opts), stopAtViolation_(stopAtViolation) {}

    PartialResult run(const std::vector<std::uint32_t> &prefix, RunStats *stats) {
        PartialResult r;
        r.ran = true;
        std::vector<std::string> obsNames;
        for (const auto &o : model_.generic->observables) {
            obsNames.push_back(o.name);
        }
        r.envelope = Envelope::empty(obsNames, model_.generic->horizon);
        RunOptions runOpts;
        runOpts.meta = model_.meta;
        runOpts.stats = stats;
        LeafVisitor visit = [&](const LeafInfo &leaf) {
            if (opts_.leafHook) {
                opts_.leafHook(leaf);
            }
            visitLeaf(r, leaf);
        };
        try {
            // The engine's tally matches the per-leaf tally below; on an
            // early stop only the per-leaf one is complete, so use that.
            enumerateTrajectories(*model_.runtime, plan_, visit, runOpts, prefix);
        } catch (const StopEnumeration &) {
            // refute mode: this subtree's search ends at its first counterexample
        }
        return r;
    }

  private:
    void visitLeaf(PartialResult &r, const LeafInfo &leaf) {
        switch (leaf.status) {
        case LeafStatus::Completed: ++r.counts.completed; break;
        case LeafStatus::Pruned: ++r.counts.pruned; break;
        case LeafStatus::Aborted: ++r.counts.aborted; break;
        }
        if (leaf.status != LeafStatus::Completed) {
            if (opts_.collectMap) {
                r.map.push_back(LeafRecord{labelIndices(leaf.label), leaf.status, {}});
            }
            return;
        }
        auto values = leafValues(model_, leaf);
        std::vector<std::uint32_t> idx = labelToIndices(leaf.label);
        for (std::size_t o = 0; o < values.size(); ++o) {
            for (int t = 1; t <= model_.generic->horizon; ++t) {
                r.envelope.include(o, t, values[o][t - 1], idx);
            }
        }
        if (opts_.collectMap) {
            r.map.push_back(LeafRecord{labelIndices(leaf.label), leaf.status, values});
        }
        if (thm_.check && !r.violationFound) {
            if (!checkTheorem(values[thm_.obsIdx], thm_.theorem)) {
                r.violationFound = true;
                r.violationIdx = idx;
                Counterexample cex;
                cex.label = labelIndices(leaf.label);
                cex.choices.assign(leaf.label.begin(), leaf.label.end());
                cex.values = std::move(values);
                r.counterexample = std::move(cex);
                if (stopAtViolation_) {
                    throw StopEnumeration{};
                }
            }
        }
    }

    const RuntimeModel &model_;
    const PartitionPlan &plan_;
    const TheoremCtx &thm_;
    const ExploreOptions &opts_;
    bool stopAtViolation_;
};

/// Expands decision-vector prefixes breadth-first until there are enough
/// disjoint subtrees to keep the workers busy. Leaf prefixes stay as
/// singleton tasks; the result is in lexicographic order.
std::vector<std::vector<std::uint32_t>> expandFrontier(const RuntimeModel &model,
                                                       const PartitionPlan &plan,
                                                       std::size_t target) {
    std::vector<std::vector<std::uint32_t>> frontier{{}};
    for (;;) {
        if (frontier.size() >= target) {
            return frontier;
        }
        bool grew = false;
        std::vector<std::vector<std::uint32_t>> next;
        next.reserve(frontier.size() * 2);
        for (const auto &prefix : frontier) {
            ProbeResult probe = probeChoicePoint(*model.runtime, plan, prefix);
            if (probe.isLeaf) {
                next.push_back(prefix);
                continue;
            }
            grew = true;
            for (std::uint32_t i = 0; i < probe.candidateCount; ++i) {
                auto child = prefix;
                child.push_back(i);
                next.push_back(std::move(child));
            }
        }
        frontier = std::move(next);
        if (!grew) {
            return frontier;
        }
    }
}

} // namespace

ExplorationReport explore(const Program &generic, const SpecializedProgram *split,
                          const ExploreOptions &opts) {
    auto startTime = std::chrono::steady_clock::now();
    RuntimeModel model = makeModel(generic, split);

    ExplorationReport report;
    report.mode = opts.mode;
    report.negated = opts.negateTheorem;
    std::vector<std::string> obsNames;
    for (const auto &o : generic.observables) {
        obsNames.push_back(o.name);
    }
    report.envelope = Envelope::empty(obsNames, generic.horizon);

    TheoremCtx thm;
    if (opts.mode != ExploreMode::Survey) {
        const TheoremDecl *decl = nullptr;
        if (!opts.theoremName.empty()) {
            decl = generic.findTheorem(opts.theoremName);
            if (decl == nullptr) {
                report.valid = false;
                report.verdict = "ERROR";
                report.error = "unknown theorem '" + opts.theoremName + "'";
                return report;
            }
        } else if (!generic.theorems.empty()) {
            decl = &generic.theorems.front();
        } else {
            report.valid = false;
            report.verdict = "ERROR";
            report.error = "no theorem declared; use survey mode or declare one";
            return report;
        }
        thm.check = true;
        thm.theorem = Theorem::fromDecl(*decl, opts.negateTheorem);
        report.theorem = decl->name;
        bool found = false;
        for (std::size_t o = 0; o < generic.observables.size(); ++o) {
            if (generic.observables[o].name == decl->observable) {
                thm.obsIdx = o;
                found = true;
            }
        }
        if (!found) {
            report.valid = false;
            report.verdict = "ERROR";
            report.error = "theorem observable '" + decl->observable + "' is not declared";
            return report;
        }
    }

    int jobs = opts.instrument ? 1 : std::max(1, opts.jobs);
    bool refute = opts.mode == ExploreMode::Refute;

    PartitionPlan plan;
    try {
        plan = buildPartitions(*model.runtime);
    } catch (const StratificationError &e) {
        report.valid = false;
        report.verdict = "ERROR";
        report.error = e.what();
        return report;
    }

    SubtreeExplorer explorer(model, plan, thm, opts, refute);
    std::vector<PartialResult> partials;

    try {
        if (jobs <= 1) {
            partials.push_back(
                explorer.run({}, opts.instrument ? &report.scanStats : nullptr));
            report.hasScanStats = opts.instrument;
        } else {
            auto frontier = expandFrontier(model, plan, static_cast<std::size_t>(jobs) * 8);
            partials.assign(frontier.size(), PartialResult{});
            std::vector<std::string> workerErrors(frontier.size());
            std::atomic<std::size_t> stopAfter{frontier.size()};
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs)
#endif
            for (std::size_t i = 0; i < frontier.size(); ++i) { // NOLINT(modernize-loop-convert)
                if (refute && i > stopAfter.load()) {
                    continue; // lex-later subtrees cannot hold the first counterexample
                }
                try {
                    SubtreeExplorer worker(model, plan, thm, opts, refute);
                    PartialResult local = worker.run(frontier[i], nullptr);
                    if (refute && local.violationFound) {
                        std::size_t expected = stopAfter.load();
                        while (i < expected && !stopAfter.compare_exchange_weak(expected, i)) {
                        }
                    }
                    partials[i] = std::move(local);
                } catch (const std::exception &e) {
                    workerErrors[i] = e.what();
                }
            }
            for (const auto &err : workerErrors) {
                if (!err.empty()) {
                    throw EngineError(err);
                }
            }
            // Canonical merge: refute-mode results past the first
            // counterexample are discarded so the report is independent of
            // scheduling.
            if (refute) {
                std::size_t firstCe = partials.size();
                for (std::size_t i = 0; i < partials.size(); ++i) {
                    if (partials[i].ran && partials[i].violationFound) {
                        firstCe = i;
                        break;
                    }
                }
                for (std::size_t i = firstCe + 1; i < partials.size(); ++i) {
                    partials[i] = PartialResult{};
                }
            }
        }
    } catch (const EngineError &e) {
        report.valid = false;
        report.verdict = "ERROR";
        report.error = e.what();
        return report;
    } catch (const LabelError &e) {
        report.valid = false;
        report.verdict = "ERROR";
        report.error = e.what();
        return report;
    }

    // counts/envelope/map merge in frontier (= lexicographic) order
    for (auto &p : partials) {
        if (!p.ran) {
            continue;
        }
        report.completed += p.counts.completed;
        report.pruned += p.counts.pruned;
        report.aborted += p.counts.aborted;
        report.envelope = envelopeMerge(report.envelope, p.envelope);
        if (p.violationFound && !report.counterexample) {
            report.theoremHeldOnCompleted = false;
            report.counterexample = std::move(p.counterexample);
        }
        if (opts.collectMap) {
            for (auto &rec : p.map) {
                report.map.push_back(std::move(rec));
            }
        }
    }

    if (opts.mode == ExploreMode::Survey) {
        report.verdict = "SURVEYED";
    } else if (report.counterexample) {
        report.verdict = "COUNTEREXAMPLE";
    } else if (report.pruned == 0 && report.aborted == 0 && report.completed > 0) {
        report.verdict = "NECESSARY";
    } else {
        // The tendency held on every completed trajectory, but part of the
        // space was pruned, so necessity over the full tree is not claimed.
        report.verdict = "SURVEYED";
    }

    report.wallSeconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - startTime).count();
    return report;
}

LeafRecord replayRecord(const Program &generic, const SpecializedProgram *split,
                        const std::vector<std::uint32_t> &picks, RunStats *stats, TraceSink trace,
                        const LeafVisitor &leafHook) {
    RuntimeModel model = makeModel(generic, split);
    PartitionPlan plan = buildPartitions(*model.runtime);
    RunOptions runOpts;
    runOpts.meta = model.meta;
    runOpts.stats = stats;
    runOpts.trace = std::move(trace);
    LeafRecord record;
    replayTrajectory(*model.runtime, plan, picks, [&](const LeafInfo &leaf) {
        if (leafHook) {
            leafHook(leaf);
        }
        record.label = labelIndices(leaf.label);
        record.status = leaf.status;
        if (leaf.status == LeafStatus::Completed) {
            record.values = leafValues(model, leaf);
        }
    }, runOpts);
    return record;
}

} // namespace trajex
