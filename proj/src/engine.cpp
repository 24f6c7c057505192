#include "trajex/engine.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include "trajex/builtins.hpp"
#include "trajex/printer.hpp"

namespace trajex {

std::string ChoiceKey::toString() const {
    std::string s = origin + "@" + std::to_string(sti);
    for (const auto &[var, val] : context) {
        s += " " + var + "=" + val;
    }
    return s;
}

std::string labelIndices(const Label &label) {
    std::string s;
    for (std::size_t i = 0; i < label.size(); ++i) {
        if (i) {
            s += ".";
        }
        s += std::to_string(label[i].index);
    }
    return s;
}

std::vector<std::uint32_t> parseLabelIndices(const std::string &text) {
    std::vector<std::uint32_t> out;
    if (text.empty()) {
        return out;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t dot = text.find('.', pos);
        std::string part = text.substr(pos, dot == std::string::npos ? dot : dot - pos);
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos) {
            throw LabelError("malformed label '" + text + "'");
        }
        out.push_back(static_cast<std::uint32_t>(std::stoul(part)));
        if (dot == std::string::npos) {
            break;
        }
        pos = dot + 1;
    }
    return out;
}

const char *leafStatusName(LeafStatus s) {
    switch (s) {
    case LeafStatus::Completed: return "completed";
    case LeafStatus::Pruned: return "pruned";
    case LeafStatus::Aborted: return "aborted";
    }
    return "?";
}

namespace {

enum class Status : std::uint8_t { Ok, Completed, Pruned, Branch, Aborted };

struct PendingChoice {
    ChoiceKey key;
    std::vector<GroundTerm> candidates;
};

struct TrailEntry {
    PredId pred;
    int sti;
    FactArgs args;
};

class Run {
  public:
    Run(const Program &prog, const PartitionPlan &plan, const RunOptions &opts)
        : prog_(prog), plan_(plan), opts_(opts), db_(prog) {
        clocked_ = prog_.hasTimeIndexedPred();
        lastSweep_ = clocked_ ? prog_.horizon : 1;
        clockPred_ = prog_.findPred(kClockPred);
        std::size_t maxVars = 0;
        for (const auto &r : prog_.rules) {
            maxVars = std::max(maxVars, r.varNames.size());
        }
        values_.resize(maxVars);
        bound_.assign(maxVars, false);
        localScans_.assign(prog_.rules.size(), 0);
        for (const auto &f : prog_.inits) {
            db_.insert(f.pred, f.sti, f.args);
        }
    }

    EnumerateResult enumerate(const std::vector<std::uint32_t> &prefix, const LeafVisitor &visit,
                              bool exactReplay) {
        prefix_ = &prefix;
        prefixPos_ = 0;
        exactReplay_ = exactReplay;
        EnumerateResult result;
        node(result, visit);
        if (exactReplay_ && prefixPos_ < prefix.size()) {
            throw LabelError("label too long: only " + std::to_string(prefixPos_) +
                             " choice points on this trajectory");
        }
        return result;
    }

    ProbeResult probe(const std::vector<std::uint32_t> &prefix) {
        prefix_ = &prefix;
        prefixPos_ = 0;
        exactReplay_ = false;
        ProbeResult out;
        Status st = advanceScripted();
        if (st == Status::Branch) {
            out.isLeaf = false;
            out.candidateCount = static_cast<std::uint32_t>(pending_->candidates.size());
        } else {
            out.isLeaf = true;
            out.status = leafStatus(st);
        }
        return out;
    }

  private:
    static LeafStatus leafStatus(Status st) {
        switch (st) {
        case Status::Pruned: return LeafStatus::Pruned;
        case Status::Aborted: return LeafStatus::Aborted;
        default: return LeafStatus::Completed;
        }
    }

    // Consumes scripted selections until the tree runs past the prefix.
    Status advanceScripted() {
        for (;;) {
            Status st = advance();
            if (st != Status::Branch) {
                return st;
            }
            if (prefixPos_ >= prefix_->size()) {
                return Status::Branch;
            }
            std::uint32_t idx = (*prefix_)[prefixPos_];
            if (idx >= pending_->candidates.size()) {
                throw LabelError("label index " + std::to_string(idx) + " out of range [0, " +
                                 std::to_string(pending_->candidates.size()) +
                                 ") at choice point " + pending_->key.toString());
            }
            ++prefixPos_;
            decide(*pending_, idx);
            pending_.reset();
        }
    }

    void node(EnumerateResult &result, const LeafVisitor &visit) {
        Status st = advance();
        if (st == Status::Branch) {
            PendingChoice cp = std::move(*pending_);
            pending_.reset();
            if (prefixPos_ < prefix_->size()) {
                std::uint32_t idx = (*prefix_)[prefixPos_];
                if (idx >= cp.candidates.size()) {
                    throw LabelError("label index " + std::to_string(idx) + " out of range [0, " +
                                     std::to_string(cp.candidates.size()) + ") at choice point " +
                                     cp.key.toString());
                }
                ++prefixPos_;
                exploreCandidate(cp, idx, result, visit);
                return;
            }
            if (exactReplay_) {
                throw LabelError("label too short: undecided choice point " + cp.key.toString());
            }
            for (std::uint32_t i = 0; i < cp.candidates.size(); ++i) {
                exploreCandidate(cp, i, result, visit);
            }
            return;
        }
        LeafStatus status = leafStatus(st);
        switch (status) {
        case LeafStatus::Completed: ++result.completed; break;
        case LeafStatus::Pruned: ++result.pruned; break;
        case LeafStatus::Aborted: ++result.aborted; break;
        }
        if (visit) {
            visit(LeafInfo{label_, status, diagnostic_, db_});
        }
        diagnostic_.clear();
    }

    void exploreCandidate(const PendingChoice &cp, std::uint32_t idx, EnumerateResult &result,
                          const LeafVisitor &visit) {
        std::size_t mark = trail_.size();
        int saveSweep = sweep_;
        std::size_t savePartition = partitionIdx_;
        decide(cp, idx);
        node(result, visit);
        undoTo(mark);
        decisions_.erase(cp.key);
        label_.pop_back();
        sweep_ = saveSweep;
        partitionIdx_ = savePartition;
    }

    void decide(const PendingChoice &cp, std::uint32_t idx) {
        decisions_[cp.key] = cp.candidates[idx];
        label_.push_back(LabelEntry{cp.key, idx, static_cast<std::uint32_t>(cp.candidates.size()),
                                    prog_.groundToString(cp.candidates[idx])});
    }

    void undoTo(std::size_t mark) {
        while (trail_.size() > mark) {
            const TrailEntry &e = trail_.back();
            db_.erase(e.pred, e.sti, e.args);
            trail_.pop_back();
        }
    }

    // ---- forward execution ------------------------------------------------

    Status advance() {
        for (;;) {
            while (partitionIdx_ < plan_.partitions.size()) {
                Status st = saturate(plan_.partitions[partitionIdx_]);
                if (st != Status::Ok) {
                    return st;
                }
                ++partitionIdx_;
            }
            if (sweep_ >= lastSweep_) {
                return Status::Completed;
            }
            ++sweep_;
            partitionIdx_ = 0;
            if (clocked_ && clockPred_) {
                insertFact(*clockPred_, sweep_, {}, nullptr);
            }
        }
    }

    Status saturate(const Partition &part) {
        if (!part.recursive) {
            Status st = pass(part, /*buffered=*/false);
            flushScans(part);
            return st;
        }
        for (;;) {
            pendingFacts_.clear();
            Status st = pass(part, /*buffered=*/true);
            bool grew = false;
            for (const auto &e : pendingFacts_) {
                grew |= insertFact(e.pred, e.sti, e.args, pendingRule_.empty() ? nullptr
                                                                               : &pendingRule_);
            }
            // Rule attribution of buffered inserts is approximate only for
            // traces; facts themselves are exact.
            if (st != Status::Ok) {
                flushScans(part);
                return st;
            }
            if (!grew) {
                flushScans(part);
                return Status::Ok;
            }
        }
    }

    void flushScans(const Partition &part) {
        if (opts_.stats == nullptr) {
            return;
        }
        for (std::uint32_t r : part.rules) {
            if (localScans_[r] == 0) {
                continue;
            }
            int sti = sweep_;
            std::string origin = prog_.rules[r].id;
            if (opts_.meta != nullptr) {
                const RuleMeta &m = (*opts_.meta)[r];
                origin = m.origin;
                if (m.sti >= 0) {
                    sti = m.sti;
                }
            }
            opts_.stats->scans[{origin, sti}] += localScans_[r];
            localScans_[r] = 0;
        }
    }

    Status pass(const Partition &part, bool buffered) {
        buffered_ = buffered;
        for (std::uint32_t r : part.rules) {
            currentRule_ = r;
            Status st = matchFrom(prog_.rules[r], 0);
            if (st != Status::Ok) {
                return st;
            }
        }
        return Status::Ok;
    }

    Status matchFrom(const Rule &rule, std::size_t li) {
        if (li == rule.body.size()) {
            return fire(rule);
        }
        const Literal &lit = rule.body[li];
        switch (lit.kind) {
        case Literal::Kind::Positive:
            return matchPositive(rule, li, lit);
        case Literal::Kind::Negated: {
            ++localScans_[currentRule_];
            if (negatedHolds(rule, lit.atom)) {
                return matchFrom(rule, li + 1);
            }
            return Status::Ok;
        }
        case Literal::Kind::Choice:
            return matchChoice(rule, li, lit);
        case Literal::Kind::Builtin:
            return matchBuiltin(rule, li, lit);
        case Literal::Kind::Aggregate:
            return matchAggregate(rule, li, lit);
        }
        return Status::Ok;
    }

    bool unifyAtom(const Rule &rule, const Atom &atom, int factSti, const FactArgs &fact,
                   std::vector<VarId> &newlyBound) {
        switch (atom.time.kind) {
        case TimeRef::Kind::None:
            break;
        case TimeRef::Kind::Const:
            if (factSti != atom.time.value) {
                return false;
            }
            break;
        case TimeRef::Kind::Var: {
            VarId tv = *rule.timeVar;
            if (bound_[tv]) {
                const GroundTerm &g = values_[tv];
                if (g.num.num() != factSti) {
                    return false;
                }
            } else {
                values_[tv] = GroundTerm::number(Rational(factSti));
                bound_[tv] = true;
                newlyBound.push_back(tv);
            }
            break;
        }
        case TimeRef::Kind::VarPlusOne:
            return false; // heads only
        }
        for (std::size_t i = 0; i < atom.args.size(); ++i) {
            const Term &t = atom.args[i];
            if (t.kind == Term::Kind::Const) {
                if (!(t.constant == fact[i])) {
                    return false;
                }
            } else if (bound_[t.var]) {
                if (!(values_[t.var] == fact[i])) {
                    return false;
                }
            } else {
                values_[t.var] = fact[i];
                bound_[t.var] = true;
                newlyBound.push_back(t.var);
            }
        }
        return true;
    }

    void unbind(std::vector<VarId> &vars, std::size_t from) {
        while (vars.size() > from) {
            bound_[vars.back()] = false;
            vars.pop_back();
        }
    }

    Status matchPositive(const Rule &rule, std::size_t li, const Literal &lit) {
        const auto &ext = db_.extension(lit.atom.pred);
        std::vector<VarId> newlyBound;
        for (const auto &[sti, facts] : ext) {
            // The extension is scanned whole; time filtering happens in
            // unification. This is the growing-database cost that rule
            // splitting removes.
            for (std::size_t fi = 0; fi < facts.size(); ++fi) {
                ++localScans_[currentRule_];
                newlyBound.clear();
                if (unifyAtom(rule, lit.atom, sti, facts[fi], newlyBound)) {
                    Status st = matchFrom(rule, li + 1);
                    unbind(newlyBound, 0);
                    if (st != Status::Ok) {
                        return st;
                    }
                } else {
                    unbind(newlyBound, 0);
                }
            }
        }
        return Status::Ok;
    }

    bool negatedHolds(const Rule &rule, const Atom &atom) {
        int sti = 0;
        if (atom.time.kind == TimeRef::Kind::Const) {
            sti = atom.time.value;
        } else if (atom.time.kind == TimeRef::Kind::Var) {
            sti = static_cast<int>(values_[*rule.timeVar].num.num());
        }
        scratchArgs_.clear();
        for (const auto &t : atom.args) {
            scratchArgs_.push_back(t.kind == Term::Kind::Const ? t.constant : values_[t.var]);
        }
        return !db_.contains(atom.pred, sti, scratchArgs_);
    }

    Status matchChoice(const Rule &rule, std::size_t li, const Literal &lit) {
        ChoiceKey key = choiceKey(rule, lit);
        auto decided = decisions_.find(key);
        if (decided != decisions_.end()) {
            values_[lit.choiceVar] = decided->second;
            bound_[lit.choiceVar] = true;
            Status st = matchFrom(rule, li + 1);
            bound_[lit.choiceVar] = false;
            return st;
        }
        std::vector<GroundTerm> candidates = choiceCandidates(rule, lit);
        if (candidates.empty()) {
            return Status::Ok;
        }
        pending_ = PendingChoice{std::move(key), std::move(candidates)};
        return Status::Branch;
    }

    ChoiceKey choiceKey(const Rule &rule, const Literal &lit) {
        ChoiceKey key;
        key.origin = rule.id;
        key.sti = 0;
        if (rule.timeVar && bound_[*rule.timeVar]) {
            key.sti = static_cast<int>(values_[*rule.timeVar].num.num());
        }
        if (opts_.meta != nullptr) {
            const RuleMeta &m = (*opts_.meta)[currentRule_];
            key.origin = m.origin;
            if (m.sti >= 0) {
                key.sti = m.sti;
            }
            key.context = m.extraContext;
        }
        for (VarId v = 0; v < rule.varNames.size(); ++v) {
            if (bound_[v] && v != lit.choiceVar && (!rule.timeVar || v != *rule.timeVar)) {
                key.context.emplace_back(rule.varNames[v], prog_.groundToString(values_[v]));
            }
        }
        std::sort(key.context.begin(), key.context.end());
        return key;
    }

    std::vector<GroundTerm> choiceCandidates(const Rule &rule, const Literal &lit) {
        std::vector<GroundTerm> out;
        if (lit.choiceSrc == Literal::ChoiceSrc::FromSort) {
            const SortDecl &sort = prog_.sorts[lit.choiceSort];
            for (SymbolId inst : sort.instanceIds) {
                GroundTerm cand = GroundTerm::symbol(inst);
                bool excluded = false;
                for (const auto &t : lit.exceptTerms) {
                    const GroundTerm &x = t.kind == Term::Kind::Const ? t.constant : values_[t.var];
                    if (x == cand) {
                        excluded = true;
                        break;
                    }
                }
                if (!excluded) {
                    out.push_back(cand);
                }
            }
            return out;
        }
        // Pattern form: candidates are the values the choice variable takes in
        // the branch-local database right now, in fact order.
        const Atom &atom = lit.atom;
        int slot = -1;
        for (std::size_t i = 0; i < atom.args.size(); ++i) {
            if (atom.args[i].kind == Term::Kind::Var && atom.args[i].var == lit.choiceVar) {
                slot = static_cast<int>(i);
            }
        }
        if (slot < 0) {
            return out;
        }
        const auto &ext = db_.extension(atom.pred);
        for (const auto &[sti, facts] : ext) {
            for (const auto &fact : facts) {
                ++localScans_[currentRule_];
                bool match = true;
                if (atom.time.kind == TimeRef::Kind::Const) {
                    match = sti == atom.time.value;
                } else if (atom.time.kind == TimeRef::Kind::Var) {
                    match = values_[*rule.timeVar].num.num() == sti;
                }
                for (std::size_t i = 0; match && i < atom.args.size(); ++i) {
                    if (static_cast<int>(i) == slot) {
                        continue;
                    }
                    const Term &t = atom.args[i];
                    const GroundTerm &want = t.kind == Term::Kind::Const ? t.constant : values_[t.var];
                    match = want == fact[i];
                }
                if (match && std::find(out.begin(), out.end(), fact[slot]) == out.end()) {
                    out.push_back(fact[slot]);
                }
            }
        }
        return out;
    }

    Status matchBuiltin(const Rule &rule, std::size_t li, const Literal &lit) {
        scratchArgs_.clear();
        for (const auto &t : lit.inputs) {
            scratchArgs_.push_back(t.kind == Term::Kind::Const ? t.constant : values_[t.var]);
        }
        const BuiltinDef *def = findBuiltin(lit.fnName);
        GroundTerm result;
        try {
            result = def->fn(scratchArgs_);
        } catch (const BuiltinError &e) {
            diagnostic_ = "rule '" + rule.id + "': " + e.what();
            return Status::Aborted;
        }
        values_[lit.outVar] = result;
        bound_[lit.outVar] = true;
        Status st = matchFrom(rule, li + 1);
        bound_[lit.outVar] = false;
        return st;
    }

    Status matchAggregate(const Rule &rule, std::size_t li, const Literal &lit) {
        aggValues_.clear();
        Status st = aggregateJoin(rule, lit, 0);
        if (st != Status::Ok) {
            return st; // builtin-style abort inside aggregation cannot happen; keep shape
        }
        GroundTerm out;
        bool have = true;
        switch (lit.aggOp) {
        case AggOp::Count:
            out = GroundTerm::number(Rational(static_cast<std::int64_t>(aggValues_.size())));
            break;
        case AggOp::Sum: {
            Rational sum(0);
            for (const auto &v : aggValues_) {
                if (v.kind != GroundTerm::Kind::Num) {
                    diagnostic_ = "rule '" + rule.id + "': aggregate over non-numeric value";
                    return Status::Aborted;
                }
                sum = sum + v.num;
            }
            out = GroundTerm::number(sum);
            break;
        }
        case AggOp::Min:
        case AggOp::Max: {
            if (aggValues_.empty()) {
                have = false;
                break;
            }
            Rational best;
            bool first = true;
            for (const auto &v : aggValues_) {
                if (v.kind != GroundTerm::Kind::Num) {
                    diagnostic_ = "rule '" + rule.id + "': aggregate over non-numeric value";
                    return Status::Aborted;
                }
                if (first) {
                    best = v.num;
                    first = false;
                } else if (lit.aggOp == AggOp::Min ? v.num < best : v.num > best) {
                    best = v.num;
                }
            }
            out = GroundTerm::number(best);
            break;
        }
        }
        if (!have) {
            return Status::Ok; // empty min/max: the literal fails
        }
        values_[lit.aggOut] = out;
        bound_[lit.aggOut] = true;
        Status result = matchFrom(rule, li + 1);
        bound_[lit.aggOut] = false;
        return result;
    }

    Status aggregateJoin(const Rule &rule, const Literal &lit, std::size_t pi) {
        if (pi == lit.aggPatterns.size()) {
            aggValues_.push_back(values_[lit.aggValue]);
            return Status::Ok;
        }
        const Atom &atom = lit.aggPatterns[pi];
        const auto &ext = db_.extension(atom.pred);
        std::vector<VarId> newlyBound;
        for (const auto &[sti, facts] : ext) {
            for (const auto &fact : facts) {
                ++localScans_[currentRule_];
                newlyBound.clear();
                if (unifyAtom(rule, atom, sti, fact, newlyBound)) {
                    aggregateJoin(rule, lit, pi + 1);
                }
                unbind(newlyBound, 0);
            }
        }
        return Status::Ok;
    }

    Status fire(const Rule &rule) {
        if (rule.headIsFalse) {
            diagnostic_ = rule.id;
            return Status::Pruned;
        }
        for (const auto &atom : rule.head) {
            int sti = 0;
            const PredDecl &decl = prog_.preds[atom.pred];
            if (decl.timeIndexed) {
                switch (atom.time.kind) {
                case TimeRef::Kind::Const:
                    sti = atom.time.value;
                    break;
                case TimeRef::Kind::Var:
                    sti = static_cast<int>(values_[*rule.timeVar].num.num());
                    break;
                case TimeRef::Kind::VarPlusOne:
                    sti = static_cast<int>(values_[*rule.timeVar].num.num()) + 1;
                    break;
                case TimeRef::Kind::None:
                    break;
                }
                if (sti > prog_.horizon) {
                    throw EngineError("rule '" + rule.id + "' writes a '" + decl.name +
                                      "' fact at STI " + std::to_string(sti) +
                                      " beyond horizon " + std::to_string(prog_.horizon));
                }
            }
            scratchArgs_.clear();
            for (const auto &t : atom.args) {
                scratchArgs_.push_back(t.kind == Term::Kind::Const ? t.constant : values_[t.var]);
            }
            if (buffered_) {
                if (!db_.contains(atom.pred, sti, scratchArgs_)) {
                    pendingFacts_.push_back(TrailEntry{atom.pred, sti, scratchArgs_});
                    pendingRule_ = rule.id;
                }
            } else {
                insertFact(atom.pred, sti, scratchArgs_, &rule.id);
            }
        }
        return Status::Ok;
    }

    bool insertFact(PredId pred, int sti, const FactArgs &args, const std::string *ruleId) {
        if (!db_.insert(pred, sti, args)) {
            return false;
        }
        trail_.push_back(TrailEntry{pred, sti, args});
        if (opts_.trace && ruleId != nullptr) {
            opts_.trace(TraceEvent{sweep_, *ruleId, pred, sti, args});
        }
        return true;
    }

    const Program &prog_;
    const PartitionPlan &plan_;
    RunOptions opts_;
    Database db_;

    bool clocked_ = false;
    int lastSweep_ = 1;
    std::optional<PredId> clockPred_;

    int sweep_ = 0;
    std::size_t partitionIdx_ = static_cast<std::size_t>(-1);

    std::vector<GroundTerm> values_;
    std::vector<bool> bound_;
    std::vector<TrailEntry> trail_;
    std::map<ChoiceKey, GroundTerm> decisions_;
    Label label_;
    std::optional<PendingChoice> pending_;
    std::string diagnostic_;
    std::uint32_t currentRule_ = 0;
    bool buffered_ = false;
    std::vector<TrailEntry> pendingFacts_;
    std::string pendingRule_;
    FactArgs scratchArgs_;
    std::vector<GroundTerm> aggValues_;
    std::vector<std::uint64_t> localScans_;

    const std::vector<std::uint32_t> *prefix_ = nullptr;
    std::size_t prefixPos_ = 0;
    bool exactReplay_ = false;
};

} // namespace

EnumerateResult enumerateTrajectories(const Program &prog, const PartitionPlan &plan,
                                      const LeafVisitor &visit, const RunOptions &opts,
                                      const std::vector<std::uint32_t> &prefix) {
    Run run(prog, plan, opts);
    return run.enumerate(prefix, visit, /*exactReplay=*/false);
}

LeafStatus replayTrajectory(const Program &prog, const PartitionPlan &plan,
                            const std::vector<std::uint32_t> &picks, const LeafVisitor &visit,
                            const RunOptions &opts) {
    Run run(prog, plan, opts);
    LeafStatus status = LeafStatus::Completed;
    bool seen = false;
    LeafVisitor wrapper = [&](const LeafInfo &info) {
        status = info.status;
        seen = true;
        if (visit) {
            visit(info);
        }
    };
    run.enumerate(picks, wrapper, /*exactReplay=*/true);
    if (!seen) {
        throw EngineError("replay produced no leaf");
    }
    return status;
}

ProbeResult probeChoicePoint(const Program &prog, const PartitionPlan &plan,
                             const std::vector<std::uint32_t> &prefix) {
    RunOptions opts;
    Run run(prog, plan, opts);
    return run.probe(prefix);
}

} // namespace trajex
