#include "trajex/validate.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace trajex {

std::string ValidationReport::summary() const {
    std::ostringstream os;
    for (const auto &v : violations) {
        os << v.code;
        if (!v.ruleId.empty()) {
            os << " [rule " << v.ruleId << "]";
        }
        os << ": " << v.message << "\n";
    }
    return os.str();
}

namespace {

class Checker {
  public:
    explicit Checker(const Program &prog) : prog_(prog) {}

    ValidationReport run() {
        checkInits();
        for (const auto &rule : prog_.rules) {
            checkRule(rule);
        }
        checkTheorems();
        return std::move(report_);
    }

  private:
    void add(const std::string &code, const std::string &msg, const std::string &ruleId = "",
             SourcePos pos = {}) {
        report_.violations.push_back(Violation{code, msg, ruleId, pos});
    }

    bool groundMatchesSort(const GroundTerm &g, const ArgSort &s) const {
        if (s.kind == ArgSort::Kind::Number) {
            return g.kind == GroundTerm::Kind::Num;
        }
        if (g.kind != GroundTerm::Kind::Sym) {
            return false;
        }
        const auto &ids = prog_.sorts[s.sort].instanceIds;
        return std::find(ids.begin(), ids.end(), g.sym) != ids.end();
    }

    void checkInits() {
        for (const auto &f : prog_.inits) {
            const PredDecl &d = prog_.preds[f.pred];
            if (d.timeIndexed && f.sti > prog_.horizon) {
                add("init-beyond-horizon",
                    "initial fact for '" + d.name + "' at STI " + std::to_string(f.sti) +
                        " exceeds horizon " + std::to_string(prog_.horizon),
                    "", f.pos);
            }
            for (std::size_t i = 0; i < f.args.size(); ++i) {
                if (!groundMatchesSort(f.args[i], d.argSorts[i])) {
                    add("init-sort-mismatch",
                        "argument " + std::to_string(i + 1) + " of initial fact for '" + d.name +
                            "' does not belong to the declared sort",
                        "", f.pos);
                }
            }
        }
    }

    // Records that `var` is used at a position of sort `s`; flags conflicts.
    void noteVarSort(std::vector<int> &sortOf, const Rule &rule, VarId var, const ArgSort &s) {
        int want = s.kind == ArgSort::Kind::Number ? VarSorts::kNumeric : static_cast<int>(s.sort);
        int &cur = sortOf[var];
        if (cur == VarSorts::kConflict || cur == want) {
            return;
        }
        if (cur == VarSorts::kNumeric) {
            cur = want;
            return;
        }
        if (want == VarSorts::kNumeric) {
            return;
        }
        cur = VarSorts::kConflict;
        add("sort-mismatch",
            "variable '" + rule.varNames[var] + "' is used at positions of different sorts",
            rule.id, rule.pos);
    }

    void checkAtomArgs(const Rule &rule, const Atom &atom, std::vector<int> &sortOf) {
        const PredDecl &d = prog_.preds[atom.pred];
        for (std::size_t i = 0; i < atom.args.size(); ++i) {
            const Term &t = atom.args[i];
            if (t.kind == Term::Kind::Var) {
                noteVarSort(sortOf, rule, t.var, d.argSorts[i]);
            } else if (!groundMatchesSort(t.constant, d.argSorts[i])) {
                add("arg-sort-mismatch",
                    "argument " + std::to_string(i + 1) + " of '" + d.name +
                        "' does not belong to the declared sort",
                    rule.id, atom.pos);
            }
        }
    }

    // Atom variables become bound; time var too when present.
    void bindAtomVars(const Rule &rule, const Atom &atom, std::vector<bool> &bound) {
        for (const auto &t : atom.args) {
            if (t.kind == Term::Kind::Var) {
                bound[t.var] = true;
            }
        }
        if (atom.time.kind == TimeRef::Kind::Var && rule.timeVar) {
            bound[*rule.timeVar] = true;
        }
    }

    void requireBoundAtom(const Rule &rule, const Atom &atom, const std::vector<bool> &bound,
                          const char *code, const std::string &what) {
        for (const auto &t : atom.args) {
            if (t.kind == Term::Kind::Var && !bound[t.var]) {
                add(code, what + ": variable '" + rule.varNames[t.var] + "' is unbound", rule.id,
                    atom.pos);
            }
        }
        if (atom.time.kind == TimeRef::Kind::Var && rule.timeVar && !bound[*rule.timeVar]) {
            add(code, what + ": time variable '" + rule.varNames[*rule.timeVar] + "' is unbound",
                rule.id, atom.pos);
        }
    }

    void checkRule(const Rule &rule) {
        std::vector<bool> bound(rule.varNames.size(), false);
        std::vector<int> sortOf(rule.varNames.size(), VarSorts::kNumeric);

        for (const auto &lit : rule.body) {
            switch (lit.kind) {
            case Literal::Kind::Positive:
                checkAtomArgs(rule, lit.atom, sortOf);
                bindAtomVars(rule, lit.atom, bound);
                break;
            case Literal::Kind::Negated:
                checkAtomArgs(rule, lit.atom, sortOf);
                requireBoundAtom(rule, lit.atom, bound, "unsafe-negation", "unsafe negation");
                break;
            case Literal::Kind::Choice: {
                if (bound[lit.choiceVar]) {
                    add("choice-not-fresh",
                        "choice variable '" + rule.varNames[lit.choiceVar] + "' is already bound",
                        rule.id, lit.pos);
                }
                if (lit.choiceSrc == Literal::ChoiceSrc::FromSort) {
                    noteVarSort(sortOf, rule, lit.choiceVar,
                                ArgSort{ArgSort::Kind::Sort, lit.choiceSort});
                    for (const auto &t : lit.exceptTerms) {
                        if (t.kind == Term::Kind::Var && !bound[t.var]) {
                            add("choice-unbound-except",
                                "except-term variable '" + rule.varNames[t.var] + "' is unbound",
                                rule.id, lit.pos);
                        }
                    }
                } else {
                    checkAtomArgs(rule, lit.atom, sortOf);
                    int occurrences = 0;
                    for (const auto &t : lit.atom.args) {
                        if (t.kind == Term::Kind::Var) {
                            if (t.var == lit.choiceVar) {
                                ++occurrences;
                            } else if (!bound[t.var]) {
                                add("choice-unbound-context",
                                    "choice pattern variable '" + rule.varNames[t.var] +
                                        "' is unbound",
                                    rule.id, lit.pos);
                            }
                        }
                    }
                    if (lit.atom.time.kind == TimeRef::Kind::Var && rule.timeVar &&
                        !bound[*rule.timeVar]) {
                        add("choice-unbound-context",
                            "choice pattern time variable is unbound", rule.id, lit.pos);
                    }
                    if (occurrences != 1) {
                        add("choice-pattern-shape",
                            "choice variable '" + rule.varNames[lit.choiceVar] +
                                "' must occur exactly once in the pattern",
                            rule.id, lit.pos);
                    }
                }
                bound[lit.choiceVar] = true;
                break;
            }
            case Literal::Kind::Builtin: {
                for (const auto &t : lit.inputs) {
                    if (t.kind == Term::Kind::Var && !bound[t.var]) {
                        add("builtin-unbound-input",
                            "builtin input variable '" + rule.varNames[t.var] + "' is unbound",
                            rule.id, lit.pos);
                    }
                }
                if (bound[lit.outVar]) {
                    add("builtin-output-not-fresh",
                        "builtin output variable '" + rule.varNames[lit.outVar] +
                            "' is already bound",
                        rule.id, lit.pos);
                }
                bound[lit.outVar] = true;
                break;
            }
            case Literal::Kind::Aggregate: {
                if (bound[lit.aggOut]) {
                    add("aggregate-output-not-fresh",
                        "aggregate output variable '" + rule.varNames[lit.aggOut] +
                            "' is already bound",
                        rule.id, lit.pos);
                }
                bool valueSeen = false;
                for (const auto &pat : lit.aggPatterns) {
                    checkAtomArgs(rule, pat, sortOf);
                    for (const auto &t : pat.args) {
                        if (t.kind == Term::Kind::Var && t.var == lit.aggValue) {
                            valueSeen = true;
                        }
                    }
                }
                if (!valueSeen) {
                    add("aggregate-value-missing",
                        "aggregated variable '" + rule.varNames[lit.aggValue] +
                            "' does not occur in the source patterns",
                        rule.id, lit.pos);
                }
                bound[lit.aggOut] = true;
                break;
            }
            }
        }

        if (rule.headIsFalse && !rule.head.empty()) {
            add("false-not-alone", "FALSE must be the sole consequent", rule.id, rule.pos);
        }
        for (const auto &atom : rule.head) {
            checkAtomArgs(rule, atom, sortOf);
            requireBoundAtom(rule, atom, bound, "range-restriction", "range restriction");
        }

        checkSplitDims(rule, sortOf);
    }

    void checkSplitDims(const Rule &rule, const std::vector<int> &sortOf) {
        if (rule.splitDims.empty()) {
            return;
        }
        std::set<std::string> seen;
        bool hasTime = false;
        for (const auto &dim : rule.splitDims) {
            if (!seen.insert(dim).second) {
                add("split-duplicate-dim", "duplicate split dimension '" + dim + "'", rule.id,
                    rule.pos);
            }
            if (dim == "time") {
                hasTime = true;
                if (!rule.timeVar) {
                    add("split-time-on-static", "rule has no time variable to split by", rule.id,
                        rule.pos);
                }
                continue;
            }
            auto sortIdx = prog_.findSort(dim);
            if (!sortIdx) {
                add("split-unknown-sort", "split dimension '" + dim + "' is not a declared sort",
                    rule.id, rule.pos);
                continue;
            }
            bool used = false;
            for (std::size_t v = 0; v < sortOf.size(); ++v) {
                if (sortOf[v] == static_cast<int>(*sortIdx)) {
                    used = true;
                    break;
                }
            }
            if (!used) {
                add("split-sort-unused",
                    "split dimension '" + dim + "' does not occur as a variable sort in the rule",
                    rule.id, rule.pos);
            }
        }
        if (rule.timeVar && !hasTime) {
            add("split-missing-time", "time splitting is mandatory for time-indexed rules",
                rule.id, rule.pos);
        }
    }

    void checkTheorems() {
        for (const auto &t : prog_.theorems) {
            if (t.from < 1 || t.to > prog_.horizon || t.from >= t.to) {
                add("theorem-range",
                    "theorem '" + t.name + "' range [" + std::to_string(t.from) + ", " +
                        std::to_string(t.to) + "] is not a valid STI span within horizon " +
                        std::to_string(prog_.horizon),
                    "");
            }
        }
    }

    const Program &prog_;
    ValidationReport report_;
};

} // namespace

ValidationReport validate(const Program &prog) { return Checker(prog).run(); }

VarSorts inferVarSorts(const Program &prog, const Rule &rule) {
    VarSorts result;
    result.sortOf.assign(rule.varNames.size(), VarSorts::kNumeric);
    auto note = [&](VarId var, const ArgSort &s) {
        int want = s.kind == ArgSort::Kind::Number ? VarSorts::kNumeric : static_cast<int>(s.sort);
        int &cur = result.sortOf[var];
        if (cur == VarSorts::kConflict || cur == want || want == VarSorts::kNumeric) {
            return;
        }
        if (cur == VarSorts::kNumeric) {
            cur = want;
        } else {
            cur = VarSorts::kConflict;
        }
    };
    auto noteAtom = [&](const Atom &atom) {
        const PredDecl &d = prog.preds[atom.pred];
        for (std::size_t i = 0; i < atom.args.size(); ++i) {
            if (atom.args[i].kind == Term::Kind::Var) {
                note(atom.args[i].var, d.argSorts[i]);
            }
        }
    };
    for (const auto &lit : rule.body) {
        switch (lit.kind) {
        case Literal::Kind::Positive:
        case Literal::Kind::Negated:
            noteAtom(lit.atom);
            break;
        case Literal::Kind::Choice:
            if (lit.choiceSrc == Literal::ChoiceSrc::FromSort) {
                note(lit.choiceVar, ArgSort{ArgSort::Kind::Sort, lit.choiceSort});
            } else {
                noteAtom(lit.atom);
            }
            break;
        case Literal::Kind::Builtin:
            break;
        case Literal::Kind::Aggregate:
            for (const auto &pat : lit.aggPatterns) {
                noteAtom(pat);
            }
            break;
        }
    }
    for (const auto &atom : rule.head) {
        noteAtom(atom);
    }
    return result;
}

} // namespace trajex
