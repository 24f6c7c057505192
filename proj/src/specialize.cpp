#include "trajex/specialize.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "trajex/parser.hpp"
#include "trajex/printer.hpp"
#include "trajex/validate.hpp"

namespace trajex {

std::string foldedPredName(const std::string &name, int sti) {
    return name + "_t" + std::to_string(sti);
}

std::optional<std::pair<std::string, int>> parseFoldedName(const std::string &name) {
    std::size_t pos = name.rfind("_t");
    if (pos == std::string::npos || pos == 0 || pos + 2 >= name.size()) {
        return std::nullopt;
    }
    for (std::size_t i = pos + 2; i < name.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) {
            return std::nullopt;
        }
    }
    return std::make_pair(name.substr(0, pos), std::stoi(name.substr(pos + 2)));
}

namespace {

std::vector<SplitDirective> effectiveDirectives(const Program &prog,
                                                const std::vector<SplitDirective> &overrides) {
    std::vector<SplitDirective> out;
    for (const auto &rule : prog.rules) {
        SplitDirective d;
        d.ruleId = rule.id;
        const std::vector<std::string> *dims = nullptr;
        for (const auto &o : overrides) {
            if (o.ruleId == rule.id) {
                dims = &o.dims;
            }
        }
        if (dims == nullptr && !rule.splitDims.empty()) {
            dims = &rule.splitDims;
        }
        if (dims != nullptr) {
            d.dims = *dims;
        } else if (rule.timeVar) {
            d.dims = {"time"};
        }
        if (rule.timeVar &&
            std::find(d.dims.begin(), d.dims.end(), "time") == d.dims.end()) {
            throw SpecializeError("rule '" + rule.id +
                                  "' is time-indexed; its directive must split by time");
        }
        for (const auto &dim : d.dims) {
            if (dim == "time") {
                if (!rule.timeVar) {
                    throw SpecializeError("rule '" + rule.id + "' has no time variable to split by");
                }
                continue;
            }
            auto sortIdx = prog.findSort(dim);
            if (!sortIdx) {
                throw SpecializeError("directive for rule '" + rule.id + "' names unknown sort '" +
                                      dim + "'");
            }
            VarSorts vs = inferVarSorts(prog, rule);
            bool used = false;
            for (int s : vs.sortOf) {
                if (s == static_cast<int>(*sortIdx)) {
                    used = true;
                }
            }
            if (!used) {
                throw SpecializeError("directive for rule '" + rule.id + "' names sort '" + dim +
                                      "' which no rule variable has");
            }
        }
        out.push_back(std::move(d));
    }
    return out;
}

class TextBuilder {
  public:
    TextBuilder(const Program &prog, const std::vector<SplitDirective> &directives)
        : prog_(prog), directives_(directives) {}

    std::string build(std::vector<RuleProvenance> &provenance) {
        for (const auto &s : prog_.sorts) {
            out_ << "sort " << s.name << " { ";
            for (std::size_t i = 0; i < s.instances.size(); ++i) {
                out_ << (i ? ", " : "") << s.instances[i];
            }
            out_ << " }\n";
        }
        for (const auto &p : prog_.params) {
            out_ << "param " << p.name << " = " << p.value.toString() << "\n";
        }
        for (const auto &p : prog_.preds) {
            if (p.implicit && p.name != kClockPred) {
                continue; // sort membership predicates regenerate from sorts
            }
            if (p.timeIndexed) {
                for (int t = 1; t <= prog_.horizon; ++t) {
                    std::string folded = foldedPredName(p.name, t);
                    if (prog_.findPred(folded)) {
                        throw SpecializeError("folded name '" + folded +
                                              "' collides with a declared predicate");
                    }
                    out_ << "pred " << folded << "(";
                    emitArgSorts(p);
                    out_ << ")\n";
                }
            } else {
                out_ << "pred " << p.name << "(";
                emitArgSorts(p);
                out_ << ")\n";
            }
        }
        out_ << "horizon " << prog_.horizon << "\n";
        for (const auto &f : prog_.inits) {
            if (f.implicit) {
                continue;
            }
            const PredDecl &d = prog_.preds[f.pred];
            out_ << "init " << (d.timeIndexed ? foldedPredName(d.name, f.sti) : d.name) << "(";
            for (std::size_t i = 0; i < f.args.size(); ++i) {
                out_ << (i ? ", " : "") << prog_.groundToString(f.args[i]);
            }
            out_ << ")\n";
        }
        if (prog_.hasTimeIndexedPred()) {
            for (int t = 1; t <= prog_.horizon; ++t) {
                out_ << "init " << foldedPredName(kClockPred, t) << "()\n";
            }
        }
        for (std::uint32_t r = 0; r < prog_.rules.size(); ++r) {
            emitRule(prog_.rules[r], directives_[r], provenance);
        }
        return out_.str();
    }

  private:
    void emitArgSorts(const PredDecl &p) {
        for (std::size_t i = 0; i < p.argSorts.size(); ++i) {
            out_ << (i ? ", " : "")
                 << (p.argSorts[i].kind == ArgSort::Kind::Number
                         ? "number"
                         : prog_.sorts[p.argSorts[i].sort].name);
        }
    }

    using Subst = std::map<VarId, std::string>; // variable -> replacement text

    std::string term(const Rule &rule, const Term &t, const Subst &subst) const {
        if (t.kind == Term::Kind::Const) {
            return prog_.groundToString(t.constant);
        }
        auto it = subst.find(t.var);
        return it != subst.end() ? it->second : rule.varNames[t.var];
    }

    std::string atomText(const Rule &rule, const Atom &atom, const Subst &subst, int sti) const {
        const PredDecl &d = prog_.preds[atom.pred];
        std::string name = d.name;
        if (d.timeIndexed) {
            int at = 0;
            switch (atom.time.kind) {
            case TimeRef::Kind::Const: at = atom.time.value; break;
            case TimeRef::Kind::Var: at = sti; break;
            case TimeRef::Kind::VarPlusOne: at = sti + 1; break;
            case TimeRef::Kind::None: break;
            }
            name = foldedPredName(name, at);
        }
        std::string s = name + "(";
        for (std::size_t i = 0; i < atom.args.size(); ++i) {
            s += (i ? ", " : "") + term(rule, atom.args[i], subst);
        }
        return s + ")";
    }

    std::string literalText(const Rule &rule, const Literal &lit, const Subst &subst,
                            int sti) const {
        switch (lit.kind) {
        case Literal::Kind::Positive:
            return atomText(rule, lit.atom, subst, sti);
        case Literal::Kind::Negated:
            return "not " + atomText(rule, lit.atom, subst, sti);
        case Literal::Kind::Choice: {
            std::string s = "choose " + rule.varNames[lit.choiceVar];
            if (lit.choiceSrc == Literal::ChoiceSrc::FromSort) {
                s += " in " + prog_.sorts[lit.choiceSort].name;
                for (std::size_t i = 0; i < lit.exceptTerms.size(); ++i) {
                    s += (i ? ", " : " except ") + term(rule, lit.exceptTerms[i], subst);
                }
            } else {
                s += " from " + atomText(rule, lit.atom, subst, sti);
            }
            return s;
        }
        case Literal::Kind::Builtin: {
            std::string s = "let " + rule.varNames[lit.outVar] + " = " + lit.fnName + "(";
            for (std::size_t i = 0; i < lit.inputs.size(); ++i) {
                s += (i ? ", " : "") + term(rule, lit.inputs[i], subst);
            }
            return s + ")";
        }
        case Literal::Kind::Aggregate: {
            std::string s = "agg " + rule.varNames[lit.aggOut] + " = " + aggOpName(lit.aggOp) +
                            " " + rule.varNames[lit.aggValue] + " in ";
            if (lit.aggPatterns.size() == 1) {
                return s + atomText(rule, lit.aggPatterns[0], subst, sti);
            }
            s += "(";
            for (std::size_t i = 0; i < lit.aggPatterns.size(); ++i) {
                s += (i ? ", " : "") + atomText(rule, lit.aggPatterns[i], subst, sti);
            }
            return s + ")";
        }
        }
        return "";
    }

    void emitOneRule(const Rule &rule, const std::string &id, const Subst &subst, int sti,
                     RuleProvenance prov, std::vector<RuleProvenance> &provenance) {
        out_ << "rule " << id << ":\n";
        for (std::size_t i = 0; i < rule.body.size(); ++i) {
            out_ << "    " << literalText(rule, rule.body[i], subst, sti)
                 << (i + 1 < rule.body.size() ? " and\n" : "\n");
        }
        out_ << "implies\n";
        if (rule.headIsFalse) {
            out_ << "    false\n";
        } else {
            for (std::size_t i = 0; i < rule.head.size(); ++i) {
                out_ << "    " << atomText(rule, rule.head[i], subst, sti)
                     << (i + 1 < rule.head.size() ? " and\n" : "\n");
            }
        }
        out_ << ".\n";
        provenance.push_back(std::move(prov));
    }

    void emitRule(const Rule &rule, const SplitDirective &directive,
                  std::vector<RuleProvenance> &provenance) {
        if (!rule.timeVar) {
            // Copied as one rule; constant time arguments still fold.
            emitOneRule(rule, rule.id, {}, 0, RuleProvenance{rule.id, -1, {}}, provenance);
            return;
        }
        // Variables to instantiate per sort dimension, in directive order.
        VarSorts vs = inferVarSorts(prog_, rule);
        std::vector<std::pair<VarId, std::uint32_t>> sortVars; // (var, sort index)
        for (const auto &dim : directive.dims) {
            if (dim == "time") {
                continue;
            }
            std::uint32_t sortIdx = *prog_.findSort(dim);
            for (VarId v = 0; v < vs.sortOf.size(); ++v) {
                if (vs.sortOf[v] == static_cast<int>(sortIdx)) {
                    sortVars.emplace_back(v, sortIdx);
                }
            }
        }
        for (int sti = 1; sti <= prog_.horizon - 1; ++sti) {
            std::vector<std::size_t> odometer(sortVars.size(), 0);
            for (;;) {
                Subst subst;
                RuleProvenance prov{rule.id, sti, {}};
                std::string id = rule.id + "__t" + std::to_string(sti);
                subst[*rule.timeVar] = std::to_string(sti);
                for (std::size_t k = 0; k < sortVars.size(); ++k) {
                    const SortDecl &sort = prog_.sorts[sortVars[k].second];
                    const std::string &inst = sort.instances[odometer[k]];
                    subst[sortVars[k].first] = inst;
                    id += "__" + inst;
                    prov.bindings.emplace_back(rule.varNames[sortVars[k].first], inst);
                }
                emitOneRule(rule, id, subst, sti, std::move(prov), provenance);
                std::size_t k = 0;
                for (; k < odometer.size(); ++k) {
                    if (++odometer[k] < prog_.sorts[sortVars[k].second].instances.size()) {
                        break;
                    }
                    odometer[k] = 0;
                }
                if (odometer.empty() || k == odometer.size()) {
                    break;
                }
            }
        }
    }

    const Program &prog_;
    const std::vector<SplitDirective> &directives_;
    std::ostringstream out_;
};

} // namespace

SpecializedProgram specialize(const Program &generic, const std::vector<SplitDirective> &overrides) {
    bool anyTimeRule = false;
    for (const auto &r : generic.rules) {
        anyTimeRule |= r.timeVar.has_value();
    }
    if (anyTimeRule && generic.horizon < 2) {
        throw SpecializeError("horizon " + std::to_string(generic.horizon) +
                              " leaves no transition to specialize");
    }
    SpecializedProgram out;
    out.applied = effectiveDirectives(generic, overrides);

    TextBuilder builder(generic, out.applied);
    std::vector<RuleProvenance> provenance;
    std::string text = builder.build(provenance);
    try {
        out.program = parseProgram(text);
    } catch (const ParseError &e) {
        throw SpecializeError(std::string("internal: specialized text does not parse: ") + e.what());
    }
    if (out.program.rules.size() != provenance.size()) {
        throw SpecializeError("internal: provenance does not match the specialized rules");
    }
    out.provenance = std::move(provenance);
    out.meta.reserve(out.provenance.size());
    for (const auto &p : out.provenance) {
        RuleMeta m;
        m.origin = p.origin;
        m.sti = p.sti;
        for (const auto &[var, inst] : p.bindings) {
            m.extraContext.emplace_back(var, inst);
        }
        out.meta.push_back(std::move(m));
        out.splitCountByOrigin[p.origin] += 1;
    }
    for (std::uint32_t r = 0; r < generic.rules.size(); ++r) {
        if (generic.rules[r].timeVar) {
            bool hasChoice = false;
            for (const auto &lit : generic.rules[r].body) {
                hasChoice |= lit.kind == Literal::Kind::Choice;
            }
            if (!hasChoice) {
                out.transitionRulesBefore += 1;
                out.transitionRulesAfter += out.splitCountByOrigin[generic.rules[r].id];
            }
        }
    }
    return out;
}

std::vector<CostPrediction> predictCost(const Program &generic,
                                        const std::vector<SplitDirective> &overrides) {
    std::vector<CostPrediction> out;
    std::vector<SplitDirective> directives = effectiveDirectives(generic, overrides);
    for (std::size_t r = 0; r < generic.rules.size(); ++r) {
        CostPrediction p;
        p.ruleId = generic.rules[r].id;
        p.dims = directives[r].dims;
        for (const auto &dim : p.dims) {
            if (dim == "time") {
                p.factor *= static_cast<std::uint64_t>(generic.horizon - 1);
            } else {
                p.factor *= generic.sorts[*generic.findSort(dim)].instances.size();
            }
        }
        out.push_back(std::move(p));
    }
    return out;
}

// ---- equivalence ----------------------------------------------------------

namespace {

struct LeafDigest {
    std::vector<std::uint32_t> indices;
    std::uint64_t labelHash = 0;
    std::uint64_t factHashA = 0;
    std::uint64_t factHashB = 0;
    LeafStatus status = LeafStatus::Completed;
};

std::uint64_t fnv(const std::string &s, std::uint64_t h) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::vector<std::string> foldedFactLines(const Program &prog, const Database &db) {
    std::vector<std::string> lines;
    for (PredId p = 0; p < prog.preds.size(); ++p) {
        const PredDecl &d = prog.preds[p];
        for (const auto &[sti, facts] : db.extension(p)) {
            std::string name = d.timeIndexed ? foldedPredName(d.name, sti) : d.name;
            for (const auto &fact : facts) {
                std::string line = name + "(";
                for (std::size_t i = 0; i < fact.size(); ++i) {
                    line += (i ? "," : "") + prog.groundToString(fact[i]);
                }
                lines.push_back(line + ")");
            }
        }
    }
    std::sort(lines.begin(), lines.end());
    return lines;
}

LeafDigest digestLeaf(const Program &prog, const LeafInfo &info) {
    LeafDigest d;
    d.status = info.status;
    d.indices.reserve(info.label.size());
    std::uint64_t lh = 1469598103934665603ULL;
    for (const auto &e : info.label) {
        d.indices.push_back(e.index);
        lh = fnv(e.key.toString(), lh);
        lh = fnv("#" + std::to_string(e.index) + "/" + std::to_string(e.candidateCount), lh);
    }
    d.labelHash = lh;
    std::uint64_t a = 1469598103934665603ULL;
    std::uint64_t b = 1099511628211ULL;
    for (const auto &line : foldedFactLines(prog, info.db)) {
        a = fnv(line, a);
        b = fnv(line, b ^ 0x9e3779b97f4a7c15ULL);
    }
    d.factHashA = a;
    d.factHashB = b;
    return d;
}

std::string describeFactDiff(const Program &genericProg, const PartitionPlan &genericPlan,
                             const Program &splitProg, const PartitionPlan &splitPlan,
                             const RunOptions &splitOpts, const std::vector<std::uint32_t> &picks) {
    std::vector<std::string> genericLines;
    std::vector<std::string> splitLines;
    replayTrajectory(genericProg, genericPlan, picks, [&](const LeafInfo &info) {
        genericLines = foldedFactLines(genericProg, info.db);
    });
    replayTrajectory(splitProg, splitPlan, picks, [&](const LeafInfo &info) {
        splitLines = foldedFactLines(splitProg, info.db);
    }, splitOpts);
    std::vector<std::string> onlyGeneric;
    std::vector<std::string> onlySplit;
    std::set_difference(genericLines.begin(), genericLines.end(), splitLines.begin(),
                        splitLines.end(), std::back_inserter(onlyGeneric));
    std::set_difference(splitLines.begin(), splitLines.end(), genericLines.begin(),
                        genericLines.end(), std::back_inserter(onlySplit));
    std::ostringstream os;
    os << "fact sets differ;";
    if (!onlyGeneric.empty()) {
        os << " only generic: " << onlyGeneric.front();
        if (onlyGeneric.size() > 1) {
            os << " (+" << onlyGeneric.size() - 1 << " more)";
        }
        os << ";";
    }
    if (!onlySplit.empty()) {
        os << " only specialized: " << onlySplit.front();
        if (onlySplit.size() > 1) {
            os << " (+" << onlySplit.size() - 1 << " more)";
        }
    }
    return os.str();
}

} // namespace

EquivalenceReport verifyEquivalence(const Program &generic, const SpecializedProgram &split,
                                    const std::vector<std::vector<std::uint32_t>> *sampleLabels) {
    EquivalenceReport report;
    PartitionPlan genericPlan = buildPartitions(generic);
    PartitionPlan splitPlan = buildPartitions(split.program);
    RunOptions splitOpts;
    splitOpts.meta = &split.meta;

    std::vector<LeafDigest> genericLeaves;
    std::vector<LeafDigest> splitLeaves;
    auto collector = [](const Program &prog, std::vector<LeafDigest> &sink) {
        return [&prog, &sink](const LeafInfo &info) { sink.push_back(digestLeaf(prog, info)); };
    };
    if (sampleLabels == nullptr) {
        enumerateTrajectories(generic, genericPlan, collector(generic, genericLeaves));
        enumerateTrajectories(split.program, splitPlan, collector(split.program, splitLeaves),
                              splitOpts);
    } else {
        for (const auto &picks : *sampleLabels) {
            replayTrajectory(generic, genericPlan, picks, collector(generic, genericLeaves));
            replayTrajectory(split.program, splitPlan, picks, collector(split.program, splitLeaves),
                             splitOpts);
        }
    }

    if (genericLeaves.size() != splitLeaves.size()) {
        report.equivalent = false;
        report.divergence = "structural divergence: " + std::to_string(genericLeaves.size()) +
                            " generic leaves vs " + std::to_string(splitLeaves.size()) +
                            " specialized leaves";
        report.leavesChecked = std::min(genericLeaves.size(), splitLeaves.size());
        return report;
    }
    for (std::size_t i = 0; i < genericLeaves.size(); ++i) {
        const LeafDigest &g = genericLeaves[i];
        const LeafDigest &s = splitLeaves[i];
        std::string divergence;
        if (g.indices != s.indices || g.labelHash != s.labelHash) {
            divergence = "structural divergence: choice trees disagree at leaf " +
                         std::to_string(i);
        } else if (g.status != s.status) {
            divergence = std::string("status differs: generic ") + leafStatusName(g.status) +
                         " vs specialized " + leafStatusName(s.status);
        } else if (g.factHashA != s.factHashA || g.factHashB != s.factHashB) {
            divergence = describeFactDiff(generic, genericPlan, split.program, splitPlan,
                                          splitOpts, g.indices);
        }
        if (!divergence.empty()) {
            report.equivalent = false;
            report.divergence = divergence;
            std::string label;
            for (std::size_t k = 0; k < g.indices.size(); ++k) {
                label += (k ? "." : "") + std::to_string(g.indices[k]);
            }
            report.divergenceLabel = label;
            report.leavesChecked = i;
            return report;
        }
    }
    report.leavesChecked = genericLeaves.size();
    return report;
}

} // namespace trajex
