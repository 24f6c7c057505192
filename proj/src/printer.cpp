#include "trajex/printer.hpp"

#include <sstream>

namespace trajex {

namespace {

class Printer {
  public:
    explicit Printer(const Program &prog) : prog_(prog) {}

    std::string run() {
        for (const auto &s : prog_.sorts) {
            out_ << "sort " << s.name << " { ";
            for (std::size_t i = 0; i < s.instances.size(); ++i) {
                out_ << (i ? ", " : "") << s.instances[i];
            }
            out_ << " }\n";
        }
        sectionBreak(!prog_.sorts.empty());
        for (const auto &p : prog_.params) {
            out_ << "param " << p.name << " = " << p.value.toString() << "\n";
        }
        sectionBreak(!prog_.params.empty());
        bool any = false;
        for (const auto &p : prog_.preds) {
            if (p.implicit) {
                continue;
            }
            any = true;
            out_ << "pred " << p.name << "(";
            for (std::size_t i = 0; i < p.argSorts.size(); ++i) {
                out_ << (i ? ", " : "") << argSortName(p.argSorts[i]);
            }
            if (p.timeIndexed) {
                out_ << (p.argSorts.empty() ? "" : ", ") << "time";
            }
            out_ << ")\n";
        }
        sectionBreak(any);
        out_ << "horizon " << prog_.horizon << "\n";
        sectionBreak(true);
        any = false;
        for (const auto &f : prog_.inits) {
            if (f.implicit) {
                continue;
            }
            any = true;
            out_ << "init " << formatFact(prog_, f.pred, f.sti, f.args) << "\n";
        }
        sectionBreak(any);
        for (const auto &r : prog_.rules) {
            printRule(r);
            out_ << "\n";
        }
        for (const auto &o : prog_.observables) {
            out_ << "observable " << o.name << " = " << side(o.first);
            if (o.minus) {
                out_ << " - " << side(*o.minus);
            }
            out_ << "\n";
        }
        sectionBreak(!prog_.observables.empty());
        for (const auto &t : prog_.theorems) {
            out_ << "theorem " << t.name << " = " << t.observable << " " << chainKindName(t.chain)
                 << " from " << t.from << " to " << t.to << "\n";
        }
        return out_.str();
    }

  private:
    void sectionBreak(bool hadContent) {
        if (hadContent) {
            out_ << "\n";
        }
    }

    std::string argSortName(const ArgSort &a) const {
        return a.kind == ArgSort::Kind::Number ? "number" : prog_.sorts[a.sort].name;
    }

    std::string side(const ObservableTermExpr &s) const {
        return std::string(aggOpName(s.op)) + "(" + prog_.preds[s.pred].name + "[" +
               std::to_string(s.argPos) + "])";
    }

    std::string term(const Rule &r, const Term &t) const {
        if (t.kind == Term::Kind::Var) {
            return r.varNames[t.var];
        }
        return prog_.groundToString(t.constant);
    }

    std::string atom(const Rule &r, const Atom &a) const {
        std::string s = prog_.preds[a.pred].name + "(";
        for (std::size_t i = 0; i < a.args.size(); ++i) {
            s += (i ? ", " : "") + term(r, a.args[i]);
        }
        if (a.time.kind != TimeRef::Kind::None) {
            if (!a.args.empty()) {
                s += ", ";
            }
            switch (a.time.kind) {
            case TimeRef::Kind::Var:
                s += r.varNames[*r.timeVar];
                break;
            case TimeRef::Kind::VarPlusOne:
                s += r.varNames[*r.timeVar] + " + 1";
                break;
            case TimeRef::Kind::Const:
                s += std::to_string(a.time.value);
                break;
            case TimeRef::Kind::None:
                break;
            }
        }
        return s + ")";
    }

    std::string literal(const Rule &r, const Literal &l) const {
        switch (l.kind) {
        case Literal::Kind::Positive:
            return atom(r, l.atom);
        case Literal::Kind::Negated:
            return "not " + atom(r, l.atom);
        case Literal::Kind::Choice: {
            std::string s = "choose " + r.varNames[l.choiceVar];
            if (l.choiceSrc == Literal::ChoiceSrc::FromSort) {
                s += " in " + prog_.sorts[l.choiceSort].name;
                for (std::size_t i = 0; i < l.exceptTerms.size(); ++i) {
                    s += (i ? ", " : " except ") + term(r, l.exceptTerms[i]);
                }
            } else {
                s += " from " + atom(r, l.atom);
            }
            return s;
        }
        case Literal::Kind::Builtin: {
            std::string s = "let " + r.varNames[l.outVar] + " = " + l.fnName + "(";
            for (std::size_t i = 0; i < l.inputs.size(); ++i) {
                s += (i ? ", " : "") + term(r, l.inputs[i]);
            }
            return s + ")";
        }
        case Literal::Kind::Aggregate: {
            std::string s = "agg " + r.varNames[l.aggOut] + " = " + aggOpName(l.aggOp) + " " +
                            r.varNames[l.aggValue] + " in ";
            if (l.aggPatterns.size() == 1) {
                s += atom(r, l.aggPatterns[0]);
            } else {
                s += "(";
                for (std::size_t i = 0; i < l.aggPatterns.size(); ++i) {
                    s += (i ? ", " : "") + atom(r, l.aggPatterns[i]);
                }
                s += ")";
            }
            return s;
        }
        }
        return "";
    }

    void printRule(const Rule &r) {
        out_ << "rule " << r.id << ":\n";
        for (std::size_t i = 0; i < r.body.size(); ++i) {
            out_ << "    " << literal(r, r.body[i]) << (i + 1 < r.body.size() ? " and\n" : "\n");
        }
        out_ << "implies\n";
        if (r.headIsFalse) {
            out_ << "    false\n";
        } else {
            for (std::size_t i = 0; i < r.head.size(); ++i) {
                out_ << "    " << atom(r, r.head[i]) << (i + 1 < r.head.size() ? " and\n" : "\n");
            }
        }
        if (!r.splitDims.empty()) {
            out_ << "split by ";
            for (std::size_t i = 0; i < r.splitDims.size(); ++i) {
                out_ << (i ? ", " : "") << r.splitDims[i];
            }
            out_ << "\n";
        }
        out_ << ".\n";
    }

    const Program &prog_;
    std::ostringstream out_;
};

} // namespace

std::string formatProgram(const Program &prog) { return Printer(prog).run(); }

std::string formatFact(const Program &prog, PredId pred, int sti,
                       const std::vector<GroundTerm> &args) {
    std::string s = prog.preds[pred].name + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        s += (i ? ", " : "") + prog.groundToString(args[i]);
    }
    if (prog.preds[pred].timeIndexed) {
        if (!args.empty()) {
            s += ", ";
        }
        s += std::to_string(sti);
    }
    return s + ")";
}

} // namespace trajex
