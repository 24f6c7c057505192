#include "trajex/ast.hpp"

#include <algorithm>
#include <numeric>

namespace trajex {

void SymbolTable::rebuildRanks() const {
    std::vector<std::uint32_t> order(names_.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return names_[a] < names_[b]; });
    ranks_.assign(names_.size(), 0);
    for (std::uint32_t r = 0; r < order.size(); ++r) {
        ranks_[order[r]] = r;
    }
    ranksDirty_ = false;
}

int compareGroundTuple(const std::vector<GroundTerm> &a, const std::vector<GroundTerm> &b,
                       const SymbolTable &syms) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        int c = compareGround(a[i], b[i], syms);
        if (c != 0) {
            return c;
        }
    }
    return a.size() < b.size() ? -1 : a.size() == b.size() ? 0 : 1;
}

const char *aggOpName(AggOp op) {
    switch (op) {
    case AggOp::Sum: return "sum";
    case AggOp::Min: return "min";
    case AggOp::Max: return "max";
    case AggOp::Count: return "count";
    }
    return "?";
}

const char *chainKindName(ChainKind k) {
    switch (k) {
    case ChainKind::StrictlyDecreasing: return "strictly_decreasing";
    case ChainKind::StrictlyIncreasing: return "strictly_increasing";
    case ChainKind::NonIncreasing: return "non_increasing";
    case ChainKind::NonDecreasing: return "non_decreasing";
    }
    return "?";
}

bool Literal::structurallyEquals(const Literal &o) const {
    if (kind != o.kind) {
        return false;
    }
    switch (kind) {
    case Kind::Positive:
    case Kind::Negated:
        return atom == o.atom;
    case Kind::Choice:
        if (choiceSrc != o.choiceSrc || choiceVar != o.choiceVar) {
            return false;
        }
        if (choiceSrc == ChoiceSrc::FromSort) {
            return choiceSort == o.choiceSort && exceptTerms == o.exceptTerms;
        }
        return atom == o.atom;
    case Kind::Builtin:
        return fnName == o.fnName && inputs == o.inputs && outVar == o.outVar;
    case Kind::Aggregate:
        return aggOp == o.aggOp && aggOut == o.aggOut && aggValue == o.aggValue &&
               aggPatterns == o.aggPatterns;
    }
    return false;
}

namespace {

bool sameRule(const Rule &a, const Rule &b) {
    if (a.id != b.id || a.varNames != b.varNames || a.timeVar != b.timeVar ||
        a.headIsFalse != b.headIsFalse || a.splitDims != b.splitDims ||
        a.body.size() != b.body.size() || a.head != b.head) {
        return false;
    }
    for (std::size_t i = 0; i < a.body.size(); ++i) {
        if (!a.body[i].structurallyEquals(b.body[i])) {
            return false;
        }
    }
    return true;
}

bool sameGround(const Program &pa, const GroundTerm &a, const Program &pb, const GroundTerm &b) {
    if (a.kind != b.kind) {
        return false;
    }
    if (a.kind == GroundTerm::Kind::Num) {
        return a.num == b.num;
    }
    return pa.symbols.name(a.sym) == pb.symbols.name(b.sym);
}

} // namespace

bool structurallyEqual(const Program &a, const Program &b) {
    if (a.horizon != b.horizon || a.sorts.size() != b.sorts.size() ||
        a.params.size() != b.params.size() || a.preds.size() != b.preds.size() ||
        a.inits.size() != b.inits.size() || a.rules.size() != b.rules.size() ||
        a.observables.size() != b.observables.size() || a.theorems.size() != b.theorems.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.sorts.size(); ++i) {
        if (a.sorts[i].name != b.sorts[i].name || a.sorts[i].instances != b.sorts[i].instances) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.params.size(); ++i) {
        if (a.params[i].name != b.params[i].name || a.params[i].value != b.params[i].value) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.preds.size(); ++i) {
        const auto &pa = a.preds[i];
        const auto &pb = b.preds[i];
        if (pa.name != pb.name || pa.argSorts != pb.argSorts || pa.timeIndexed != pb.timeIndexed ||
            pa.implicit != pb.implicit) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.inits.size(); ++i) {
        const auto &fa = a.inits[i];
        const auto &fb = b.inits[i];
        if (fa.pred != fb.pred || fa.sti != fb.sti || fa.implicit != fb.implicit ||
            fa.args.size() != fb.args.size()) {
            return false;
        }
        for (std::size_t k = 0; k < fa.args.size(); ++k) {
            if (!sameGround(a, fa.args[k], b, fb.args[k])) {
                return false;
            }
        }
    }
    // Rule terms embed symbol ids; both programs intern declarations in the
    // same order, so ids agree whenever names do. Guard that assumption by
    // comparing the symbol spellings wholesale.
    if (a.symbols.size() != b.symbols.size()) {
        return false;
    }
    for (SymbolId s = 0; s < a.symbols.size(); ++s) {
        if (a.symbols.name(s) != b.symbols.name(s)) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.rules.size(); ++i) {
        if (!sameRule(a.rules[i], b.rules[i])) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.observables.size(); ++i) {
        const auto &oa = a.observables[i];
        const auto &ob = b.observables[i];
        auto sameSide = [](const ObservableTermExpr &x, const ObservableTermExpr &y) {
            return x.op == y.op && x.pred == y.pred && x.argPos == y.argPos;
        };
        if (oa.name != ob.name || !sameSide(oa.first, ob.first) ||
            oa.minus.has_value() != ob.minus.has_value() ||
            (oa.minus && !sameSide(*oa.minus, *ob.minus))) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.theorems.size(); ++i) {
        const auto &ta = a.theorems[i];
        const auto &tb = b.theorems[i];
        if (ta.name != tb.name || ta.observable != tb.observable || ta.chain != tb.chain ||
            ta.from != tb.from || ta.to != tb.to) {
            return false;
        }
    }
    return true;
}

} // namespace trajex
