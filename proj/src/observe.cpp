#include "trajex/observe.hpp"

#include "trajex/specialize.hpp"

namespace trajex {

namespace {

std::optional<Rational> evalSide(const ModelView &view, const Database &db,
                                 const ObservableTermExpr &side, int sti) {
    const Program &generic = *view.generic;
    const PredDecl &decl = generic.preds[side.pred];
    PredId pred = side.pred;
    int dbSti = decl.timeIndexed ? sti : 0;
    if (view.folded && decl.timeIndexed) {
        auto folded = view.runtime->findPred(foldedPredName(decl.name, sti));
        if (!folded) {
            return std::nullopt;
        }
        pred = *folded;
        dbSti = 0;
    }
    const auto &ext = db.extension(pred);
    auto bucket = ext.find(dbSti);
    std::size_t n = bucket == ext.end() ? 0 : bucket->second.size();
    if (side.op == AggOp::Count) {
        return Rational(static_cast<std::int64_t>(n));
    }
    if (side.op == AggOp::Sum) {
        Rational sum(0);
        if (bucket != ext.end()) {
            for (const auto &fact : bucket->second) {
                const GroundTerm &v = fact[side.argPos - 1];
                if (v.kind != GroundTerm::Kind::Num) {
                    return std::nullopt;
                }
                sum = sum + v.num;
            }
        }
        return sum;
    }
    if (n == 0) {
        return std::nullopt;
    }
    Rational best;
    bool first = true;
    for (const auto &fact : bucket->second) {
        const GroundTerm &v = fact[side.argPos - 1];
        if (v.kind != GroundTerm::Kind::Num) {
            return std::nullopt;
        }
        if (first) {
            best = v.num;
            first = false;
        } else if (side.op == AggOp::Min ? v.num < best : v.num > best) {
            best = v.num;
        }
    }
    return best;
}

} // namespace

std::optional<Rational> evalObservable(const ModelView &view, const Database &db,
                                       const ObservableDecl &obs, int sti) {
    auto first = evalSide(view, db, obs.first, sti);
    if (!first) {
        return std::nullopt;
    }
    if (!obs.minus) {
        return first;
    }
    auto second = evalSide(view, db, *obs.minus, sti);
    if (!second) {
        return std::nullopt;
    }
    return *first - *second;
}

bool checkTheorem(const std::vector<Rational> &values, const Theorem &theorem) {
    bool holds = true;
    for (int t = theorem.from; t < theorem.to && holds; ++t) {
        const Rational &a = values[t - 1];
        const Rational &b = values[t];
        switch (theorem.chain) {
        case ChainKind::StrictlyDecreasing: holds = b < a; break;
        case ChainKind::StrictlyIncreasing: holds = b > a; break;
        case ChainKind::NonIncreasing: holds = b <= a; break;
        case ChainKind::NonDecreasing: holds = b >= a; break;
        }
    }
    return theorem.negated ? !holds : holds;
}

} // namespace trajex
