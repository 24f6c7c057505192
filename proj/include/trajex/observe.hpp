#ifndef TRAJEX_OBSERVE_HPP
#define TRAJEX_OBSERVE_HPP

#include <optional>
#include <string>
#include <vector>

#include "trajex/ast.hpp"
#include "trajex/database.hpp"

namespace trajex {

/// How to read time-indexed data out of a leaf database. For specialized
/// programs the data lives in folded predicates (`price_t3` at STI 0), for
/// generic programs in the original predicate at the real STI.
struct ModelView {
    const Program *generic = nullptr; // declarations, observables, theorems
    const Program *runtime = nullptr; // program the database belongs to
    bool folded = false;

    static ModelView plain(const Program &prog) { return ModelView{&prog, &prog, false}; }
};

/// Evaluates one observable at one STI. nullopt when undefined (min/max
/// over an empty extension), which on a completed trajectory signals a
/// model bug.
std::optional<Rational> evalObservable(const ModelView &view, const Database &db,
                                       const ObservableDecl &obs, int sti);

/// A tendency over one trajectory: a comparison chain on an observable
/// sequence, optionally negated.
struct Theorem {
    std::string name;
    std::string observable;
    ChainKind chain = ChainKind::StrictlyDecreasing;
    int from = 1;
    int to = 1;
    bool negated = false;

    static Theorem fromDecl(const TheoremDecl &decl, bool negated = false) {
        return Theorem{decl.name, decl.observable, decl.chain, decl.from, decl.to, negated};
    }
};

/// Exact check of the comparison chain over values[from-1 .. to-1]
/// (1-based STIs). The sequence must cover the range.
bool checkTheorem(const std::vector<Rational> &values, const Theorem &theorem);

} // namespace trajex

#endif
