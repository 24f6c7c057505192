#ifndef TRAJEX_AST_HPP
#define TRAJEX_AST_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "trajex/rational.hpp"

namespace trajex {

using SymbolId = std::uint32_t;
using PredId = std::uint32_t;
using VarId = std::uint32_t;

inline constexpr std::uint32_t kNoVar = static_cast<std::uint32_t>(-1);

/// Interning table for constant symbols (sort instances). Ordering of
/// symbols is lexicographic by name; ranks are rebuilt lazily so that
/// comparisons during evaluation are a single array lookup.
class SymbolTable {
  public:
    SymbolId intern(const std::string &name) {
        auto it = index_.find(name);
        if (it != index_.end()) {
            return it->second;
        }
        SymbolId id = static_cast<SymbolId>(names_.size());
        names_.push_back(name);
        index_.emplace(name, id);
        ranksDirty_ = true;
        return id;
    }
    std::optional<SymbolId> lookup(const std::string &name) const {
        auto it = index_.find(name);
        if (it == index_.end()) {
            return std::nullopt;
        }
        return it->second;
    }
    const std::string &name(SymbolId id) const { return names_[id]; }
    std::size_t size() const { return names_.size(); }

    /// Lexicographic rank of a symbol among all interned symbols.
    std::uint32_t rank(SymbolId id) const {
        if (ranksDirty_) {
            rebuildRanks();
        }
        return ranks_[id];
    }

  private:
    void rebuildRanks() const;

    std::vector<std::string> names_;
    std::unordered_map<std::string, SymbolId> index_;
    mutable std::vector<std::uint32_t> ranks_;
    mutable bool ranksDirty_ = false;
};

/// A ground value: exact rational or interned symbol. Numbers order before
/// symbols; symbols order lexicographically by name.
struct GroundTerm {
    enum class Kind : std::uint8_t { Num, Sym };
    Kind kind = Kind::Num;
    Rational num;
    SymbolId sym = 0;

    static GroundTerm number(Rational r) {
        GroundTerm t;
        t.kind = Kind::Num;
        t.num = std::move(r);
        return t;
    }
    static GroundTerm symbol(SymbolId s) {
        GroundTerm t;
        t.kind = Kind::Sym;
        t.sym = s;
        return t;
    }

    bool operator==(const GroundTerm &o) const {
        if (kind != o.kind) {
            return false;
        }
        return kind == Kind::Num ? num == o.num : sym == o.sym;
    }
    bool operator!=(const GroundTerm &o) const { return !(*this == o); }
};

inline int compareGround(const GroundTerm &a, const GroundTerm &b, const SymbolTable &syms) {
    if (a.kind != b.kind) {
        return a.kind == GroundTerm::Kind::Num ? -1 : 1;
    }
    if (a.kind == GroundTerm::Kind::Num) {
        if (a.num < b.num) {
            return -1;
        }
        return a.num == b.num ? 0 : 1;
    }
    std::uint32_t ra = syms.rank(a.sym);
    std::uint32_t rb = syms.rank(b.sym);
    return ra < rb ? -1 : ra == rb ? 0 : 1;
}

int compareGroundTuple(const std::vector<GroundTerm> &a, const std::vector<GroundTerm> &b,
                       const SymbolTable &syms);

/// Pattern argument: constant or rule variable.
struct Term {
    enum class Kind : std::uint8_t { Const, Var };
    Kind kind = Kind::Const;
    GroundTerm constant;
    VarId var = kNoVar;

    static Term mkConst(GroundTerm g) {
        Term t;
        t.kind = Kind::Const;
        t.constant = std::move(g);
        return t;
    }
    static Term mkVar(VarId v) {
        Term t;
        t.kind = Kind::Var;
        t.var = v;
        return t;
    }
    bool operator==(const Term &o) const {
        if (kind != o.kind) {
            return false;
        }
        return kind == Kind::Const ? constant == o.constant : var == o.var;
    }
};

/// The time slot of an atom. Time is a distinguished final argument of
/// time-indexed predicates and is stored apart from the ordinary argument
/// list; offsets other than +1 do not exist in the language.
struct TimeRef {
    enum class Kind : std::uint8_t { None, Var, VarPlusOne, Const };
    Kind kind = Kind::None;
    int value = 0; // Const

    bool operator==(const TimeRef &o) const { return kind == o.kind && (kind != Kind::Const || value == o.value); }
};

struct SourcePos {
    int line = 0;
    int col = 0;
};

struct Atom {
    PredId pred = 0;
    std::vector<Term> args; // excludes the time argument
    TimeRef time;
    SourcePos pos;

    bool operator==(const Atom &o) const { return pred == o.pred && args == o.args && time == o.time; }
};

enum class AggOp : std::uint8_t { Sum, Min, Max, Count };

const char *aggOpName(AggOp op);

struct Literal {
    enum class Kind : std::uint8_t { Positive, Negated, Choice, Builtin, Aggregate };
    Kind kind = Kind::Positive;
    SourcePos pos;

    // Positive / Negated, and the pattern of a from-form choice.
    Atom atom;

    // Choice
    enum class ChoiceSrc : std::uint8_t { FromSort, FromPattern };
    ChoiceSrc choiceSrc = ChoiceSrc::FromSort;
    VarId choiceVar = kNoVar;
    std::uint32_t choiceSort = 0;    // index into Program::sorts (FromSort)
    std::vector<Term> exceptTerms;   // FromSort

    // Builtin
    std::string fnName;
    std::vector<Term> inputs;
    VarId outVar = kNoVar;

    // Aggregate
    AggOp aggOp = AggOp::Sum;
    VarId aggOut = kNoVar;
    VarId aggValue = kNoVar;         // variable aggregated over, local to the patterns
    std::vector<Atom> aggPatterns;

    bool structurallyEquals(const Literal &o) const;
};

struct Rule {
    std::string id;
    std::vector<std::string> varNames;
    std::optional<VarId> timeVar;
    std::vector<Literal> body;
    std::vector<Atom> head;
    bool headIsFalse = false;
    std::vector<std::string> splitDims; // "time" and/or sort names; empty = unspecified
    SourcePos pos;
};

struct SortDecl {
    std::string name;
    std::vector<std::string> instances;
    std::vector<SymbolId> instanceIds;
};

struct ParamDecl {
    std::string name;
    Rational value;
};

/// Argument sort of a predicate position: a number, or a declared sort
/// (index into Program::sorts).
struct ArgSort {
    enum class Kind : std::uint8_t { Number, Sort };
    Kind kind = Kind::Number;
    std::uint32_t sort = 0;

    bool operator==(const ArgSort &o) const { return kind == o.kind && (kind != Kind::Sort || sort == o.sort); }
};

struct PredDecl {
    std::string name;
    std::vector<ArgSort> argSorts; // excludes the time argument
    bool timeIndexed = false;
    bool implicit = false; // auto-declared (sort membership, sti); not printed
};

struct InitFact {
    PredId pred = 0;
    std::vector<GroundTerm> args; // excludes time
    int sti = 0;                  // 0 for non-time-indexed predicates
    bool implicit = false;
    SourcePos pos;
};

struct ObservableTermExpr {
    AggOp op = AggOp::Max;
    PredId pred = 0;
    int argPos = 0; // 1-based position among the non-time arguments
};

struct ObservableDecl {
    std::string name;
    ObservableTermExpr first;
    std::optional<ObservableTermExpr> minus; // value = first - minus
};

enum class ChainKind : std::uint8_t {
    StrictlyDecreasing,
    StrictlyIncreasing,
    NonIncreasing,
    NonDecreasing,
};

const char *chainKindName(ChainKind k);

struct TheoremDecl {
    std::string name;
    std::string observable;
    ChainKind chain = ChainKind::StrictlyDecreasing;
    int from = 1;
    int to = 1;
};

/// Name of the implicit clock predicate seeded by the engine at the start
/// of each simulation time instant.
inline constexpr const char *kClockPred = "sti";

struct Program {
    SymbolTable symbols;
    std::vector<SortDecl> sorts;
    std::vector<ParamDecl> params;
    std::vector<PredDecl> preds;
    std::vector<InitFact> inits;
    std::vector<Rule> rules;
    std::vector<ObservableDecl> observables;
    std::vector<TheoremDecl> theorems;
    int horizon = 1;

    std::optional<PredId> findPred(const std::string &name) const {
        for (PredId i = 0; i < preds.size(); ++i) {
            if (preds[i].name == name) {
                return i;
            }
        }
        return std::nullopt;
    }
    std::optional<std::uint32_t> findSort(const std::string &name) const {
        for (std::uint32_t i = 0; i < sorts.size(); ++i) {
            if (sorts[i].name == name) {
                return i;
            }
        }
        return std::nullopt;
    }
    std::optional<std::uint32_t> findRule(const std::string &id) const {
        for (std::uint32_t i = 0; i < rules.size(); ++i) {
            if (rules[i].id == id) {
                return i;
            }
        }
        return std::nullopt;
    }
    const ObservableDecl *findObservable(const std::string &name) const {
        for (const auto &o : observables) {
            if (o.name == name) {
                return &o;
            }
        }
        return nullptr;
    }
    const TheoremDecl *findTheorem(const std::string &name) const {
        for (const auto &t : theorems) {
            if (t.name == name) {
                return &t;
            }
        }
        return nullptr;
    }

    bool hasTimeIndexedPred() const {
        for (const auto &p : preds) {
            if (p.timeIndexed) {
                return true;
            }
        }
        return false;
    }

    std::string groundToString(const GroundTerm &g) const {
        return g.kind == GroundTerm::Kind::Num ? g.num.toString() : symbols.name(g.sym);
    }
};

/// Structural equality ignoring source positions; used by the round-trip
/// property of the formatter.
bool structurallyEqual(const Program &a, const Program &b);

} // namespace trajex

#endif
