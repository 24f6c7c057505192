#ifndef TRAJEX_DATABASE_HPP
#define TRAJEX_DATABASE_HPP

#include <map>
#include <vector>

#include "trajex/ast.hpp"

namespace trajex {

using FactArgs = std::vector<GroundTerm>;

/// Branch-local fact store with set semantics. Facts are grouped by
/// (predicate, STI); within a group they are kept sorted, so iteration
/// order is deterministic (lexicographic over argument terms). Facts of
/// non-time-indexed predicates live at STI 0.
class Database {
  public:
    using StiMap = std::map<int, std::vector<FactArgs>>;

    explicit Database(const Program &prog)
        : syms_(&prog.symbols), store_(prog.preds.size()) {}

    /// Inserts a fact; returns false if it was already present.
    bool insert(PredId pred, int sti, const FactArgs &args) {
        auto &bucket = store_[pred][sti];
        auto it = lowerBound(bucket, args);
        if (it != bucket.end() && *it == args) {
            return false;
        }
        bucket.insert(it, args);
        ++count_;
        return true;
    }

    bool contains(PredId pred, int sti, const FactArgs &args) const {
        auto bit = store_[pred].find(sti);
        if (bit == store_[pred].end()) {
            return false;
        }
        auto it = lowerBound(bit->second, args);
        return it != bit->second.end() && *it == args;
    }

    /// Removes a fact (used by the backtracking trail). The fact must exist.
    void erase(PredId pred, int sti, const FactArgs &args) {
        auto bit = store_[pred].find(sti);
        auto it = lowerBound(bit->second, args);
        bit->second.erase(it);
        --count_;
    }

    const StiMap &extension(PredId pred) const { return store_[pred]; }

    std::size_t size() const { return count_; }
    std::size_t predCount() const { return store_.size(); }

  private:
    std::vector<FactArgs>::const_iterator lowerBound(const std::vector<FactArgs> &bucket,
                                                     const FactArgs &args) const {
        return std::lower_bound(
            bucket.begin(), bucket.end(), args,
            [this](const FactArgs &a, const FactArgs &b) { return compareGroundTuple(a, b, *syms_) < 0; });
    }
    std::vector<FactArgs>::iterator lowerBound(std::vector<FactArgs> &bucket, const FactArgs &args) {
        return std::lower_bound(
            bucket.begin(), bucket.end(), args,
            [this](const FactArgs &a, const FactArgs &b) { return compareGroundTuple(a, b, *syms_) < 0; });
    }

    const SymbolTable *syms_;
    std::vector<StiMap> store_;
    std::size_t count_ = 0;
};

} // namespace trajex

#endif
