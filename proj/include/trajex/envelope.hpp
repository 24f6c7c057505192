#ifndef TRAJEX_ENVELOPE_HPP
#define TRAJEX_ENVELOPE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "trajex/rational.hpp"

namespace trajex {

/// Bounds and representatives of one observable at one STI, taken over the
/// completed trajectories seen so far. Representatives are arg-min/arg-max
/// with ties broken by the lexicographically smallest label.
struct ObservableStat {
    bool defined = false;
    Rational min;
    Rational max;
    std::vector<std::uint32_t> argmin;
    std::vector<std::uint32_t> argmax;

    void include(const Rational &value, const std::vector<std::uint32_t> &label);
    void mergeFrom(const ObservableStat &other);
    bool operator==(const ObservableStat &o) const {
        return defined == o.defined &&
               (!defined || (min == o.min && max == o.max && argmin == o.argmin && argmax == o.argmax));
    }
};

/// Per-STI, per-observable envelope; a commutative monoid under merge with
/// the empty envelope as identity.
struct Envelope {
    std::vector<std::string> observables;
    int horizon = 0;
    std::vector<std::vector<ObservableStat>> stats; // [observable][sti-1]

    static Envelope empty(const std::vector<std::string> &observables, int horizon);

    void include(std::size_t obsIdx, int sti, const Rational &value,
                 const std::vector<std::uint32_t> &label) {
        stats[obsIdx][sti - 1].include(value, label);
    }

    bool operator==(const Envelope &o) const {
        return observables == o.observables && horizon == o.horizon && stats == o.stats;
    }
};

/// Componentwise merge: min of mins, max of maxes, representatives
/// re-selected by the same tie rule. Shape mismatch throws.
Envelope envelopeMerge(const Envelope &a, const Envelope &b);

} // namespace trajex

#endif
