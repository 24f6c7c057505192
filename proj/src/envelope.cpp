#include "trajex/envelope.hpp"

#include <stdexcept>

namespace trajex {

void ObservableStat::include(const Rational &value, const std::vector<std::uint32_t> &label) {
    if (!defined) {
        defined = true;
        min = max = value;
        argmin = argmax = label;
        return;
    }
    if (value < min || (value == min && label < argmin)) {
        min = value;
        argmin = label;
    }
    if (value > max || (value == max && label < argmax)) {
        max = value;
        argmax = label;
    }
}

void ObservableStat::mergeFrom(const ObservableStat &other) {
    if (!other.defined) {
        return;
    }
    if (!defined) {
        *this = other;
        return;
    }
    if (other.min < min || (other.min == min && other.argmin < argmin)) {
        min = other.min;
        argmin = other.argmin;
    }
    if (other.max > max || (other.max == max && other.argmax < argmax)) {
        max = other.max;
        argmax = other.argmax;
    }
}

Envelope Envelope::empty(const std::vector<std::string> &observables, int horizon) {
    Envelope e;
    e.observables = observables;
    e.horizon = horizon;
    e.stats.assign(observables.size(), std::vector<ObservableStat>(horizon));
    return e;
}

Envelope envelopeMerge(const Envelope &a, const Envelope &b) {
    if (a.observables != b.observables || a.horizon != b.horizon) {
        throw std::invalid_argument("envelope shape mismatch");
    }
    Envelope out = a;
    for (std::size_t o = 0; o < out.stats.size(); ++o) {
        for (std::size_t t = 0; t < out.stats[o].size(); ++t) {
            out.stats[o][t].mergeFrom(b.stats[o][t]);
        }
    }
    return out;
}

} // namespace trajex
