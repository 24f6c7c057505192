#ifndef TRAJEX_PC_MODEL_HPP
#define TRAJEX_PC_MODEL_HPP

#include <string>
#include <vector>

#include "trajex/ast.hpp"
#include "trajex/builtins.hpp"
#include "trajex/observe.hpp"

namespace trajex::pc {

/// Configuration of the producer-consumer market model.
///
/// gamma must stay away from 1/2: with winner-take-all allocation the two
/// non-winning producers always adjust with coefficient gamma, so on the
/// branch where they pick each other their price gap multiplies by
/// |1 - 2*gamma| per step — at exactly 1/2 they collide and the price
/// interval freezes. The defaults below are verified tie-free over all
/// trajectories by the exhaustive suite.
struct PcParams {
    int producers = 3;
    int consumers = 3;
    int horizon = 7; // STIs; transitions = horizon - 1
    Rational gamma = Rational(3, 8);
    std::vector<Rational> initialPrices; // empty: defaultInitialPrices(producers)
    Rational baseDemand = Rational(1);
    Rational productionPerDay = Rational(2);
    Rational initialLevel = Rational(2);
    int choiceTransitions = 5; // leading transitions with free choices
};

/// Pairwise-distinct positive defaults: 10, 14, 22, 38, ...
std::vector<Rational> defaultInitialPrices(int producers);

struct PcModel {
    PcParams params;
    std::string text;
    Program program;
};

/// Generates the model as rule text (with split directives attached per
/// rule) and parses it. Throws std::invalid_argument on bad parameters.
PcModel buildModel(const PcParams &params = {});

// Pure market arithmetic, shared vocabulary with the rules. Every consumer
// demands baseDemand and orders it entirely from the cheapest producer
// (ties: smallest index); producers sell up to stock + production.
std::vector<Rational> allocateOrders(const std::vector<Rational> &prices, int consumers,
                                     const Rational &baseDemand);

struct Settlement {
    std::vector<Rational> sales;
    Rational totalSales;
    std::vector<Rational> nextLevels;
};

Settlement settleSales(const std::vector<Rational> &totalOrders,
                       const std::vector<Rational> &levels, const Rational &productionPerDay);

/// max - min over a price vector.
Rational priceInterval(const std::vector<Rational> &prices);

/// The price interval read from a leaf database at one STI.
Rational priceInterval(const ModelView &view, const Database &db, int sti);

/// The strictly-decreasing price-interval tendency over [from, to].
Theorem decreasingIntervalTheorem(int from, int to);

} // namespace trajex::pc

#endif
