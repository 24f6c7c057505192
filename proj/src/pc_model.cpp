#include "trajex/pc_model.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "trajex/database.hpp"
#include "trajex/parser.hpp"
#include "trajex/validate.hpp"

namespace trajex::pc {

std::vector<Rational> defaultInitialPrices(int producers) {
    std::vector<Rational> prices;
    std::int64_t step = 4;
    std::int64_t value = 10;
    for (int i = 0; i < producers; ++i) {
        prices.emplace_back(value);
        value += step;
        step *= 2;
    }
    return prices;
}

namespace {

void checkParams(const PcParams &p, const std::vector<Rational> &prices) {
    if (p.producers < 2) {
        throw std::invalid_argument("at least two producers are required");
    }
    if (p.consumers < 1) {
        throw std::invalid_argument("at least one consumer is required");
    }
    if (p.horizon < 2) {
        throw std::invalid_argument("horizon must be at least 2 (one transition)");
    }
    if (!(p.gamma > Rational(0)) || !(p.gamma < Rational(1))) {
        throw std::invalid_argument("gamma must lie strictly between 0 and 1");
    }
    if (static_cast<int>(prices.size()) != p.producers) {
        throw std::invalid_argument("need exactly one initial price per producer");
    }
    std::set<Rational, std::less<>> distinct;
    for (const auto &price : prices) {
        if (!(price > Rational(0))) {
            throw std::invalid_argument("initial prices must be positive");
        }
        if (!distinct.insert(price).second) {
            throw std::invalid_argument("initial prices must be pairwise distinct");
        }
    }
    if (p.choiceTransitions < 0 || p.choiceTransitions > p.horizon - 1) {
        throw std::invalid_argument("choice-bearing transitions must lie in [0, horizon-1]");
    }
    if (p.baseDemand.sign() < 0 || p.productionPerDay.sign() < 0 || p.initialLevel.sign() < 0) {
        throw std::invalid_argument("demand, production and initial level must be non-negative");
    }
}

std::string producerName(int j) { return "p" + std::to_string(j + 1); }
std::string consumerName(int c) { return "c" + std::to_string(c + 1); }

} // namespace

PcModel buildModel(const PcParams &params) {
    std::vector<Rational> prices =
        params.initialPrices.empty() ? defaultInitialPrices(params.producers) : params.initialPrices;
    checkParams(params, prices);

    const int P = params.producers;
    const int C = params.consumers;
    const int T = params.horizon;
    std::ostringstream o;

    o << "# Producer-consumer market: consumers buy from the cheapest producer;\n"
         "# producers adjust prices towards a chosen competitor, weighted by\n"
         "# unsold market share; warehouses carry stock between days.\n";
    o << "sort producer { ";
    for (int j = 0; j < P; ++j) {
        o << (j ? ", " : "") << producerName(j);
    }
    o << " }\n";
    o << "sort consumer { ";
    for (int c = 0; c < C; ++c) {
        o << (c ? ", " : "") << consumerName(c);
    }
    o << " }\n\n";

    o << "param gamma = " << params.gamma.toString() << "\n";
    o << "param demandPerDay = " << params.baseDemand.toString() << "\n";
    o << "param productionPerDay = " << params.productionPerDay.toString() << "\n";
    o << "param defaultShare = " << Rational(1, P).toString() << "\n\n";

    o << "pred price(producer, number, time)\n"
         "pred demand(consumer, number, time)\n"
         "pred order(consumer, producer, number, time)\n"
         "pred totalOrder(producer, number, time)\n"
         "pred sales(producer, number, time)\n"
         "pred totalSales(number, time)\n"
         "pred level(producer, number, time)\n"
         "pred production(producer, number, time)\n"
         "pred chosenOther(producer, producer, time)\n"
         "pred canPick(producer, producer, time)\n"
         "pred transition(time)\n"
         "pred prodIndex(producer, number)\n"
         "pred isTrue(number)\n\n";

    o << "horizon " << T << "\n\n";

    o << "init isTrue(1)\n";
    for (int j = 0; j < P; ++j) {
        o << "init prodIndex(" << producerName(j) << ", " << j + 1 << ")\n";
    }
    for (int j = 0; j < P; ++j) {
        o << "init price(" << producerName(j) << ", " << prices[j].toString() << ", 1)\n";
    }
    for (int j = 0; j < P; ++j) {
        o << "init level(" << producerName(j) << ", " << params.initialLevel.toString() << ", 1)\n";
    }
    for (int t = 1; t <= T - 1; ++t) {
        o << "init transition(" << t << ")\n";
    }
    for (int t = 1; t <= T - 1; ++t) {
        if (t <= params.choiceTransitions) {
            for (int j = 0; j < P; ++j) {
                for (int k = 0; k < P; ++k) {
                    if (k != j) {
                        o << "init canPick(" << producerName(j) << ", " << producerName(k) << ", "
                          << t << ")\n";
                    }
                }
            }
        } else {
            for (int j = 0; j < P; ++j) {
                o << "init canPick(" << producerName(j) << ", " << producerName((j + 1) % P)
                  << ", " << t << ")\n";
            }
        }
    }
    o << "\n";

    o << "rule r_choice:\n"
         "    producer(J) and\n"
         "    sti(T) and\n"
         "    choose O from canPick(J, O, T)\n"
         "implies\n"
         "    chosenOther(J, O, T)\n"
         "split by time\n.\n\n";

    o << "rule r_demand_order:\n"
         "    consumer(C) and\n"
         "    producer(J) and\n"
         "    transition(T) and\n"
         "    agg MinPrice = min P in price(J2, P, T) and\n"
         "    agg MinIdx = min I in (price(J3, MinPrice, T), prodIndex(J3, I)) and\n"
         "    prodIndex(Cheapest, MinIdx) and\n"
         "    let Amount = ifEq(J, Cheapest, demandPerDay, 0)\n"
         "implies\n"
         "    demand(C, demandPerDay, T) and\n"
         "    order(C, J, Amount, T)\n"
         "split by time\n.\n\n";

    o << "rule r_total_orders:\n"
         "    producer(J) and\n"
         "    transition(T) and\n"
         "    agg Total = sum A in order(C, J, A, T)\n"
         "implies\n"
         "    totalOrder(J, Total, T)\n"
         "split by time\n.\n\n";

    o << "rule r_sale:\n"
         "    order(C, J, Ordered, T) and\n"
         "    level(J, Stock, T) and\n"
         "    totalOrder(J, Wanted, T) and\n"
         "    let Capacity = add(Stock, productionPerDay) and\n"
         "    let Sold = minOf(Wanted, Capacity)\n"
         "implies\n"
         "    sales(J, Sold, T)\n"
         "split by time, producer, consumer\n.\n\n";

    o << "rule r_total_sales:\n"
         "    transition(T) and\n"
         "    agg Total = sum S in sales(J, S, T)\n"
         "implies\n"
         "    totalSales(Total, T)\n"
         "split by time\n.\n\n";

    o << "rule r_price:\n"
         "    producer(J) and\n"
         "    transition(T) and\n"
         "    price(J, MyPrice, T) and\n"
         "    sales(J, MySales, T) and\n"
         "    totalSales(AllSales, T) and\n"
         "    chosenOther(J, Other, T) and\n"
         "    price(Other, OtherPrice, T) and\n"
         "    let NewPrice = calculateNewPrice(MySales, AllSales, OtherPrice, MyPrice, gamma, "
         "defaultShare)\n"
         "implies\n"
         "    price(J, NewPrice, T + 1)\n"
         "split by time\n.\n\n";

    o << "rule r_production_level:\n"
         "    producer(J) and\n"
         "    transition(T) and\n"
         "    level(J, Stock, T) and\n"
         "    sales(J, Sold, T) and\n"
         "    let Made = add(Stock, productionPerDay) and\n"
         "    let NextStock = sub(Made, Sold)\n"
         "implies\n"
         "    production(J, productionPerDay, T) and\n"
         "    level(J, NextStock, T + 1)\n"
         "split by time, producer\n.\n\n";

    // The tendency as a negative constraint: derive FALSE when the price
    // interval fails to shrink strictly somewhere in 1..horizon. On models
    // where the tendency is necessary this rule never fires.
    o << "rule r_check_theorem:\n";
    for (int t = 1; t <= T; ++t) {
        o << "    agg Hi" << t << " = max P in price(J, P, " << t << ") and\n";
        o << "    agg Lo" << t << " = min P in price(J, P, " << t << ") and\n";
        o << "    let W" << t << " = sub(Hi" << t << ", Lo" << t << ") and\n";
    }
    for (int t = 1; t <= T - 1; ++t) {
        o << "    let D" << t << " = sub(W" << t + 1 << ", W" << t << ") and\n";
    }
    std::string worst = "D1";
    for (int t = 2; t <= T - 1; ++t) {
        std::string next = "M" + std::to_string(t);
        o << "    let " << next << " = maxOf(" << worst << ", D" << t << ") and\n";
        worst = next;
    }
    o << "    let Bad = geq(" << worst << ", 0) and\n"
         "    isTrue(Bad)\n"
         "implies\n"
         "    false\n.\n\n";

    o << "observable interval = max(price[2]) - min(price[2])\n\n";
    o << "theorem decreasing_interval = interval strictly_decreasing from 1 to " << T << "\n";

    PcModel model;
    model.params = params;
    model.params.initialPrices = prices;
    model.text = o.str();
    model.program = parseProgram(model.text);
    ValidationReport report = validate(model.program);
    if (!report.ok()) {
        throw std::logic_error("generated model does not validate:\n" + report.summary());
    }
    return model;
}

std::vector<Rational> allocateOrders(const std::vector<Rational> &prices, int consumers,
                                     const Rational &baseDemand) {
    std::vector<Rational> orders(prices.size(), Rational(0));
    std::size_t cheapest = 0;
    for (std::size_t j = 1; j < prices.size(); ++j) {
        if (prices[j] < prices[cheapest]) {
            cheapest = j;
        }
    }
    orders[cheapest] = baseDemand * Rational(consumers);
    return orders;
}

Settlement settleSales(const std::vector<Rational> &totalOrders,
                       const std::vector<Rational> &levels, const Rational &productionPerDay) {
    Settlement s;
    s.totalSales = Rational(0);
    for (std::size_t j = 0; j < totalOrders.size(); ++j) {
        Rational capacity = levels[j] + productionPerDay;
        Rational sold = totalOrders[j] < capacity ? totalOrders[j] : capacity;
        s.sales.push_back(sold);
        s.totalSales = s.totalSales + sold;
        s.nextLevels.push_back(levels[j] + productionPerDay - sold);
    }
    return s;
}

Rational priceInterval(const std::vector<Rational> &prices) {
    if (prices.empty()) {
        throw std::invalid_argument("no prices");
    }
    Rational lo = prices[0];
    Rational hi = prices[0];
    for (const auto &p : prices) {
        if (p < lo) {
            lo = p;
        }
        if (p > hi) {
            hi = p;
        }
    }
    return hi - lo;
}

Rational priceInterval(const ModelView &view, const Database &db, int sti) {
    const Program &generic = *view.generic;
    auto pred = generic.findPred("price");
    if (!pred) {
        throw std::invalid_argument("model has no 'price' predicate");
    }
    ObservableDecl obs;
    obs.name = "interval";
    obs.first = ObservableTermExpr{AggOp::Max, *pred, 2};
    obs.minus = ObservableTermExpr{AggOp::Min, *pred, 2};
    auto v = evalObservable(view, db, obs, sti);
    if (!v) {
        throw std::invalid_argument("no price facts at STI " + std::to_string(sti));
    }
    return *v;
}

Theorem decreasingIntervalTheorem(int from, int to) {
    Theorem t;
    t.name = "decreasing_interval";
    t.observable = "interval";
    t.chain = ChainKind::StrictlyDecreasing;
    t.from = from;
    t.to = to;
    return t;
}

} // namespace trajex::pc
