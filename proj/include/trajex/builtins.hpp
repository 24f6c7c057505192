#ifndef TRAJEX_BUILTINS_HPP
#define TRAJEX_BUILTINS_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "trajex/ast.hpp"

namespace trajex {

/// Raised when a builtin cannot be evaluated (division by zero, non-numeric
/// input). The engine turns this into an aborted branch with a diagnostic.
class BuiltinError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct BuiltinDef {
    const char *name;
    int arity;
    GroundTerm (*fn)(const std::vector<GroundTerm> &);
};

/// Returns the registered builtin with the given name, or nullptr.
/// The table is fixed: add, sub, mul, div, minOf, maxOf, ifEq,
/// eq, geq, gt, leq, lt, calculateNewPrice.
const BuiltinDef *findBuiltin(const std::string &name);

/// Price adjustment used by the producer-consumer model: move myPrice
/// towards otherPrice by gamma weighted by the unsold market share.
/// share = mySales/totalSales, or defaultShare when totalSales is zero.
Rational calculateNewPrice(const Rational &mySales, const Rational &totalSales,
                           const Rational &otherPrice, const Rational &myPrice,
                           const Rational &gamma, const Rational &defaultShare);

} // namespace trajex

#endif
