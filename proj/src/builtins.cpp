#include "trajex/builtins.hpp"

#include <array>

namespace trajex {

namespace {

const Rational &asNum(const GroundTerm &t, const char *fn) {
    if (t.kind != GroundTerm::Kind::Num) {
        throw BuiltinError(std::string(fn) + " expects numeric arguments");
    }
    return t.num;
}

GroundTerm num(Rational r) { return GroundTerm::number(std::move(r)); }
GroundTerm boolNum(bool b) { return GroundTerm::number(Rational(b ? 1 : 0)); }

GroundTerm bAdd(const std::vector<GroundTerm> &a) { return num(asNum(a[0], "add") + asNum(a[1], "add")); }
GroundTerm bSub(const std::vector<GroundTerm> &a) { return num(asNum(a[0], "sub") - asNum(a[1], "sub")); }
GroundTerm bMul(const std::vector<GroundTerm> &a) { return num(asNum(a[0], "mul") * asNum(a[1], "mul")); }
GroundTerm bDiv(const std::vector<GroundTerm> &a) {
    const Rational &d = asNum(a[1], "div");
    if (d.isZero()) {
        throw BuiltinError("div: division by zero");
    }
    return num(asNum(a[0], "div") / d);
}
GroundTerm bMinOf(const std::vector<GroundTerm> &a) {
    const Rational &x = asNum(a[0], "minOf");
    const Rational &y = asNum(a[1], "minOf");
    return num(x < y ? x : y);
}
GroundTerm bMaxOf(const std::vector<GroundTerm> &a) {
    const Rational &x = asNum(a[0], "maxOf");
    const Rational &y = asNum(a[1], "maxOf");
    return num(x > y ? x : y);
}
GroundTerm bIfEq(const std::vector<GroundTerm> &a) { return a[0] == a[1] ? a[2] : a[3]; }
GroundTerm bEq(const std::vector<GroundTerm> &a) { return boolNum(asNum(a[0], "eq") == asNum(a[1], "eq")); }
GroundTerm bGeq(const std::vector<GroundTerm> &a) { return boolNum(asNum(a[0], "geq") >= asNum(a[1], "geq")); }
GroundTerm bGt(const std::vector<GroundTerm> &a) { return boolNum(asNum(a[0], "gt") > asNum(a[1], "gt")); }
GroundTerm bLeq(const std::vector<GroundTerm> &a) { return boolNum(asNum(a[0], "leq") <= asNum(a[1], "leq")); }
GroundTerm bLt(const std::vector<GroundTerm> &a) { return boolNum(asNum(a[0], "lt") < asNum(a[1], "lt")); }

GroundTerm bCalcNewPrice(const std::vector<GroundTerm> &a) {
    const char *fn = "calculateNewPrice";
    return num(calculateNewPrice(asNum(a[0], fn), asNum(a[1], fn), asNum(a[2], fn),
                                 asNum(a[3], fn), asNum(a[4], fn), asNum(a[5], fn)));
}

constexpr std::array<BuiltinDef, 13> kBuiltins = {{
    {"add", 2, bAdd},
    {"sub", 2, bSub},
    {"mul", 2, bMul},
    {"div", 2, bDiv},
    {"minOf", 2, bMinOf},
    {"maxOf", 2, bMaxOf},
    {"ifEq", 4, bIfEq},
    {"eq", 2, bEq},
    {"geq", 2, bGeq},
    {"gt", 2, bGt},
    {"leq", 2, bLeq},
    {"lt", 2, bLt},
    {"calculateNewPrice", 6, bCalcNewPrice},
}};

} // namespace

const BuiltinDef *findBuiltin(const std::string &name) {
    for (const auto &b : kBuiltins) {
        if (name == b.name) {
            return &b;
        }
    }
    return nullptr;
}

Rational calculateNewPrice(const Rational &mySales, const Rational &totalSales,
                           const Rational &otherPrice, const Rational &myPrice,
                           const Rational &gamma, const Rational &defaultShare) {
    Rational share = totalSales.isZero() ? defaultShare : mySales / totalSales;
    return myPrice + (Rational(1) - share) * gamma * (otherPrice - myPrice);
}

} // namespace trajex
