#ifndef TRAJEX_RATIONAL_HPP
#define TRAJEX_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace trajex {

/// Exact rational over 64-bit integers, always in lowest terms with a
/// positive denominator. Overflow raises std::overflow_error rather than
/// wrapping; simulations that need wider numerators have a modelling
/// problem, not an arithmetic one.
class Rational {
  public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n) : num_(n), den_(1) {} // NOLINT: implicit by design
    Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool isInteger() const { return den_ == 1; }
    bool isZero() const { return num_ == 0; }
    int sign() const { return num_ < 0 ? -1 : num_ > 0 ? 1 : 0; }

    friend Rational operator+(const Rational &a, const Rational &b) {
        return Rational(checkedAdd(checkedMul(a.num_, b.den_), checkedMul(b.num_, a.den_)),
                        checkedMul(a.den_, b.den_));
    }
    friend Rational operator-(const Rational &a, const Rational &b) {
        return Rational(checkedSub(checkedMul(a.num_, b.den_), checkedMul(b.num_, a.den_)),
                        checkedMul(a.den_, b.den_));
    }
    friend Rational operator*(const Rational &a, const Rational &b) {
        return Rational(checkedMul(a.num_, b.num_), checkedMul(a.den_, b.den_));
    }
    friend Rational operator/(const Rational &a, const Rational &b) {
        if (b.num_ == 0) {
            throw std::domain_error("rational division by zero");
        }
        return Rational(checkedMul(a.num_, b.den_), checkedMul(a.den_, b.num_));
    }
    Rational operator-() const { return Rational(-num_, den_); }

    // Comparisons go through 128-bit cross products, so they never overflow.
    friend bool operator==(const Rational &a, const Rational &b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational &a, const Rational &b) { return !(a == b); }
    friend bool operator<(const Rational &a, const Rational &b) {
        return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
    }
    friend bool operator>(const Rational &a, const Rational &b) { return b < a; }
    friend bool operator<=(const Rational &a, const Rational &b) { return !(b < a); }
    friend bool operator>=(const Rational &a, const Rational &b) { return !(a < b); }

    /// Canonical rendering: "p/q" in lowest terms, "/q" omitted for integers.
    std::string toString() const {
        if (den_ == 1) {
            return std::to_string(num_);
        }
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Accepts "n" or "n/d" with an optional leading minus.
    static std::optional<Rational> parse(std::string_view text);

  private:
    void normalize() {
        if (den_ == 0) {
            throw std::domain_error("rational with zero denominator");
        }
        if (den_ < 0) {
            num_ = checkedNeg(num_);
            den_ = checkedNeg(den_);
        }
        std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0) {
            den_ = 1;
        }
    }

    static std::int64_t checkedAdd(std::int64_t a, std::int64_t b) {
        std::int64_t r = 0;
        if (__builtin_add_overflow(a, b, &r)) {
            throw std::overflow_error("rational overflow (+)");
        }
        return r;
    }
    static std::int64_t checkedSub(std::int64_t a, std::int64_t b) {
        std::int64_t r = 0;
        if (__builtin_sub_overflow(a, b, &r)) {
            throw std::overflow_error("rational overflow (-)");
        }
        return r;
    }
    static std::int64_t checkedMul(std::int64_t a, std::int64_t b) {
        std::int64_t r = 0;
        if (__builtin_mul_overflow(a, b, &r)) {
            throw std::overflow_error("rational overflow (*)");
        }
        return r;
    }
    static std::int64_t checkedNeg(std::int64_t a) { return checkedSub(0, a); }

    std::int64_t num_;
    std::int64_t den_;
};

inline std::optional<Rational> Rational::parse(std::string_view text) {
    if (text.empty()) {
        return std::nullopt;
    }
    auto parseInt = [](std::string_view s, std::int64_t &out) -> bool {
        if (s.empty()) {
            return false;
        }
        bool neg = false;
        std::size_t i = 0;
        if (s[0] == '-') {
            neg = true;
            i = 1;
            if (s.size() == 1) {
                return false;
            }
        }
        std::int64_t v = 0;
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') {
                return false;
            }
            if (__builtin_mul_overflow(v, static_cast<std::int64_t>(10), &v) ||
                __builtin_add_overflow(v, static_cast<std::int64_t>(s[i] - '0'), &v)) {
                return false;
            }
        }
        out = neg ? -v : v;
        return true;
    };
    std::size_t slash = text.find('/');
    std::int64_t n = 0;
    std::int64_t d = 1;
    if (slash == std::string_view::npos) {
        if (!parseInt(text, n)) {
            return std::nullopt;
        }
    } else {
        if (!parseInt(text.substr(0, slash), n) || !parseInt(text.substr(slash + 1), d) || d == 0) {
            return std::nullopt;
        }
    }
    return Rational(n, d);
}

} // namespace trajex

#endif
