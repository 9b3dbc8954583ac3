#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace matchbench {

// Raised when a Rational would leave 64-bit range; callers fall back to
// floating point.
struct RationalOverflow : std::overflow_error {
    RationalOverflow() : std::overflow_error("rational overflow") {}
};

/**
 * Exact fraction on int64 with gcd normalization and overflow detection.
 * Used for dichotomous expectations, whose denominators are products of
 * small set sizes; beyond 64-bit range the oracle switches to doubles.
 * Intermediates are reduced in 128-bit before the range check.
 */
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t value) : num_(value), den_(1) {} // NOLINT(implicit)
    Rational(std::int64_t num, std::int64_t den) {
        if (den == 0) throw std::invalid_argument("rational with zero denominator");
        *this = reduce(num, den);
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    Rational operator+(const Rational& o) const {
        return reduce(mul(num_, o.den_) + mul(o.num_, den_), mul(den_, o.den_));
    }
    Rational operator-(const Rational& o) const {
        return reduce(mul(num_, o.den_) - mul(o.num_, den_), mul(den_, o.den_));
    }
    Rational operator*(const Rational& o) const {
        return reduce(mul(num_, o.num_), mul(den_, o.den_));
    }
    Rational operator/(const Rational& o) const {
        if (o.num_ == 0) throw std::invalid_argument("rational division by zero");
        return reduce(mul(num_, o.den_), mul(den_, o.num_));
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }

    bool operator==(const Rational& o) const {
        return num_ == o.num_ && den_ == o.den_;
    }
    bool operator<(const Rational& o) const {
        return mul(num_, o.den_) < mul(o.num_, den_);
    }
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator<=(const Rational& o) const { return !(o < *this); }
    bool operator>=(const Rational& o) const { return !(*this < o); }

private:
    static __int128 mul(std::int64_t a, std::int64_t b) {
        return static_cast<__int128>(a) * static_cast<__int128>(b);
    }
    static unsigned __int128 uabs(__int128 v) {
        return v < 0 ? static_cast<unsigned __int128>(-v)
                     : static_cast<unsigned __int128>(v);
    }
    static unsigned __int128 gcd128(unsigned __int128 a, unsigned __int128 b) {
        while (b != 0) {
            const unsigned __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }
    static Rational reduce(__int128 num, __int128 den) {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        if (num == 0) {
            Rational r;
            return r;
        }
        const unsigned __int128 g = gcd128(uabs(num), uabs(den));
        num /= static_cast<__int128>(g);
        den /= static_cast<__int128>(g);
        if (num > INT64_MAX || num < INT64_MIN || den > INT64_MAX) {
            throw RationalOverflow();
        }
        Rational r;
        r.num_ = static_cast<std::int64_t>(num);
        r.den_ = static_cast<std::int64_t>(den);
        return r;
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

} // namespace matchbench
