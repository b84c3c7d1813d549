#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "qmc/error.hpp"

namespace qmc {

using Rational = mpq_class;
using Integer = mpz_class;

// Rational extended with +inf and -inf. 0 * inf is 0.
class ExtRat {
public:
    enum class Kind : unsigned char { MinusInf, Finite, PlusInf };

    ExtRat() = default;
    ExtRat(long v) : value_(v) {}
    ExtRat(int v) : value_(v) {}
    ExtRat(const Rational& v);
    ExtRat(const Integer& v) : value_(v) {}

    static ExtRat plus_inf();
    static ExtRat minus_inf();
    static ExtRat fraction(long num, long den);

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::Finite; }
    bool is_plus_inf() const { return kind_ == Kind::PlusInf; }
    bool is_minus_inf() const { return kind_ == Kind::MinusInf; }
    int sign() const;

    // Throws for infinite values.
    const Rational& finite() const;

    ExtRat operator-() const;
    ExtRat& operator+=(const ExtRat& o) { return *this = *this + o; }
    ExtRat& operator*=(const ExtRat& o) { return *this = *this * o; }

    friend ExtRat operator+(const ExtRat& a, const ExtRat& b);
    friend ExtRat operator-(const ExtRat& a, const ExtRat& b) { return a + (-b); }
    friend ExtRat operator*(const ExtRat& a, const ExtRat& b);
    friend ExtRat operator/(const ExtRat& a, const Rational& q);
    friend bool operator==(const ExtRat& a, const ExtRat& b);
    friend std::strong_ordering operator<=>(const ExtRat& a, const ExtRat& b);

    std::string str() const;
    static ExtRat parse(std::string_view text);

    std::size_t hash() const;

private:
    Kind kind_ = Kind::Finite;
    Rational value_;
};

enum class ArithOp { Add, Mul };
ExtRat ext_arith(const ExtRat& a, const ExtRat& b, ArithOp op);

const ExtRat& ext_min(const ExtRat& a, const ExtRat& b);
const ExtRat& ext_max(const ExtRat& a, const ExtRat& b);

Rational parse_rational(std::string_view text);
Integer floor_of(const Rational& r);
Integer ceil_of(const Rational& r);
Integer lcm_of(const Integer& a, const Integer& b);

struct Bound {
    ExtRat value;
    bool closed = true;

    friend bool operator==(const Bound&, const Bound&) = default;
};

class Interval {
public:
    Interval(Bound lo, Bound hi);

    static Interval closed(const ExtRat& a, const ExtRat& b) { return {{a, true}, {b, true}}; }
    static Interval point(const ExtRat& a) { return closed(a, a); }
    static Interval everything();
    static Interval at_least(const ExtRat& a, bool closed_lo = true);

    const Bound& lo() const { return lo_; }
    const Bound& hi() const { return hi_; }

    bool contains(const ExtRat& x) const;
    bool is_point() const { return lo_.value == hi_.value; }
    bool is_everything() const { return lo_.value.is_minus_inf() && hi_.value.is_plus_inf(); }
    bool bounded_above() const { return hi_.value.is_finite(); }

    Interval scale(const ExtRat& q) const;
    Interval shift(const ExtRat& c) const;

    std::string str() const;
    static Interval parse(std::string_view text);

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    Bound lo_;
    Bound hi_;
};

Interval scale_interval(const Interval& i, const ExtRat& q);
bool interval_contains(const Interval& i, const ExtRat& x);

}  // namespace qmc
