#include "qmc/numerics.hpp"

#include <cctype>
#include <functional>

namespace qmc {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::Parse: return "ParseError";
        case Errc::IndeterminateForm: return "IndeterminateForm";
        case Errc::EmptyInterval: return "EmptyInterval";
        case Errc::ZeroScale: return "ZeroScale";
        case Errc::Arity: return "ArityMismatch";
        case Errc::UnknownLocation: return "UnknownLocation";
        case Errc::TimeOutOfInterval: return "TimeOutOfInterval";
        case Errc::NotAllowed: return "NotAllowed";
        case Errc::NotEnumerable: return "NotEnumerable";
        case Errc::NotInitialised: return "NotInitialised";
        case Errc::OpenFormula: return "OpenFormula";
        case Errc::UnboundFixVar: return "UnboundFixVar";
        case Errc::NegativeFixVar: return "NegativeFixVar";
        case Errc::ZeroRateDivision: return "ZeroRateDivision";
        case Errc::NotFlat: return "NotFlat";
        case Errc::NonIntegerData: return "NonIntegerData";
        case Errc::NotCounterReset: return "NotCounterReset";
        case Errc::CounterOutOfRange: return "CounterOutOfRange";
        case Errc::PreconditionViolated: return "PreconditionViolated";
        case Errc::NotEquivalent: return "NotEquivalent";
        case Errc::PlayNotTerminated: return "PlayNotTerminated";
        case Errc::Limit: return "LimitExceeded";
    }
    return "Error";
}

ExtRat::ExtRat(const Rational& v) : value_(v) { value_.canonicalize(); }

ExtRat ExtRat::plus_inf() {
    ExtRat r;
    r.kind_ = Kind::PlusInf;
    return r;
}

ExtRat ExtRat::minus_inf() {
    ExtRat r;
    r.kind_ = Kind::MinusInf;
    return r;
}

ExtRat ExtRat::fraction(long num, long den) {
    if (den == 0) throw Error(Errc::Parse, "zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return ExtRat(q);
}

int ExtRat::sign() const {
    switch (kind_) {
        case Kind::MinusInf: return -1;
        case Kind::PlusInf: return 1;
        case Kind::Finite: return sgn(value_);
    }
    return 0;
}

const Rational& ExtRat::finite() const {
    if (kind_ != Kind::Finite) throw Error(Errc::PreconditionViolated, "finite value expected, got " + str());
    return value_;
}

ExtRat ExtRat::operator-() const {
    switch (kind_) {
        case Kind::MinusInf: return plus_inf();
        case Kind::PlusInf: return minus_inf();
        case Kind::Finite: return ExtRat(Rational(-value_));
    }
    return {};
}

ExtRat operator+(const ExtRat& a, const ExtRat& b) {
    if (a.is_finite() && b.is_finite()) return ExtRat(Rational(a.value_ + b.value_));
    if (a.is_finite()) return b;
    if (b.is_finite()) return a;
    if (a.kind_ != b.kind_) throw Error(Errc::IndeterminateForm, "inf + (-inf)");
    return a;
}

ExtRat operator*(const ExtRat& a, const ExtRat& b) {
    if (a.is_finite() && b.is_finite()) return ExtRat(Rational(a.value_ * b.value_));
    int s = a.sign() * b.sign();
    if (s == 0) return ExtRat(0);
    return s > 0 ? ExtRat::plus_inf() : ExtRat::minus_inf();
}

ExtRat operator/(const ExtRat& a, const Rational& q) {
    if (sgn(q) == 0) throw Error(Errc::ZeroScale, "division by zero");
    Rational inv = 1 / q;
    return a * ExtRat(inv);
}

bool operator==(const ExtRat& a, const ExtRat& b) {
    if (a.kind_ != b.kind_) return false;
    return !a.is_finite() || a.value_ == b.value_;
}

std::strong_ordering operator<=>(const ExtRat& a, const ExtRat& b) {
    if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
    if (!a.is_finite()) return std::strong_ordering::equal;
    return cmp(a.value_, b.value_) <=> 0;
}

std::string ExtRat::str() const {
    switch (kind_) {
        case Kind::MinusInf: return "-inf";
        case Kind::PlusInf: return "inf";
        case Kind::Finite: return value_.get_str();
    }
    return {};
}

std::size_t ExtRat::hash() const {
    if (!is_finite()) return kind_ == Kind::PlusInf ? 0x9e3779b9u : 0x7f4a7c15u;
    std::size_t h = std::hash<std::string>{}(value_.get_str(16));
    return h;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool valid_integer(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = trim(text);
    auto slash = s.find('/');
    std::string_view num = s.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
    if (!valid_integer(num) || !valid_integer(den) || den.front() == '-' || den.front() == '+')
        throw Error(Errc::Parse, "bad rational literal '" + std::string(text) + "'");
    std::string n(num);
    if (n.front() == '+') n.erase(0, 1);
    Integer d{std::string(den)};
    if (d == 0) throw Error(Errc::Parse, "zero denominator in '" + std::string(text) + "'");
    Rational q(Integer(n), d);
    q.canonicalize();
    return q;
}

ExtRat ExtRat::parse(std::string_view text) {
    std::string_view s = trim(text);
    if (s == "inf" || s == "+inf") return plus_inf();
    if (s == "-inf") return minus_inf();
    return ExtRat(parse_rational(s));
}

ExtRat ext_arith(const ExtRat& a, const ExtRat& b, ArithOp op) {
    return op == ArithOp::Add ? a + b : a * b;
}

const ExtRat& ext_min(const ExtRat& a, const ExtRat& b) { return b < a ? b : a; }
const ExtRat& ext_max(const ExtRat& a, const ExtRat& b) { return a < b ? b : a; }

Integer floor_of(const Rational& r) {
    Integer f;
    mpz_fdiv_q(f.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return f;
}

Integer ceil_of(const Rational& r) {
    Integer c;
    mpz_cdiv_q(c.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return c;
}

Integer lcm_of(const Integer& a, const Integer& b) {
    Integer l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

Interval::Interval(Bound lo, Bound hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if ((!lo_.value.is_finite() && lo_.closed) || (!hi_.value.is_finite() && hi_.closed))
        throw Error(Errc::EmptyInterval, "infinite bound cannot be closed");
    auto c = lo_.value <=> hi_.value;
    if (c > 0 || (c == 0 && !(lo_.closed && hi_.closed)))
        throw Error(Errc::EmptyInterval, "empty interval " + str());
}

Interval Interval::everything() { return {{ExtRat::minus_inf(), false}, {ExtRat::plus_inf(), false}}; }

Interval Interval::at_least(const ExtRat& a, bool closed_lo) {
    return {{a, closed_lo}, {ExtRat::plus_inf(), false}};
}

bool Interval::contains(const ExtRat& x) const {
    if (x.is_plus_inf()) return hi_.value.is_plus_inf();
    if (x.is_minus_inf()) return lo_.value.is_minus_inf();
    bool above = lo_.closed ? lo_.value <= x : lo_.value < x;
    bool below = hi_.closed ? x <= hi_.value : x < hi_.value;
    return above && below;
}

Interval Interval::scale(const ExtRat& q) const {
    if (!q.is_finite() || q.sign() == 0) throw Error(Errc::ZeroScale, "scale factor must be finite and nonzero");
    if (q.sign() > 0) return {{lo_.value * q, lo_.closed}, {hi_.value * q, hi_.closed}};
    return {{hi_.value * q, hi_.closed}, {lo_.value * q, lo_.closed}};
}

Interval Interval::shift(const ExtRat& c) const {
    if (!c.is_finite()) throw Error(Errc::PreconditionViolated, "shift must be finite");
    return {{lo_.value + c, lo_.closed}, {hi_.value + c, hi_.closed}};
}

std::string Interval::str() const {
    std::string s;
    s += lo_.closed ? '[' : '(';
    s += lo_.value.str();
    s += ',';
    s += hi_.value.str();
    s += hi_.closed ? ']' : ')';
    return s;
}

Interval Interval::parse(std::string_view text) {
    std::string_view s = trim(text);
    if (s.size() < 5) throw Error(Errc::Parse, "bad interval '" + std::string(text) + "'");
    char open = s.front(), close = s.back();
    if ((open != '[' && open != '(') || (close != ']' && close != ')'))
        throw Error(Errc::Parse, "bad interval brackets in '" + std::string(text) + "'");
    std::string_view body = s.substr(1, s.size() - 2);
    auto comma = body.find(',');
    if (comma == std::string_view::npos || body.find(',', comma + 1) != std::string_view::npos)
        throw Error(Errc::Parse, "interval needs exactly one comma: '" + std::string(text) + "'");
    ExtRat a = ExtRat::parse(body.substr(0, comma));
    ExtRat b = ExtRat::parse(body.substr(comma + 1));
    return Interval({a, open == '['}, {b, close == ']'});
}

Interval scale_interval(const Interval& i, const ExtRat& q) { return i.scale(q); }
bool interval_contains(const Interval& i, const ExtRat& x) { return i.contains(x); }

}  // namespace qmc
