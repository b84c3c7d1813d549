#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace qmc;

namespace {

ExtRat q(long n, long d = 1) { return ExtRat::fraction(n, d); }

Interval random_interval(testing::Rng& rng) {
    std::uniform_int_distribution<int> kind(0, 5);
    Rational a = testing::random_rational(rng, -5, 5, 6);
    Rational b = a + testing::random_rational(rng, 0, 4, 6);
    int k = kind(rng);
    if (k == 0) return Interval::at_least(ExtRat(a), rng() % 2 == 0);
    if (k == 1) return Interval({ExtRat::minus_inf(), false}, {ExtRat(b), true});
    if (a == b) return Interval::point(ExtRat(a));
    return Interval({ExtRat(a), rng() % 2 == 0}, {ExtRat(b), rng() % 2 == 0});
}

}  // namespace

TEST_CASE("extended arithmetic") {
    CHECK(ext_arith(q(1, 2), q(1, 3), ArithOp::Add) == q(5, 6));
    CHECK(ext_arith(q(0), ExtRat::plus_inf(), ArithOp::Mul) == q(0));
    CHECK(ext_arith(ExtRat::minus_inf(), q(0), ArithOp::Mul) == q(0));
    CHECK(ext_arith(ExtRat::plus_inf(), q(5), ArithOp::Add) == ExtRat::plus_inf());
    CHECK(ext_arith(q(-2), ExtRat::plus_inf(), ArithOp::Mul) == ExtRat::minus_inf());
    CHECK_THROWS_AS(ext_arith(ExtRat::plus_inf(), ExtRat::minus_inf(), ArithOp::Add), Error);
}

TEST_CASE("finite values are canonical") {
    ExtRat a(Rational(4, 8));
    CHECK(a.str() == "1/2");
    CHECK(a == q(1, 2));
    CHECK(ExtRat::fraction(3, -6).str() == "-1/2");
}

TEST_CASE("total order") {
    CHECK(ExtRat::minus_inf() < q(-1000000));
    CHECK(q(1000000) < ExtRat::plus_inf());
    CHECK(ext_max(q(1), ExtRat::minus_inf()) == q(1));
    CHECK(ext_min(q(1), ExtRat::minus_inf()) == ExtRat::minus_inf());
}

TEST_CASE("text syntax") {
    for (const char* s : {"0", "7", "-3/4", "inf", "-inf", "22/7"}) CHECK(ExtRat::parse(s).str() == s);
    CHECK(ExtRat::parse("6/4").str() == "3/2");
    CHECK_THROWS_AS(ExtRat::parse("1/0"), Error);
    CHECK_THROWS_AS(ExtRat::parse("abc"), Error);
    for (const char* s : {"[0,1]", "(0,1]", "[0,inf)", "(-inf,inf)", "[2,2]", "(-1/2,3/4)"})
        CHECK(Interval::parse(s).str() == s);
}

TEST_CASE("interval construction rejects empty and closed infinite ends") {
    CHECK_THROWS_AS(Interval::parse("(1,1)"), Error);
    CHECK_THROWS_AS(Interval::parse("[2,1]"), Error);
    CHECK_THROWS_AS(Interval::parse("[0,inf]"), Error);
}

TEST_CASE("scale_interval") {
    CHECK(scale_interval(Interval::parse("[0,1]"), q(2)) == Interval::parse("[0,2]"));
    CHECK(scale_interval(Interval::parse("[30,40]"), q(1, 2)) == Interval::parse("[15,20]"));
    CHECK(scale_interval(Interval::parse("(0,1]"), q(-1)) == Interval::parse("[-1,0)"));
    CHECK(scale_interval(Interval::parse("[1,inf)"), q(-2)) == Interval::parse("(-inf,-2]"));
    CHECK_THROWS_AS(scale_interval(Interval::parse("[0,1]"), q(0)), Error);
}

TEST_CASE("interval_contains") {
    CHECK(interval_contains(Interval::parse("[0,1]"), q(1)));
    CHECK_FALSE(interval_contains(Interval::parse("(0,1)"), q(0)));
    CHECK(interval_contains(Interval::parse("[0,inf)"), q(1000000000)));
    CHECK(interval_contains(Interval::parse("[0,inf)"), ExtRat::plus_inf()));
    CHECK_FALSE(interval_contains(Interval::parse("[0,5]"), ExtRat::plus_inf()));
    CHECK_FALSE(interval_contains(Interval::parse("[0,inf)"), ExtRat::minus_inf()));
}

TEST_CASE("scaling laws on random intervals") {
    testing::Rng rng(11);
    for (int k = 0; k < 500; ++k) {
        Interval i = random_interval(rng);
        Rational a = testing::random_rational(rng, -3, 3, 5), b = testing::random_rational(rng, -3, 3, 5);
        if (a == 0 || b == 0) continue;
        CHECK(i.scale(ExtRat(a)).scale(ExtRat(b)) == i.scale(ExtRat(Rational(a * b))));
        CHECK(i.scale(ExtRat(1)) == i);
        Rational x = testing::random_rational(rng, -8, 8, 6);
        if (a > 0) CHECK(i.scale(ExtRat(a)).contains(ExtRat(Rational(a * x))) == i.contains(ExtRat(x)));
        CHECK(Interval::parse(i.str()) == i);
    }
}
