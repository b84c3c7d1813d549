#include <catch_amalgamated.hpp>

#include <set>

#include "support.hpp"

using namespace qmc;
using testing::load_system;

TEST_CASE("burner file") {
    System sys = load_system("systems/burner.json");
    CHECK(sys.dim() == 2);
    CHECK(sys.locations.size() == 2);
    CHECK(sys.edges.size() == 2);
    CHECK(sys.locations[0].predicates.at("P") == ExtRat::plus_inf());
    CHECK(sys.locations[1].predicates.at("P") == ExtRat::minus_inf());
    CHECK(validate_initialised(sys).empty());
    CHECK(parse_system(print_system(sys)) == sys);
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse_system(R"({"variables":["y0"],"locations":[]})"), Error);
    try {
        parse_system(R"({"variables":["y0","y1"],"locations":[{"name":"a","rates":["1"]}],"edges":[]})");
        FAIL("expected an arity error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::Arity);
    }
    try {
        parse_system(R"({"variables":["y0"],"locations":[{"name":"a"}],
            "edges":[{"from":"a","to":"b","labels":[{"time":"[0,1]"}]}]})");
        FAIL("expected an unknown location");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::UnknownLocation);
    }
    CHECK_THROWS_AS(parse_system("{ not json"), Error);
}

TEST_CASE("initialised check") {
    System stopwatch = load_system("systems/burner_rates.json");
    auto v = validate_initialised(stopwatch);
    REQUIRE_FALSE(v.empty());
    for (const auto& x : v) CHECK(x.variable == 1);
    System single = testing::discrete_system(2);
    CHECK(validate_initialised(single).empty());
    // Resetting everything everywhere never introduces a violation.
    for (auto& e : stopwatch.edges)
        for (auto& l : e.labels) l.resets = VarSet::all(stopwatch.dim());
    CHECK(validate_initialised(stopwatch).empty());
}

TEST_CASE("allowed and apply_move") {
    System sys = load_system("systems/burner.json");
    SysState s{1, {ExtRat(35), ExtRat(35)}};
    CHECK(allowed(sys, s, 1, 0));
    s.values[0] = ExtRat(10);
    CHECK_FALSE(allowed(sys, s, 1, 0));
    SysState t = apply_move(sys, initial_state(sys, 0), 0, 0, ExtRat(1));
    CHECK(t.location == 1);
    CHECK(t.values == std::vector<ExtRat>{ExtRat(0), ExtRat(1)});
    CHECK_THROWS_AS(apply_move(sys, initial_state(sys, 0), 0, 0, ExtRat(2)), Error);
    CHECK_THROWS_AS(apply_move(sys, initial_state(sys, 1), 1, 0, ExtRat(31)), Error);

    System two = testing::load_system("systems/toy_two.json");
    SysState u = apply_move(two, initial_state(two, 0), 0, 0, ExtRat(1));
    CHECK(u.values == std::vector<ExtRat>{ExtRat(1), ExtRat(2)});
}

TEST_CASE("enumerable successors") {
    System toy = load_system("systems/toy_cycle.json");
    auto succ = successors_enumerable(toy, initial_state(toy, 0));
    REQUIRE(succ);
    CHECK(succ->size() == 1);
    System burner = load_system("systems/burner.json");
    CHECK_FALSE(successors_enumerable(burner, initial_state(burner, 0)));
    SysState stuck{0, {ExtRat(50)}};
    auto none = successors_enumerable(toy, stuck);
    REQUIRE(none);
    CHECK(none->empty());
}

TEST_CASE("state graph is closed under enumerable successors") {
    testing::Rng rng(3);
    for (int k = 0; k < 100; ++k) {
        System sys = testing::random_point_system(rng, 4, 2);
        auto g = explore_state_graph(sys, initial_state(sys, 0));
        for (std::size_t s = 0; s < g.states.size(); ++s) {
            auto succ = successors_enumerable(sys, g.states[s]);
            REQUIRE(succ);
            std::set<SysState> want(succ->begin(), succ->end()), got;
            for (auto t : g.succ[s]) got.insert(g.states[t]);
            CHECK(want == got);
        }
    }
}

TEST_CASE("state graph exploration refuses interval times") {
    System burner = load_system("systems/burner.json");
    CHECK_THROWS_AS(explore_state_graph(burner, initial_state(burner, 0)), Error);
}
