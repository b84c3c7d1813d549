#include <catch_amalgamated.hpp>

#include <filesystem>

#include "support.hpp"

using namespace qmc;
using testing::load_system;

TEST_CASE("atomic formula") {
    System sys = load_system("systems/toy_cycle.json");
    for (const auto& loc : sys.locations) {
        auto cc = crosscheck(sys, parse_formula("P"), loc.name);
        CHECK(cc.agree);
        CHECK(cc.direct == loc.predicates.at("P"));
        CHECK(cc.pipeline_value() == loc.predicates.at("P"));
    }
}

TEST_CASE("extremal fixpoints") {
    System sys = load_system("systems/toy_two.json");
    auto nu = crosscheck(sys, parse_formula("nu X. X"), "s");
    CHECK(nu.direct == ExtRat::plus_inf());
    CHECK(nu.pipeline.answer.kind == Classified::Kind::PlusInf);
    auto mu = crosscheck(sys, parse_formula("mu X. X"), "s");
    CHECK(mu.pipeline.answer.kind == Classified::Kind::MinusInf);
}

TEST_CASE("corpus formulae agree with direct evaluation") {
    for (const char* sys_file : {"systems/toy_cycle.json", "systems/toy_two.json"}) {
        System sys = load_system(sys_file);
        for (const char* f : {"formulae/invariant.mu", "formulae/plain.mu", "formulae/burner_reach.mu"}) {
            Formula formula = parse_formula(testing::read_text(testing::data_path(f)));
            if (!used_variables(formula).empty() && *used_variables(formula).rbegin() >= sys.dim()) continue;
            auto cc = crosscheck(sys, formula, sys.locations[0].name);
            INFO(sys_file << " " << f);
            CHECK(cc.pipeline.conclusive());
            CHECK(cc.agree);
        }
    }
}

TEST_CASE("random systems agree with direct evaluation") {
    testing::Rng rng(41);
    PipelineOptions opts;
    opts.n = 1;
    int checked = 0;
    for (int k = 0; k < 60; ++k) {
        System sys = testing::random_point_system(rng, 3, 1);
        Formula f = testing::random_formula(rng, sys.dim(), 2);
        CrosscheckReport cc;
        try {
            cc = crosscheck(sys, f, "l0", opts);
        } catch (const Error& e) {
            if (e.code() == Errc::Limit) continue;
            throw;
        }
        if (!cc.pipeline.conclusive()) continue;
        INFO(print_formula(f));
        CHECK(cc.agree);
        ++checked;
    }
    CHECK(checked >= 30);
}

TEST_CASE("game entry point") {
    Game wait = testing::load_game("games/open_wait.json");
    auto rep = approximate_game(wait, 0);
    REQUIRE(rep.answer.kind == Classified::Kind::Approx);
    Rational err = rep.answer.value;
    if (err < 0) err = -err;
    CHECK(err <= rep.answer.guarantee);

    Game split = testing::load_game("games/split_choice.json");
    PipelineOptions opts;
    opts.n = 4;
    auto r5 = approximate_game(split, 0, opts);
    REQUIRE(r5.answer.kind == Classified::Kind::Approx);
    Rational d = r5.answer.value + Rational(1, 2);
    if (d < 0) d = -d;
    CHECK(d <= Rational(1, 4));
}

TEST_CASE("not initialised") {
    System stopwatch = load_system("systems/burner_rates.json");
    try {
        approximate(stopwatch, parse_formula("P"), "v0");
        FAIL("expected NotInitialised");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NotInitialised);
        CHECK(std::string(e.what()).find("y1") != std::string::npos);
    }
    CHECK_THROWS_AS(approximate(load_system("systems/burner.json"), parse_formula("P"), "nowhere"), Error);
}

TEST_CASE("stage dumps") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "qmc_stage_dumps";
    fs::remove_all(dir);
    fs::create_directories(dir);
    PipelineOptions opts;
    opts.dump_stages = kStageNames;
    opts.dump_dir = dir.string();
    auto rep = approximate(load_system("systems/toy_cycle.json"), parse_formula("<> P"), "a", opts);
    CHECK(rep.stages.size() == kStageNames.size());
    REQUIRE(rep.dumped.size() == kStageNames.size());
    for (const auto& f : rep.dumped) {
        Game g = parse_game(testing::read_text(f));
        CHECK(parse_game(dump_game(g)) == g);
    }
    Game cr = parse_game(testing::read_text((dir / "counter-reset.game.json").string()));
    CHECK(check_counter_reset(cr).empty());
    fs::remove_all(dir);
}
