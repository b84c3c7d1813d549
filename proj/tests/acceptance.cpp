// Acceptance checks, one pass/fail line per criterion.
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "support.hpp"

using namespace qmc;
using namespace qmc::testing;

namespace {

// Pinned tolerances and limits.
const Rational kBurnerTarget(1);
const Rational kBurnerTol(1, 10);
const Rational kSplitTarget(-1, 2);
const Rational kSplitTol(1, 4);
const Rational kOpenWaitWidth(1, 2);
constexpr double kBurnerSeconds = 60;
constexpr double kGameSeconds = 30;
constexpr double kOracleSeconds = 600;
constexpr double kDiscreteSeconds = 120;
constexpr double kTransformSeconds = 300;
constexpr std::size_t kOracleInstances = 200;
constexpr double kConclusiveRate = 0.9;
constexpr std::size_t kDiscreteInstances = 1000;
constexpr std::size_t kDiPairs = 10000;
constexpr std::size_t kTransformInstances = 50;
constexpr long kTransformHorizon = 6;
constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Formula formula_for(const System& sys, const std::string& text) {
    auto names = sys.predicate_names();
    std::set<std::string> preds(names.begin(), names.end());
    return parse_formula(text, FormulaContext{&preds});
}

PipelineReport burner(const std::string& file, const std::string& formula, long n) {
    System sys = load_system(file);
    PipelineOptions opts;
    opts.n = n;
    return approximate(sys, formula_for(sys, formula), "v0", opts);
}

Outcome criterion1() {
    auto t0 = Clock::now();
    auto rep = burner("systems/burner.json", "mu X.(<> X | (y0 & P))", 10);
    double secs = seconds_since(t0);
    Outcome o;
    const auto& a = rep.answer;
    Rational err = a.value - kBurnerTarget;
    if (err < 0) err = -err;
    o.pass = a.kind == Classified::Kind::Approx && err <= kBurnerTol && secs <= kBurnerSeconds;
    o.detail = "answer " + a.str() + ", expected Approx within 1/10 of 1";
    auto other = burner("systems/burner_timed.json", "mu X.(<> X | (y0 & P))", 10);
    o.detail += "; timed-exit variant gives " + other.answer.str();
    o.detail += " (" + std::to_string(secs) + " s)";
    return o;
}

Outcome criterion2() {
    auto t0 = Clock::now();
    auto rep = burner("systems/burner.json", "mu X.(<> X | y1)", 10);
    double secs = seconds_since(t0);
    Outcome o;
    o.pass = rep.answer.kind == Classified::Kind::PlusInf && secs <= kBurnerSeconds;
    o.detail = "answer " + rep.answer.str() + ", expected PlusInf";
    auto other = burner("systems/burner_timed.json", "mu X.(<> X | y1)", 10);
    o.detail += "; timed-exit variant gives " + other.answer.str();
    o.detail += " (" + std::to_string(secs) + " s)";
    return o;
}

Outcome criterion3() {
    auto t0 = Clock::now();
    Game g = load_game("games/split_choice.json");
    PipelineOptions opts;
    opts.n = 4;
    auto rep = approximate_game(g, g.position_index("v0"), opts);
    double secs = seconds_since(t0);
    Outcome o;
    Rational err = rep.answer.value - kSplitTarget;
    if (err < 0) err = -err;
    o.pass = rep.answer.kind == Classified::Kind::Approx && err <= kSplitTol && secs <= kGameSeconds;
    o.detail = "solver " + rep.solve.str() + ", classified " + rep.answer.str() + " (" + std::to_string(secs) + " s)";
    return o;
}

Outcome criterion4() {
    Outcome o;
    auto t0 = Clock::now();
    Game g10 = load_game("games/pumping.json");
    auto r10 = solve_counter_reset(g10, initial_game_state(g10, g10.position_index("v0")));
    double s10 = seconds_since(t0);
    bool ok10 = r10.kind == SolveResult::Kind::Exact && r10.lo == GameValue::minus_inf() && s10 <= kGameSeconds;

    t0 = Clock::now();
    Game g9 = load_game("games/open_wait.json");
    auto r9 = approximate_game(g9, g9.position_index("v0"));
    double s9 = seconds_since(t0);
    bool ok9 = false;
    if (r9.answer.kind == Classified::Kind::Approx) {
        Rational lo = r9.answer.value - r9.answer.guarantee, hi = r9.answer.value + r9.answer.guarantee;
        ok9 = lo <= 0 && 0 <= hi && hi - lo <= kOpenWaitWidth;
    }
    ok9 = ok9 && s9 <= kGameSeconds;
    o.pass = ok10 && ok9;
    o.detail = "pumping " + r10.str() + " (" + std::to_string(s10) + " s); open-wait " + r9.answer.str() +
               " guarantee " + r9.answer.guarantee.get_str() + " (" + std::to_string(s9) + " s)";
    return o;
}

Outcome criterion5() {
    auto t0 = Clock::now();
    Rng rng(kSeed);
    std::size_t total = 0, conclusive = 0, agree = 0, disagree = 0;
    std::string first_disagreement;
    PipelineOptions opts;
    opts.n = 1;
    while (total < kOracleInstances) {
        System sys = random_point_system(rng, 6, 2);
        Formula f = random_formula(rng, sys.dim(), 4);
        ++total;
        try {
            auto cc = crosscheck(sys, f, "l0", opts);
            if (!cc.pipeline.conclusive()) continue;
            ++conclusive;
            if (cc.agree) {
                ++agree;
            } else {
                ++disagree;
                if (first_disagreement.empty())
                    first_disagreement = print_formula(f) + ": direct " + cc.direct.str() + " vs " +
                                         cc.pipeline.answer.str();
            }
        } catch (const Error& e) {
            if (e.code() != Errc::Limit) throw;
        }
    }
    double secs = seconds_since(t0);
    double rate = static_cast<double>(conclusive) / static_cast<double>(total);
    Outcome o;
    o.pass = disagree == 0 && rate >= kConclusiveRate && secs <= kOracleSeconds;
    std::ostringstream d;
    d << total << " instances, " << conclusive << " conclusive (rate " << rate << "), " << agree << " agree, "
      << disagree << " disagree (" << secs << " s)";
    if (!first_disagreement.empty()) d << "; first: " << first_disagreement;
    o.detail = d.str();
    return o;
}

Outcome criterion6() {
    auto t0 = Clock::now();
    Rng rng(kSeed + 6);
    std::size_t shift_ok = 0, correct_ok = 0, correct_total = 0, formula_ok = 0, corrected = 0;
    std::size_t shift_total = 0;
    while (shift_total < kDiscreteInstances) {
        auto c = random_discrete_case(rng);
        SysState s2 = random_equivalent(rng, c.s);
        ++shift_total;
        try {
            SysState t2 = shift_move(c.s, c.t, c.label, s2);
            auto w = elapsed(s2, t2, c.label);
            bool ok = equivalent(c.t, t2) && label_allows(c.label, s2.values) &&
                      (!w || c.label.time.contains(ExtRat(*w)));
            if (ok) ++shift_ok;
        } catch (const Error&) {
        }
    }
    while (correct_total < kDiscreteInstances) {
        auto c = random_discrete_case(rng);
        Rational ds = dstar(c.s).dstar;
        if (ds == 0) continue;
        Rational eps = ds * std::uniform_int_distribution<long>(1, 99)(rng) / 100;
        ++correct_total;
        try {
            CorrectMoveTrace tr;
            SysState t2 = correct_move(c.s, c.t, c.label, eps, &tr);
            auto w = elapsed(c.s, t2, c.label);
            bool ok = equivalent(c.t, t2) && (!w || c.label.time.contains(ExtRat(*w))) &&
                      dstar(t2).dstar <= ds + eps;
            if (ok) ++correct_ok;
            if (tr.formula_case != 0) {
                ++corrected;
                if (tr.case_formula_ok) ++formula_ok;
            }
        } catch (const Error&) {
        }
    }
    std::size_t di_ok = 0, rule_ok = 0;
    std::map<int, std::size_t> rule_hits;
    for (std::size_t k = 0; k < kDiPairs; ++k) {
        Rational a = random_rational(rng, -4, 4, 12), b = random_rational(rng, -4, 4, 12);
        Rational da = di(a), db = di(b), dab = di(a + b);
        Rational lhs = dab < 0 ? Rational(-dab) : dab;
        Rational rhs = (da < 0 ? Rational(-da) : da) + (db < 0 ? Rational(-db) : db);
        if (lhs <= rhs) ++di_ok;
        auto rule = di_sum_rule(da, db);
        if (rule.value == dab) ++rule_ok;
        ++rule_hits[rule.rule];
    }
    std::size_t laws_ok = 0;
    for (std::size_t k = 0; k < kDiscreteInstances; ++k) {
        auto c = random_discrete_case(rng);
        SysState a = c.s;
        SysState b = std::uniform_int_distribution<int>(0, 1)(rng) ? random_equivalent(rng, a) : c.t;
        if (b.values.size() != a.values.size()) b = a;
        SysState d = random_equivalent(rng, b);
        bool refl = equivalent(a, a) && equivalent(b, b);
        bool sym = equivalent(a, b) == equivalent(b, a) && equivalent(b, d) == equivalent(d, b);
        bool trans = !(equivalent(a, b) && equivalent(b, d)) || equivalent(a, d);
        if (refl && sym && trans) ++laws_ok;
    }
    double secs = seconds_since(t0);
    Outcome o;
    o.pass = shift_ok == shift_total && correct_ok == correct_total && di_ok == kDiPairs && rule_ok == kDiPairs &&
             laws_ok == kDiscreteInstances && secs <= kDiscreteSeconds;
    std::ostringstream d;
    d << "shift_move " << shift_ok << "/" << shift_total << ", correct_move " << correct_ok << "/" << correct_total
       << " (" << corrected << " needed a correction, case formulas alone satisfied " << formula_ok << "), di bound " << di_ok << "/" << kDiPairs << ", refinement "
      << rule_ok << "/" << kDiPairs << " [";
    for (auto [r, n] : rule_hits) d << "rule" << r << ":" << n << " ";
    d << "], equivalence laws " << laws_ok << "/" << kDiscreteInstances << " (" << secs << " s)";
    o.detail = d.str();
    return o;
}

Outcome criterion7() {
    auto t0 = Clock::now();
    Rng rng(kSeed + 7);
    std::size_t checked = 0, flat_ok = 0, scale_ok = 0, tried = 0;
    const std::vector<Rational> factors = {Rational(2), Rational(3), Rational(1, 2)};
    while (checked < kTransformInstances && tried < 20000) {
        ++tried;
        Game g = random_point_game(rng);
        GameState s0 = initial_game_state(g, 0);
        auto base = minimax_oracle(g, s0, kTransformHorizon);
        if (!base.conclusive()) continue;
        ++checked;
        Game flat = flatten(g);
        auto vf = minimax_oracle(flat, s0, kTransformHorizon);
        if (vf.conclusive() && vf.lo == base.lo) ++flat_ok;
        bool all = true;
        for (const auto& q : factors) {
            auto vq = minimax_oracle(scale_game(flat, q), s0, kTransformHorizon);
            all = all && vq.conclusive() && vq.lo == base.lo * q;
        }
        if (all) ++scale_ok;
    }
    double secs = seconds_since(t0);
    Outcome o;
    o.pass = checked >= kTransformInstances && flat_ok == checked && scale_ok == checked && secs <= kTransformSeconds;
    std::ostringstream d;
    d << checked << " conclusive games (" << tried << " generated), flatten " << flat_ok << "/" << checked
      << ", scaling q in {2,3,1/2} " << scale_ok << "/" << checked << " (" << secs << " s)";
    o.detail = d.str();
    return o;
}

Outcome criterion8() {
    namespace fs = std::filesystem;
    std::size_t systems = 0, games = 0, formulae = 0, intervals = 0, dumps = 0, failures = 0;
    std::string first;
    auto fail = [&](const std::string& what) {
        ++failures;
        if (first.empty()) first = what;
    };
    auto check_interval = [&](const Interval& i) {
        ++intervals;
        if (!(Interval::parse(i.str()) == i)) fail("interval " + i.str());
    };
    auto check_game = [&](const Game& g, const std::string& what) {
        ++dumps;
        std::string d = dump_game(g);
        Game back = parse_game(d);
        if (!(back == g) || dump_game(back) != d) fail("game dump " + what);
        for (const auto& m : g.moves())
            for (const auto& l : m.labels) {
                check_interval(l.time);
                for (const auto& c : l.constraints) check_interval(c);
            }
    };
    std::vector<System> loaded;
    for (const auto& e : fs::directory_iterator(data_path("systems"))) {
        ++systems;
        System s = parse_system(read_text(e.path().string()));
        std::string printed = print_system(s);
        if (!(parse_system(printed) == s) || print_system(parse_system(printed)) != printed)
            fail("system " + e.path().filename().string());
        for (const auto& ed : s.edges)
            for (const auto& l : ed.labels) {
                check_interval(l.time);
                for (const auto& c : l.constraints) check_interval(c);
            }
        if (validate_initialised(s).empty()) loaded.push_back(s);
    }
    for (const auto& e : fs::directory_iterator(data_path("games"))) {
        ++games;
        check_game(parse_game(read_text(e.path().string())), e.path().filename().string());
    }
    std::vector<Formula> fs_list;
    for (const auto& e : fs::directory_iterator(data_path("formulae"))) {
        ++formulae;
        Formula f = parse_formula(read_text(e.path().string()));
        std::string printed = print_formula(f);
        if (!formula_equal(parse_formula(printed), f) || print_formula(parse_formula(printed)) != printed)
            fail("formula " + e.path().filename().string());
        fs_list.push_back(f);
    }
    // Stage dumps of every system/formula pair that lowers at desk scale.
    for (const auto& s : loaded)
        for (const auto& f : fs_list) {
            if (!free_fixvars(f).empty()) continue;
            try {
                McGame mc = build_mc_game(s, f);
                check_game(mc.game, "mc");
                Game flat = flatten(mc.game);
                check_game(flat, "flat");
                Integerised ig = integerise(flat);
                check_game(ig.game, "integer");
                auto cr = to_counter_reset(ig.game, 1, mc.position_of(mc.formula, 0), ig.cert);
                check_game(cr.sign, "sign");
                check_game(cr.memory, "memory");
                check_game(cr.counter_reset, "counter-reset");
            } catch (const Error& e) {
                if (e.code() != Errc::Limit && e.code() != Errc::Arity && e.code() != Errc::UnboundFixVar)
                    fail(std::string("lowering: ") + e.what());
            }
        }
    Outcome o;
    o.pass = failures == 0 && systems > 0 && games > 0 && formulae > 0;
    std::ostringstream d;
    d << systems << " systems, " << games << " games, " << formulae << " formulae, " << intervals << " intervals, "
      << dumps << " game dumps, " << failures << " failures";
    if (!first.empty()) d << "; first: " << first;
    o.detail = d.str();
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::vector<int> only;
    app.add_option("--criterion", only, "Run only these criteria (1-8)")->check(CLI::Range(1, 8));
    CLI11_PARSE(app, argc, argv);
    const std::vector<std::function<Outcome()>> all = {criterion1, criterion2, criterion3, criterion4,
                                                       criterion5, criterion6, criterion7, criterion8};
    if (only.empty())
        for (int i = 1; i <= 8; ++i) only.push_back(i);
    bool ok = true;
    for (int c : only) {
        Outcome o;
        try {
            o = all[static_cast<std::size_t>(c - 1)]();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        std::cout << "criterion " << c << ": " << (o.pass ? "PASS" : "FAIL") << " - " << o.detail << std::endl;
        ok = ok && o.pass;
    }
    return ok ? 0 : 1;
}
