#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "qmc/pipeline.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qmc::Error(qmc::Errc::PreconditionViolated, "cannot read " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void print_report(const qmc::PipelineReport& rep, const qmc::Integer& n) {
    std::cout << "answer: " << rep.answer.str() << "\n";
    if (rep.answer.kind == qmc::Classified::Kind::Approx) {
        std::cout << "value: " << rep.answer.value.get_str() << "\n";
        std::cout << "guarantee: " << rep.answer.guarantee.get_str() << "\n";
    }
    if (!rep.answer.diagnostic.empty()) std::cout << "diagnostic: " << rep.answer.diagnostic << "\n";
    std::cout << "precision: " << n.get_str() << "\n";
    std::cout << "solver: " << rep.solve.str() << "\n";
    std::cout << "certificate: r=" << rep.cert.r.get_str() << " q=" << rep.cert.q.get_str()
              << " n=" << rep.cert.n.get_str() << " m=" << rep.cert.m.get_str()
              << " divisor=" << rep.cert.divisor().get_str() << "\n";
    std::cout << "configurations: " << rep.solve.stats.configurations << "\n";
    std::cout << "counter_cap: " << rep.solve.stats.cap << "\n";
    for (const auto& [prio, rounds] : rep.solve.stats.rounds)
        std::cout << "rounds." << prio << ": " << rounds << "\n";
    for (const auto& s : rep.stages)
        std::cout << "stage." << s.name << ": positions=" << s.sizes.positions << " moves=" << s.sizes.moves
                  << " labels=" << s.sizes.labels << "\n";
    for (const auto& f : rep.dumped) std::cout << "dumped: " << f << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantitative mu-calculus model checker for initialised linear hybrid systems"};
    std::string system_path, formula, location, game_path, position;
    long precision = 10;
    std::vector<std::string> dump;
    std::string dump_dir = ".";
    long cap = 64, max_cap = 512, horizon = 32;
    bool oracle = false, solve_only = false;
    unsigned long seed = 0;

    app.add_option("--system", system_path, "System file (JSON)");
    app.add_option("--formula", formula, "Formula text, or - to read it from stdin");
    app.add_option("--location", location, "Start location");
    app.add_option("--game", game_path, "Game file (JSON) instead of a system and formula");
    app.add_option("--position", position, "Start position of --game");
    app.add_flag("--solve-only", solve_only, "Solve --game directly as a counter-reset game");
    app.add_option("--precision", precision, "Precision n: the answer is within 1/n")->check(CLI::PositiveNumber);
    app.add_option("--dump-stage", dump, "Write a stage dump: mc, flat, integer, scaled, sign, memory, counter-reset");
    app.add_option("--dump-dir", dump_dir, "Directory for stage dumps");
    app.add_option("--solver-cap", cap, "Initial counter cap B")->check(CLI::PositiveNumber);
    app.add_option("--max-cap", max_cap, "Largest counter cap tried by deepening")->check(CLI::PositiveNumber);
    app.add_option("--horizon", horizon, "Horizon of the bounded oracle")->check(CLI::PositiveNumber);
    app.add_flag("--oracle-check", oracle, "Compare with direct evaluation on the explicit state graph");
    app.add_option("--seed", seed, "Seed recorded in the report");
    CLI11_PARSE(app, argc, argv);

    try {
        qmc::PipelineOptions opts;
        opts.n = precision;
        opts.dump_stages = dump;
        opts.dump_dir = dump_dir;
        opts.solver.counter_cap = cap;
        opts.solver.max_cap = std::max(cap, max_cap);
        opts.solver.horizon = horizon;
        std::cout << "seed: " << seed << "\n";

        if (!game_path.empty()) {
            qmc::Game g = qmc::parse_game(read_file(game_path));
            std::size_t start = position.empty() ? 0 : g.position_index(position);
            if (solve_only) {
                auto res = qmc::solve_counter_reset(g, qmc::initial_game_state(g, start), opts.solver);
                std::cout << "solver: " << res.str() << "\n";
                std::cout << "configurations: " << res.stats.configurations << "\n";
                for (const auto& w : res.stats.witness)
                    std::cout << "witness: " << w.configuration << " -> " << w.successor << "\n";
                if (oracle) {
                    auto o = qmc::minimax_oracle(g, qmc::initial_game_state(g, start), horizon);
                    std::cout << "oracle: [" << o.lo.str() << ", " << o.hi.str() << "]\n";
                }
                return res.kind == qmc::SolveResult::Kind::Inconclusive ? 2 : 0;
            }
            auto rep = qmc::approximate_game(g, start, opts);
            print_report(rep, opts.n);
            return rep.conclusive() ? 0 : 2;
        }

        if (system_path.empty() || formula.empty() || location.empty())
            throw qmc::Error(qmc::Errc::PreconditionViolated, "--system, --formula and --location are required");
        if (formula == "-") {
            std::ostringstream ss;
            ss << std::cin.rdbuf();
            formula = ss.str();
        }
        qmc::System sys = qmc::parse_system(read_file(system_path));
        auto names = sys.predicate_names();
        std::set<std::string> preds(names.begin(), names.end());
        qmc::Formula f = qmc::parse_formula(formula, qmc::FormulaContext{&preds});
        std::cout << "formula: " << qmc::print_formula(f) << "\n";
        std::cout << "location: " << location << "\n";
        if (oracle) {
            auto cc = qmc::crosscheck(sys, f, location, opts);
            print_report(cc.pipeline, opts.n);
            std::cout << "direct: " << cc.direct.str() << "\n";
            std::cout << "agreement: " << (cc.agree ? "yes" : (cc.pipeline.conclusive() ? "no" : "unknown")) << "\n";
            return cc.pipeline.conclusive() ? 0 : 2;
        }
        auto rep = qmc::approximate(sys, f, location, opts);
        print_report(rep, opts.n);
        return rep.conclusive() ? 0 : 2;
    } catch (const std::exception& e) {
        std::cout << "error: " << e.what() << "\n";
        return 1;
    }
}
