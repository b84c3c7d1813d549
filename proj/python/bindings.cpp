#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qmc/discrete.hpp"
#include "qmc/pipeline.hpp"

namespace py = pybind11;
using namespace qmc;

namespace {

py::dict classified(const Classified& c) {
    py::dict d;
    d["answer"] = c.str();
    switch (c.kind) {
        case Classified::Kind::PlusInf: d["kind"] = "+inf"; break;
        case Classified::Kind::MinusInf: d["kind"] = "-inf"; break;
        case Classified::Kind::Approx: d["kind"] = "approx"; break;
        case Classified::Kind::Inconclusive: d["kind"] = "inconclusive"; break;
    }
    if (c.kind == Classified::Kind::Approx) {
        d["value"] = c.value.get_str();
        d["guarantee"] = c.guarantee.get_str();
    }
    d["diagnostic"] = c.diagnostic;
    return d;
}

py::dict report(const PipelineReport& rep) {
    py::dict d = classified(rep.answer);
    d["solver"] = rep.solve.str();
    d["configurations"] = rep.solve.stats.configurations;
    d["divisor"] = rep.cert.divisor().get_str();
    py::dict stages;
    for (const auto& s : rep.stages) stages[py::str(s.name)] = py::make_tuple(s.sizes.positions, s.sizes.moves, s.sizes.labels);
    d["stages"] = stages;
    d["dumped"] = rep.dumped;
    return d;
}

PipelineOptions options(long n, long cap, long max_cap, std::vector<std::string> dump, std::string dump_dir) {
    PipelineOptions o;
    o.n = n;
    o.solver.counter_cap = cap;
    o.solver.max_cap = std::max(cap, max_cap);
    o.dump_stages = std::move(dump);
    o.dump_dir = std::move(dump_dir);
    return o;
}

Formula formula_for(const System& sys, const std::string& text) {
    auto names = sys.predicate_names();
    std::set<std::string> preds(names.begin(), names.end());
    return parse_formula(text, FormulaContext{&preds});
}

SysState state_of(const std::vector<std::string>& values) {
    SysState s;
    for (const auto& v : values) s.values.push_back(ExtRat::parse(v));
    return s;
}

}  // namespace

PYBIND11_MODULE(_qmc, m) {
    m.doc() = "Quantitative mu-calculus model checking for initialised linear hybrid systems";

    static py::exception<Error> exc(m, "QmcError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetObject(exc.ptr(), py::make_tuple(e.what(), errc_name(e.code())).ptr());
        }
    });

    m.def(
        "approximate",
        [](const std::string& system, const std::string& formula, const std::string& location, long n, long cap,
           long max_cap, std::vector<std::string> dump, std::string dump_dir) {
            System sys = parse_system(system);
            return report(approximate(sys, formula_for(sys, formula), location, options(n, cap, max_cap, dump, dump_dir)));
        },
        py::arg("system"), py::arg("formula"), py::arg("location"), py::arg("n") = 10, py::arg("counter_cap") = 64,
        py::arg("max_cap") = 512, py::arg("dump_stages") = std::vector<std::string>{}, py::arg("dump_dir") = ".",
        "Value of a formula at a location, within 1/n. `system` is the JSON text of a system.");

    m.def(
        "approximate_game",
        [](const std::string& game, const std::string& position, long n, long cap, long max_cap) {
            Game g = parse_game(game);
            std::size_t start = position.empty() ? 0 : g.position_index(position);
            return report(approximate_game(g, start, options(n, cap, max_cap, {}, ".")));
        },
        py::arg("game"), py::arg("position") = "", py::arg("n") = 10, py::arg("counter_cap") = 64,
        py::arg("max_cap") = 512);

    m.def(
        "crosscheck",
        [](const std::string& system, const std::string& formula, const std::string& location, long n) {
            System sys = parse_system(system);
            auto cc = crosscheck(sys, formula_for(sys, formula), location, options(n, 64, 512, {}, "."));
            py::dict d = report(cc.pipeline);
            d["direct"] = cc.direct.str();
            d["agree"] = cc.agree;
            return d;
        },
        py::arg("system"), py::arg("formula"), py::arg("location"), py::arg("n") = 10);

    m.def(
        "solve_counter_reset",
        [](const std::string& game, const std::string& position, std::vector<std::string> values, long cap) {
            Game g = parse_game(game);
            GameState s = initial_game_state(g, position.empty() ? 0 : g.position_index(position));
            if (!values.empty()) s.values = state_of(values).values;
            SolveConfig cfg;
            cfg.counter_cap = cap;
            cfg.max_cap = std::max(cap, cfg.max_cap);
            auto res = solve_counter_reset(g, s, cfg);
            py::dict d;
            d["result"] = res.str();
            d["lo"] = res.lo.str();
            d["hi"] = res.hi.str();
            d["exact"] = res.kind == SolveResult::Kind::Exact;
            d["configurations"] = res.stats.configurations;
            return d;
        },
        py::arg("game"), py::arg("position") = "", py::arg("values") = std::vector<std::string>{},
        py::arg("counter_cap") = 64);

    m.def(
        "oracle",
        [](const std::string& game, const std::string& position, long horizon) {
            Game g = parse_game(game);
            auto o = minimax_oracle(g, initial_game_state(g, position.empty() ? 0 : g.position_index(position)), horizon);
            return py::make_tuple(o.lo.str(), o.hi.str());
        },
        py::arg("game"), py::arg("position") = "", py::arg("horizon") = 32);

    m.def("parse_formula", [](const std::string& text) { return print_formula(parse_formula(text)); });
    m.def("to_nnf", [](const std::string& text) { return print_formula(to_nnf(parse_formula(text))); });
    m.def("alternation_depth", [](const std::string& text) { return alternation_depth(to_nnf(parse_formula(text))).depth; });

    m.def("validate_initialised", [](const std::string& system) {
        std::vector<std::string> out;
        for (const auto& v : validate_initialised(parse_system(system))) out.push_back(v.message);
        return out;
    });
    m.def("normalise_system", [](const std::string& system) { return print_system(parse_system(system)); });
    m.def("normalise_game", [](const std::string& game) { return dump_game(parse_game(game)); });
    m.def("mc_game", [](const std::string& system, const std::string& formula) {
        System sys = parse_system(system);
        return dump_game(build_mc_game(sys, formula_for(sys, formula)).game);
    });

    m.def("di", [](const std::string& r) { return di(parse_rational(r)).get_str(); });
    m.def("dstar", [](const std::vector<std::string>& values) { return dstar(state_of(values)).dstar.get_str(); });
    m.def("equivalent", [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
        return equivalent(state_of(a), state_of(b));
    });

    m.def("interval_contains", [](const std::string& i, const std::string& x) {
        return interval_contains(Interval::parse(i), ExtRat::parse(x));
    });
    m.def("scale_interval", [](const std::string& i, const std::string& q) {
        return scale_interval(Interval::parse(i), ExtRat::parse(q)).str();
    });
    m.def("ext_add", [](const std::string& a, const std::string& b) {
        return ext_arith(ExtRat::parse(a), ExtRat::parse(b), ArithOp::Add).str();
    });
    m.def("ext_mul", [](const std::string& a, const std::string& b) {
        return ext_arith(ExtRat::parse(a), ExtRat::parse(b), ArithOp::Mul).str();
    });
}
