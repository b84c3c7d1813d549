#include "qmc/pipeline.hpp"

#include <algorithm>
#include <fstream>

namespace qmc {

const std::vector<std::string> kStageNames = {"mc", "flat", "integer", "scaled", "sign", "memory", "counter-reset"};

namespace {

template <typename F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        std::string what = e.what();
        std::string prefix = std::string(errc_name(e.code())) + ": ";
        if (what.rfind(prefix, 0) == 0) what = what.substr(prefix.size());
        throw Error(e.code(), "stage " + name + ": " + what);
    }
}

void record(PipelineReport& rep, const PipelineOptions& opts, const std::string& name, const Game& g) {
    rep.stages.push_back({name, stage_sizes(g)});
    if (std::find(opts.dump_stages.begin(), opts.dump_stages.end(), name) == opts.dump_stages.end()) return;
    std::string path = opts.dump_dir + "/" + name + ".game.json";
    std::ofstream out(path);
    if (!out) throw Error(Errc::PreconditionViolated, "cannot write " + path);
    out << dump_game(g);
    rep.dumped.push_back(path);
}

}  // namespace

PipelineReport approximate_game(const Game& g, std::size_t start, const PipelineOptions& opts) {
    for (const auto& s : opts.dump_stages)
        if (std::find(kStageNames.begin(), kStageNames.end(), s) == kStageNames.end())
            throw Error(Errc::PreconditionViolated, "unknown stage " + s);
    if (opts.n < 1) throw Error(Errc::PreconditionViolated, "precision must be at least 1");
    PipelineReport rep;
    Game flat = stage("flat", [&] { return flatten(g); });
    record(rep, opts, "flat", flat);
    Integerised ig = stage("integer", [&] { return integerise(flat); });
    record(rep, opts, "integer", ig.game);
    CounterResetResult cr =
        stage("counter-reset", [&] { return to_counter_reset(ig.game, opts.n, start, ig.cert); });
    record(rep, opts, "scaled", cr.scaled);
    record(rep, opts, "sign", cr.sign);
    record(rep, opts, "memory", cr.memory);
    record(rep, opts, "counter-reset", cr.counter_reset);
    rep.cert = cr.cert;
    rep.solve = stage("solve", [&] {
        return solve_counter_reset(cr.counter_reset, initial_game_state(cr.counter_reset, cr.start), opts.solver);
    });
    rep.answer = classify_value(rep.solve, rep.cert, opts.n);
    return rep;
}

PipelineReport approximate(const System& sys, const Formula& f, const std::string& location,
                           const PipelineOptions& opts) {
    std::size_t loc = sys.location(location);
    McGame mc = stage("mc", [&] { return build_mc_game(sys, f); });
    std::size_t start = mc.position_of(mc.formula, loc);
    PipelineReport pre;
    record(pre, opts, "mc", mc.game);
    PipelineReport rep = approximate_game(mc.game, start, opts);
    rep.stages.insert(rep.stages.begin(), pre.stages.begin(), pre.stages.end());
    rep.dumped.insert(rep.dumped.begin(), pre.dumped.begin(), pre.dumped.end());
    return rep;
}

ExtRat CrosscheckReport::pipeline_value() const {
    switch (pipeline.answer.kind) {
        case Classified::Kind::PlusInf: return ExtRat::plus_inf();
        case Classified::Kind::MinusInf: return ExtRat::minus_inf();
        case Classified::Kind::Approx: return ExtRat(pipeline.answer.value);
        default: throw Error(Errc::PreconditionViolated, "pipeline answer is inconclusive");
    }
}

CrosscheckReport crosscheck(const System& sys, const Formula& f, const std::string& location,
                            const PipelineOptions& opts) {
    std::size_t loc = sys.location(location);
    StateGraph sg = stage("explore", [&] { return explore_state_graph(sys, initial_state(sys, loc)); });
    Qts qts = qts_from_state_graph(sys, sg);
    CrosscheckReport rep;
    Formula nnf = to_nnf(f);
    rep.direct = eval_direct(qts, nnf, 0);
    rep.pipeline = approximate(sys, f, location, opts);
    rep.agree = rep.pipeline.conclusive() && rep.pipeline_value() == rep.direct;
    return rep;
}

}  // namespace qmc
