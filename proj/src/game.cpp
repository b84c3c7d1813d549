#include "qmc/game.hpp"

#include <algorithm>

#include "json_io.hpp"

namespace qmc {

using detail::Json;

ExtRat PayoffTerm::eval(const std::vector<ExtRat>& values) const {
    if (mult.sign() == 0) return add;
    return mult * values.at(var) + add;
}

std::size_t Game::add_position(Position p) {
    if (p.rates.size() != dim()) throw Error(Errc::Arity, "position " + p.name + ": rates arity");
    if (p.owner != 0 && p.owner != 1) throw Error(Errc::PreconditionViolated, "owner must be 0 or 1");
    if (!p.payoff.mult.is_finite()) throw Error(Errc::PreconditionViolated, "payoff factor must be finite");
    if (p.payoff.mult.sign() != 0 && p.payoff.var >= dim())
        throw Error(Errc::Arity, "position " + p.name + ": payoff variable out of range");
    auto [it, fresh] = by_name_.emplace(p.name, positions_.size());
    if (!fresh) throw Error(Errc::Parse, "duplicate position name '" + p.name + "'");
    positions_.push_back(std::move(p));
    out_.emplace_back();
    return positions_.size() - 1;
}

std::size_t Game::add_move(std::size_t from, std::size_t to, std::vector<Label> labels) {
    if (from >= size() || to >= size()) throw Error(Errc::UnknownLocation, "move endpoint out of range");
    if (labels.empty()) throw Error(Errc::Parse, "move without labels");
    for (const auto& l : labels)
        if (l.constraints.size() != dim()) throw Error(Errc::Arity, "label constraint arity");
    moves_.push_back(Move{from, to, std::move(labels)});
    out_[from].push_back(moves_.size() - 1);
    return moves_.size() - 1;
}

std::optional<std::size_t> Game::find_position(std::string_view name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

std::size_t Game::position_index(std::string_view name) const {
    auto p = find_position(name);
    if (!p) throw Error(Errc::UnknownLocation, "no position named '" + std::string(name) + "'");
    return *p;
}

int Game::max_priority() const {
    int d = 0;
    for (const auto& p : positions_) d = std::max(d, p.priority);
    return d;
}

std::size_t Game::label_count() const {
    std::size_t n = 0;
    for (const auto& m : moves_) n += m.labels.size();
    return n;
}

GameState initial_game_state(const Game& g, std::size_t position) {
    return GameState{position, std::vector<ExtRat>(g.dim(), ExtRat(0))};
}

GameState apply_game_move(const Game& g, const GameState& s, const Step& step) {
    const Move& m = g.moves().at(step.move);
    if (m.from != s.position) throw Error(Errc::NotAllowed, "move does not leave the current position");
    const Label& l = m.labels.at(step.label);
    if (!step.time.is_finite() || !l.time.contains(step.time))
        throw Error(Errc::TimeOutOfInterval, step.time.str() + " not in " + l.time.str());
    if (!label_allows(l, s.values)) throw Error(Errc::NotAllowed, "label constraints not satisfied");
    return GameState{m.to, advance(s.values, g.position(s.position).rates, l, step.time)};
}

GameValue play_payoff(const Game& g, const Play& p) {
    GameState s = p.start;
    for (const auto& step : p.prefix) s = apply_game_move(g, s, step);
    if (p.cycle.empty()) {
        if (!game_successors(g, s).choices.empty())
            throw Error(Errc::PlayNotTerminated, "final state at " + g.position(s.position).name + " has successors");
        return g.position(s.position).payoff.eval(s.values);
    }
    std::size_t entry = s.position;
    int lowest = g.position(entry).priority;
    for (const auto& step : p.cycle) {
        s = apply_game_move(g, s, step);
        lowest = std::min(lowest, g.position(s.position).priority);
    }
    if (s.position != entry) throw Error(Errc::PreconditionViolated, "cycle does not return to its entry position");
    return lowest % 2 == 0 ? ExtRat::plus_inf() : ExtRat::minus_inf();
}

bool Successors::enumerable() const {
    return std::all_of(choices.begin(), choices.end(), [](const Choice& c) { return c.time.is_point(); });
}

std::vector<GameState> Successors::states(const Game& g, const GameState& s) const {
    if (!enumerable()) throw Error(Errc::NotEnumerable, "successor set is not finite");
    std::vector<GameState> out;
    for (const auto& c : choices) out.push_back(apply_game_move(g, s, Step{c.move, c.label, c.time.lo().value}));
    return out;
}

Successors game_successors(const Game& g, const GameState& s) {
    Successors out;
    for (auto m : g.out(s.position)) {
        const auto& labels = g.moves()[m].labels;
        for (std::size_t l = 0; l < labels.size(); ++l)
            if (label_allows(labels[l], s.values)) out.choices.push_back(Choice{m, l, labels[l].time});
    }
    return out;
}

std::vector<Violation> validate_initialised(const Game& g) {
    std::vector<Violation> out;
    for (std::size_t m = 0; m < g.moves().size(); ++m) {
        const Move& mv = g.moves()[m];
        const auto& a = g.position(mv.from).rates;
        const auto& b = g.position(mv.to).rates;
        for (std::size_t l = 0; l < mv.labels.size(); ++l)
            for (std::size_t i = 0; i < g.dim(); ++i)
                if (a[i] != b[i] && !mv.labels[l].resets.contains(i))
                    out.push_back({Violation::Kind::NotInitialised, m, l, i,
                                   "move (" + g.position(mv.from).name + "," + g.position(mv.to).name +
                                       "): rate of " + g.variables[i] + " changes but it is not reset"});
    }
    return out;
}

std::size_t McGame::position_of(const Formula& sub, std::size_t location) const {
    auto it = index.find({print_formula(sub), location});
    if (it == index.end()) throw Error(Errc::PreconditionViolated, "no position for " + print_formula(sub));
    return it->second;
}

McGame build_mc_game(const System& sys, const Formula& f) {
    auto violations = validate_initialised(sys);
    if (!violations.empty()) throw Error(Errc::NotInitialised, violations.front().message);
    if (!free_fixvars(f).empty()) throw Error(Errc::OpenFormula, "free fixpoint variable " + *free_fixvars(f).begin());
    for (auto v : used_variables(f))
        if (v >= sys.dim()) throw Error(Errc::Arity, "formula uses y" + std::to_string(v) + " but the system has " + std::to_string(sys.dim()) + " variables");

    McGame mc;
    mc.formula = to_nnf(f);
    mc.alternation = alternation_depth(mc.formula);
    const int top = mc.alternation.max_priority;
    Game& g = mc.game;
    g.variables = sys.variables;
    const std::size_t dim = sys.dim();

    auto subs = subformulae(mc.formula);
    std::vector<std::string> keys;
    for (const auto& s : subs) keys.push_back(print_formula(s));

    for (std::size_t k = 0; k < subs.size(); ++k) {
        const Formula& s = subs[k];
        for (std::size_t v = 0; v < sys.locations.size(); ++v) {
            const Location& loc = sys.locations[v];
            Position p;
            p.name = keys[k] + " @ " + loc.name;
            p.owner = (s->kind == FormulaKind::Box || s->kind == FormulaKind::And || s->kind == FormulaKind::Nu) ? 1 : 0;
            p.rates = loc.rates;
            p.priority = s->kind == FormulaKind::FixVar ? mc.alternation.priority.at(s->name) : top;
            if (s->kind == FormulaKind::Pred) {
                auto it = loc.predicates.find(s->name);
                if (it == loc.predicates.end())
                    throw Error(Errc::UnboundFixVar, "predicate " + s->name + " undefined at " + loc.name);
                p.payoff = PayoffTerm::constant(s->negated ? -it->second : it->second);
            } else if (s->kind == FormulaKind::Var) {
                p.payoff = PayoffTerm{s->var, ExtRat(s->negated ? -1 : 1), ExtRat(0)};
            } else {
                p.payoff = PayoffTerm::constant(p.owner == 0 ? ExtRat::minus_inf() : ExtRat::plus_inf());
            }
            mc.index[{keys[k], v}] = g.add_position(std::move(p));
        }
    }

    std::optional<std::size_t> sink[2];
    auto sink_position = [&](bool plus) {
        auto& slot = sink[plus ? 1 : 0];
        if (!slot) {
            Position p;
            p.name = plus ? "+inf" : "-inf";
            p.rates.assign(dim, Rational(1));
            p.priority = top;
            p.payoff = PayoffTerm::constant(plus ? ExtRat::plus_inf() : ExtRat::minus_inf());
            slot = g.add_position(std::move(p));
        }
        return *slot;
    };

    for (std::size_t k = 0; k < subs.size(); ++k) {
        const Formula& s = subs[k];
        for (std::size_t v = 0; v < sys.locations.size(); ++v) {
            std::size_t from = mc.index.at({keys[k], v});
            auto to = [&](const Formula& t, std::size_t loc) { return mc.index.at({print_formula(t), loc}); };
            switch (s->kind) {
                case FormulaKind::And:
                case FormulaKind::Or:
                    g.add_move(from, to(s->lhs, v), {empty_label(dim)});
                    g.add_move(from, to(s->rhs, v), {empty_label(dim)});
                    break;
                case FormulaKind::Mu:
                case FormulaKind::Nu: g.add_move(from, to(s->lhs, v), {empty_label(dim)}); break;
                case FormulaKind::FixVar:
                    g.add_move(from, to(mc.alternation.body.at(s->name), v), {empty_label(dim)});
                    break;
                case FormulaKind::Diamond:
                case FormulaKind::Box: {
                    bool any = false;
                    for (const auto& e : sys.edges) {
                        if (e.from != v) continue;
                        any = true;
                        g.add_move(from, to(s->lhs, e.to), e.labels);
                    }
                    if (!any) {
                        // Reset everything so the sink move keeps the game initialised.
                        Label l = empty_label(dim);
                        l.resets = VarSet::all(dim);
                        g.add_move(from, sink_position(s->kind == FormulaKind::Box), {l});
                    }
                    break;
                }
                default: break;
            }
        }
    }
    return mc;
}

std::string dump_game(const Game& g) {
    Json doc;
    doc["variables"] = g.variables;
    Json ps = Json::array();
    for (const auto& p : g.positions()) {
        Json pj;
        pj["name"] = p.name;
        pj["owner"] = p.owner;
        pj["priority"] = p.priority;
        Json rates = Json::array();
        for (const auto& r : p.rates) rates.push_back(r.get_str());
        pj["rates"] = rates;
        Json pay;
        if (p.payoff.mult.sign() != 0) pay["var"] = g.variables.at(p.payoff.var);
        pay["mult"] = p.payoff.mult.str();
        pay["add"] = p.payoff.add.str();
        pj["payoff"] = pay;
        ps.push_back(pj);
    }
    doc["positions"] = ps;
    Json ms = Json::array();
    for (const auto& m : g.moves()) {
        Json mj;
        mj["from"] = g.position(m.from).name;
        mj["to"] = g.position(m.to).name;
        Json labels = Json::array();
        for (const auto& l : m.labels) labels.push_back(detail::label_to_json(l, g.variables));
        mj["labels"] = labels;
        ms.push_back(mj);
    }
    doc["moves"] = ms;
    return doc.dump(2) + "\n";
}

Game parse_game(std::string_view text) {
    using namespace detail;
    Json doc = parse_json(text);
    Game g;
    const Json& vars = field(doc, "variables", "game");
    if (!vars.is_array()) throw Error(Errc::Parse, "game.variables: expected array");
    for (const auto& v : vars) g.variables.push_back(v.get<std::string>());
    if (g.dim() > 64) throw Error(Errc::Parse, "game.variables: at most 64 variables");
    const Json& ps = field(doc, "positions", "game");
    if (!ps.is_array() || ps.empty()) throw Error(Errc::Parse, "game.positions: expected a nonempty array");
    for (std::size_t k = 0; k < ps.size(); ++k) {
        std::string where = "positions[" + std::to_string(k) + "]";
        const Json& pj = ps[k];
        Position p;
        p.name = field(pj, "name", where).get<std::string>();
        p.owner = pj.value("owner", 0);
        p.priority = pj.value("priority", 0);
        if (p.priority < 0) throw Error(Errc::Parse, where + ".priority: negative");
        if (pj.contains("rates")) {
            const Json& r = pj.at("rates");
            if (!r.is_array() || r.size() != g.dim()) throw Error(Errc::Arity, where + ".rates: arity");
            for (std::size_t i = 0; i < r.size(); ++i)
                p.rates.push_back(rational_from_json(r[i], where + ".rates[" + std::to_string(i) + "]"));
        } else {
            p.rates.assign(g.dim(), Rational(1));
        }
        if (pj.contains("payoff")) {
            const Json& pay = pj.at("payoff");
            p.payoff.mult = pay.contains("mult") ? ext_from_json(pay.at("mult"), where + ".payoff.mult") : ExtRat(0);
            p.payoff.add = pay.contains("add") ? ext_from_json(pay.at("add"), where + ".payoff.add") : ExtRat(0);
            if (pay.contains("var")) {
                auto name = pay.at("var").get<std::string>();
                auto it = std::find(g.variables.begin(), g.variables.end(), name);
                if (it == g.variables.end()) throw Error(Errc::Parse, where + ".payoff.var: unknown '" + name + "'");
                p.payoff.var = static_cast<std::size_t>(it - g.variables.begin());
            } else if (p.payoff.mult.sign() != 0) {
                throw Error(Errc::Parse, where + ".payoff: nonzero factor needs a variable");
            }
            if (!p.payoff.mult.is_finite()) throw Error(Errc::Parse, where + ".payoff.mult: must be finite");
        } else {
            p.payoff = PayoffTerm::constant(p.owner == 0 ? ExtRat::minus_inf() : ExtRat::plus_inf());
        }
        try {
            g.add_position(std::move(p));
        } catch (const Error& e) {
            throw Error(Errc::Parse, where + ": " + e.what());
        }
    }
    if (doc.contains("moves")) {
        const Json& ms = doc.at("moves");
        for (std::size_t k = 0; k < ms.size(); ++k) {
            std::string where = "moves[" + std::to_string(k) + "]";
            const Json& mj = ms[k];
            auto from = g.find_position(field(mj, "from", where).get<std::string>());
            auto to = g.find_position(field(mj, "to", where).get<std::string>());
            if (!from || !to) throw Error(Errc::UnknownLocation, where + ": unknown endpoint");
            std::vector<Label> labels;
            const Json& ls = field(mj, "labels", where);
            for (std::size_t li = 0; li < ls.size(); ++li)
                labels.push_back(label_from_json(ls[li], g.variables, where + ".labels[" + std::to_string(li) + "]"));
            g.add_move(*from, *to, std::move(labels));
        }
    }
    return g;
}

}  // namespace qmc
