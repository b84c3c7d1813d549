#include "qmc/solver.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <unordered_map>

namespace qmc {

namespace {

using V = std::int64_t;
constexpr V NEG = std::numeric_limits<V>::min();
constexpr V POS = std::numeric_limits<V>::max();

using Set = std::vector<char>;

struct Edge {
    std::size_t to = 0;
    bool inc = false;
    std::uint64_t resets = 0;
    std::size_t move = 0;
    std::size_t label = 0;
};

struct Arena {
    const Game* g = nullptr;
    std::vector<std::vector<Edge>> out;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> in;  // (from, edge index)
    std::vector<std::uint64_t> live;

    std::size_t size() const { return out.size(); }
    int owner(std::size_t p) const { return g->position(p).owner; }
    bool terminal(std::size_t p) const { return out[p].empty(); }
};

Arena build_arena(const Game& g) {
    Arena a;
    a.g = &g;
    a.out.resize(g.size());
    a.in.resize(g.size());
    for (std::size_t m = 0; m < g.moves().size(); ++m) {
        const Move& mv = g.moves()[m];
        for (std::size_t l = 0; l < mv.labels.size(); ++l) {
            const Label& lab = mv.labels[l];
            a.in[mv.to].push_back({mv.from, a.out[mv.from].size()});
            a.out[mv.from].push_back({mv.to, lab.time == Interval::point(1), lab.resets.bits(), m, l});
        }
    }
    // A counter is live at p when some terminal may read it before it is reset.
    a.live.assign(g.size(), 0);
    for (std::size_t p = 0; p < g.size(); ++p) {
        const auto& pay = g.position(p).payoff;
        if (a.terminal(p) && pay.mult != ExtRat(0) && pay.add.is_finite()) a.live[p] = 1ULL << pay.var;
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t p = 0; p < g.size(); ++p)
            for (const auto& e : a.out[p]) {
                std::uint64_t add = a.live[e.to] & ~e.resets & ~a.live[p];
                if (add) {
                    a.live[p] |= add;
                    changed = true;
                }
            }
    }
    return a;
}

// Least set Y containing `initial` such that player nodes have an edge that is base-good or
// step-ok into Y, and opponent nodes have all edges of that kind.
Set force(const Arena& a, int player, const Set& domain, const Set& initial,
          const std::function<bool(const Edge&)>& base_good, const std::function<bool(const Edge&)>& step_ok) {
    const std::size_t n = a.size();
    Set in(n, 0);
    std::vector<std::size_t> pending(n, 0), queue;
    auto enter = [&](std::size_t v) {
        if (!in[v]) {
            in[v] = 1;
            queue.push_back(v);
        }
    };
    for (std::size_t v = 0; v < n; ++v) {
        if (!domain[v]) continue;
        if (initial[v]) {
            enter(v);
            continue;
        }
        if (a.terminal(v)) continue;
        std::size_t bad = 0;
        bool any_base = false;
        for (const auto& e : a.out[v]) {
            if (base_good(e))
                any_base = true;
            else
                ++bad;
        }
        pending[v] = bad;
        if (a.owner(v) == player ? any_base : bad == 0) enter(v);
    }
    for (std::size_t i = 0; i < queue.size(); ++i) {
        std::size_t u = queue[i];
        for (auto [v, ei] : a.in[u]) {
            if (!domain[v] || in[v] || initial[v]) continue;
            const Edge& e = a.out[v][ei];
            if (base_good(e) || !step_ok(e)) continue;
            if (a.owner(v) == player)
                enter(v);
            else if (--pending[v] == 0)
                enter(v);
        }
    }
    return in;
}

// Qualitative min-parity game on positions; player 0 wins even minima.
struct QGraph {
    std::vector<int> owner;
    std::vector<int> prio;
    std::vector<std::vector<std::size_t>> succ;
    std::vector<std::vector<std::size_t>> pred;
};

Set q_attr(const QGraph& q, int player, const Set& dom, const Set& target) {
    const std::size_t n = q.owner.size();
    Set in(n, 0);
    std::vector<std::size_t> cnt(n, 0), queue;
    for (std::size_t v = 0; v < n; ++v) {
        if (!dom[v]) continue;
        for (auto u : q.succ[v])
            if (dom[u]) ++cnt[v];
        if (target[v]) {
            in[v] = 1;
            queue.push_back(v);
        }
    }
    for (std::size_t i = 0; i < queue.size(); ++i)
        for (auto v : q.pred[queue[i]]) {
            if (!dom[v] || in[v]) continue;
            if (q.owner[v] == player || --cnt[v] == 0) {
                in[v] = 1;
                queue.push_back(v);
            }
        }
    return in;
}

std::pair<Set, Set> zielonka(const QGraph& q, const Set& dom) {
    const std::size_t n = q.owner.size();
    Set w0(n, 0), w1(n, 0);
    int d = std::numeric_limits<int>::max();
    for (std::size_t v = 0; v < n; ++v)
        if (dom[v]) d = std::min(d, q.prio[v]);
    if (d == std::numeric_limits<int>::max()) return {w0, w1};
    int alpha = d % 2;
    Set top(n, 0);
    for (std::size_t v = 0; v < n; ++v) top[v] = dom[v] && q.prio[v] == d;
    Set a = q_attr(q, alpha, dom, top);
    Set rest(n, 0);
    for (std::size_t v = 0; v < n; ++v) rest[v] = dom[v] && !a[v];
    auto [r0, r1] = zielonka(q, rest);
    const Set& opp = alpha == 0 ? r1 : r0;
    if (std::none_of(opp.begin(), opp.end(), [](char c) { return c != 0; })) {
        (alpha == 0 ? w0 : w1) = dom;
        return {w0, w1};
    }
    Set b = q_attr(q, 1 - alpha, dom, opp);
    for (std::size_t v = 0; v < n; ++v) rest[v] = dom[v] && !b[v];
    auto [s0, s1] = zielonka(q, rest);
    Set& wo = alpha == 0 ? s1 : s0;
    for (std::size_t v = 0; v < n; ++v)
        if (b[v]) wo[v] = 1;
    return {s0, s1};
}

// Positions from which `player` forces the infinite value of its own sign, whatever the counters.
Set pump_region(const Arena& a, int player) {
    const Game& g = *a.g;
    const std::size_t n = a.size();
    const ExtRat inf = player == 0 ? ExtRat::plus_inf() : ExtRat::minus_inf();
    Set all(n, 1), none(n, 0), w(n, 0);
    Set absorbing(n, 0);
    for (std::size_t p = 0; p < n; ++p)
        absorbing[p] = a.terminal(p) && g.position(p).payoff.add == inf;
    for (;;) {
        Set targets(n, 0);
        for (std::size_t p = 0; p < n; ++p) targets[p] = w[p] || absorbing[p];
        Set win = targets;
        for (std::size_t i = 0; i < g.dim(); ++i) {
            const std::uint64_t bit = 1ULL << i;
            Set pump = targets;
            bool any = false;
            for (std::size_t p = 0; p < n; ++p) {
                const auto& pay = g.position(p).payoff;
                if (!a.terminal(p) || pay.var != i || !pay.add.is_finite()) continue;
                if ((player == 0 && pay.mult > ExtRat(0)) || (player == 1 && pay.mult < ExtRat(0))) {
                    pump[p] = 1;
                    any = true;
                }
            }
            if (!any) continue;
            Set z = force(
                a, player, all, pump, [](const Edge&) { return false; },
                [&](const Edge& e) { return !(e.resets & bit) || targets[e.to]; });
            Set x = z;
            for (;;) {
                Set y = force(
                    a, player, x, none,
                    [&](const Edge& e) { return targets[e.to] || (!(e.resets & bit) && e.inc && x[e.to]); },
                    [&](const Edge& e) { return !(e.resets & bit); });
                if (y == x) break;
                x = y;
            }
            for (std::size_t p = 0; p < n; ++p)
                if (x[p]) win[p] = 1;
        }
        QGraph q;
        q.owner.resize(n);
        q.prio.resize(n);
        q.succ.resize(n);
        q.pred.resize(n);
        const int fav = player, unfav = 1 - player;
        for (std::size_t p = 0; p < n; ++p) {
            q.owner[p] = g.position(p).owner;
            if (win[p] || a.terminal(p)) {
                q.prio[p] = win[p] ? fav : unfav;
                q.succ[p] = {p};
            } else {
                q.prio[p] = g.position(p).priority;
                for (const auto& e : a.out[p]) q.succ[p].push_back(e.to);
                std::sort(q.succ[p].begin(), q.succ[p].end());
                q.succ[p].erase(std::unique(q.succ[p].begin(), q.succ[p].end()), q.succ[p].end());
            }
        }
        for (std::size_t p = 0; p < n; ++p)
            for (auto u : q.succ[p]) q.pred[u].push_back(p);
        auto [w0, w1] = zielonka(q, all);
        Set next = player == 0 ? w0 : w1;
        if (next == w) return w;
        w = next;
    }
}

struct KeyHash {
    std::size_t operator()(unsigned __int128 k) const {
        auto lo = static_cast<std::uint64_t>(k), hi = static_cast<std::uint64_t>(k >> 64);
        return std::hash<std::uint64_t>()(lo ^ (hi * 0x9e3779b97f4a7c15ULL));
    }
};

struct ConfigGraph {
    long cap = 0;
    std::size_t dim = 0;
    std::vector<std::uint32_t> pos;
    std::vector<std::uint16_t> ctr;  // dim per configuration, cap stands for saturated
    std::vector<std::size_t> off;     // successors of c: succ[off[c]..off[c+1])
    std::vector<std::uint32_t> succ;
    std::vector<std::uint32_t> via;   // arena edge index per successor
    std::vector<std::size_t> poff;
    std::vector<std::uint32_t> preds;

    std::size_t size() const { return pos.size(); }
};

std::optional<ConfigGraph> build_configs(const Arena& a, const GameState& s0, long cap, const Set& wm,
                                         const Set& wp, std::size_t limit) {
    const Game& g = *a.g;
    ConfigGraph cg;
    cg.cap = cap;
    cg.dim = g.dim();
    std::unordered_map<unsigned __int128, std::uint32_t, KeyHash> ids;
    const unsigned __int128 base = static_cast<unsigned __int128>(cap + 1);
    std::vector<std::uint16_t> buf(cg.dim);
    auto intern = [&](std::size_t p, const std::vector<std::uint16_t>& c) -> std::optional<std::uint32_t> {
        unsigned __int128 key = p;
        for (std::size_t i = 0; i < cg.dim; ++i) key = key * base + c[i];
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        if (cg.pos.size() >= limit) return std::nullopt;
        auto id = static_cast<std::uint32_t>(cg.pos.size());
        ids.emplace(key, id);
        cg.pos.push_back(static_cast<std::uint32_t>(p));
        cg.ctr.insert(cg.ctr.end(), c.begin(), c.end());
        return id;
    };
    for (std::size_t i = 0; i < cg.dim; ++i) {
        long v = static_cast<long>(s0.values[i].finite().get_num().get_si());
        buf[i] = (a.live[s0.position] >> i & 1U) ? static_cast<std::uint16_t>(std::min(v, cap)) : 0;
    }
    if (!intern(s0.position, buf)) return std::nullopt;
    cg.off.push_back(0);
    for (std::size_t c = 0; c < cg.pos.size(); ++c) {
        std::size_t p = cg.pos[c];
        if (!wm[p] && !wp[p]) {
            for (std::size_t ei = 0; ei < a.out[p].size(); ++ei) {
                const Edge& e = a.out[p][ei];
                for (std::size_t i = 0; i < cg.dim; ++i) {
                    long v = cg.ctr[c * cg.dim + i];
                    if (e.resets >> i & 1U)
                        v = 0;
                    else if (e.inc)
                        v = std::min(v + 1, cap);
                    buf[i] = (a.live[e.to] >> i & 1U) ? static_cast<std::uint16_t>(v) : 0;
                }
                auto id = intern(e.to, buf);
                if (!id) return std::nullopt;
                cg.succ.push_back(*id);
                cg.via.push_back(static_cast<std::uint32_t>(ei));
            }
        }
        cg.off.push_back(cg.succ.size());
    }
    std::vector<std::size_t> deg(cg.size() + 1, 0);
    for (auto u : cg.succ) ++deg[u + 1];
    for (std::size_t i = 0; i < cg.size(); ++i) deg[i + 1] += deg[i];
    cg.poff = deg;
    cg.preds.resize(cg.succ.size());
    for (std::size_t c = 0; c < cg.size(); ++c)
        for (std::size_t k = cg.off[c]; k < cg.off[c + 1]; ++k) cg.preds[deg[cg.succ[k]]++] = static_cast<std::uint32_t>(c);
    return cg;
}

// Strongly connected components in reverse topological order (sinks first).
std::vector<std::vector<std::uint32_t>> components(const ConfigGraph& cg) {
    const std::size_t n = cg.size();
    const std::uint32_t unset = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> index(n, unset), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<std::uint32_t> stack;
    std::vector<std::pair<std::uint32_t, std::size_t>> call;
    std::vector<std::vector<std::uint32_t>> out;
    std::uint32_t counter = 0;
    for (std::uint32_t root = 0; root < n; ++root) {
        if (index[root] != unset) continue;
        call.push_back({root, cg.off[root]});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            auto& [v, k] = call.back();
            if (k < cg.off[v + 1]) {
                std::uint32_t u = cg.succ[k++];
                if (index[u] == unset) {
                    index[u] = low[u] = counter++;
                    stack.push_back(u);
                    on_stack[u] = 1;
                    call.push_back({u, cg.off[u]});
                } else if (on_stack[u]) {
                    low[v] = std::min(low[v], index[u]);
                }
                continue;
            }
            std::uint32_t done = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
            if (low[done] == index[done]) {
                std::vector<std::uint32_t> comp;
                std::uint32_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp.push_back(w);
                } while (w != done);
                out.push_back(std::move(comp));
            }
        }
    }
    return out;
}

V checked(__int128 x) {
    if (x <= static_cast<__int128>(NEG) || x >= static_cast<__int128>(POS))
        throw Error(Errc::Limit, "payoff value overflows the solver range");
    return static_cast<V>(x);
}

V scaled(const Rational& q, const Integer& den) {
    Rational s = q * Rational(den);
    if (s.get_den() != 1 || !s.get_num().fits_slong_p()) throw Error(Errc::Limit, "payoff constant out of range");
    return s.get_num().get_si();
}

struct Envelopes {
    std::vector<V> lo;
    std::vector<V> hi;
};

class FixpointSolver {
public:
    FixpointSolver(const Arena& a, const ConfigGraph& cg, const Set& wm, const Set& wp, const Integer& den,
                   SolveStats& stats)
        : a_(a), cg_(cg), wm_(wm), wp_(wp), stats_(stats) {
        const Game& g = *a.g;
        for (const auto& p : g.positions()) {
            mult_.push_back(scaled(p.payoff.mult.finite(), den));
            add_.push_back(p.payoff.add.is_finite() ? scaled(p.payoff.add.finite(), den)
                                                    : (p.payoff.add.sign() > 0 ? POS : NEG));
        }
        comp_.assign(cg.size(), 0);
        level_.assign(cg.size(), -1);
        mark_.assign(cg.size(), 0);
    }

    Envelopes run() {
        auto comps = components(cg_);
        stats_.components = comps.size();
        Envelopes env;
        env.lo.assign(cg_.size(), 0);
        env.hi.assign(cg_.size(), 0);
        for (std::size_t k = 0; k < comps.size(); ++k)
            for (auto v : comps[k]) comp_[v] = static_cast<std::uint32_t>(k);
        for (std::size_t k = 0; k < comps.size(); ++k) {
            solve_component(comps[k], static_cast<std::uint32_t>(k), env.lo, true);
            solve_component(comps[k], static_cast<std::uint32_t>(k), env.hi, false);
        }
        return env;
    }

private:
    V terminal_value(std::uint32_t c, bool lower) const {
        std::size_t p = cg_.pos[c];
        if (wm_[p]) return NEG;
        if (wp_[p]) return POS;
        V add = add_[p], mult = mult_[p];
        if (add == NEG || add == POS || mult == 0) return add;
        long v = cg_.ctr[c * cg_.dim + a_.g->position(p).payoff.var];
        if (v < cg_.cap) return checked(static_cast<__int128>(mult) * v + add);
        V edge = checked(static_cast<__int128>(mult) * cg_.cap + add);
        if (mult > 0) return lower ? edge : POS;
        return lower ? NEG : edge;
    }

    V step(std::uint32_t c, const std::vector<V>& val) const {
        bool max = a_.owner(cg_.pos[c]) == 0;
        V best = max ? NEG : POS;
        for (std::size_t k = cg_.off[c]; k < cg_.off[c + 1]; ++k) {
            V x = val[cg_.succ[k]];
            best = max ? std::max(best, x) : std::min(best, x);
        }
        return best;
    }

    void solve_component(const std::vector<std::uint32_t>& comp, std::uint32_t id, std::vector<V>& val, bool lower) {
        if (comp.size() == 1) {
            std::uint32_t c = comp[0];
            bool loop = false;
            for (std::size_t k = cg_.off[c]; k < cg_.off[c + 1]; ++k) loop = loop || cg_.succ[k] == c;
            if (cg_.off[c] == cg_.off[c + 1]) {
                val[c] = terminal_value(c, lower);
                return;
            }
            if (!loop) {
                val[c] = step(c, val);
                return;
            }
        }
        // Compress priorities: drop gaps and merge neighbours of equal parity.
        std::vector<int> prios;
        for (auto c : comp) prios.push_back(a_.g->position(cg_.pos[c]).priority);
        std::sort(prios.begin(), prios.end());
        prios.erase(std::unique(prios.begin(), prios.end()), prios.end());
        std::vector<int> level_of_prio(prios.size());
        levels_.clear();
        for (std::size_t i = 0; i < prios.size(); ++i) {
            if (i == 0 || prios[i] % 2 != prios[i - 1] % 2) levels_.push_back({prios[i], {}});
            level_of_prio[i] = static_cast<int>(levels_.size()) - 1;
        }
        for (auto c : comp) {
            int pr = a_.g->position(cg_.pos[c]).priority;
            int lv = level_of_prio[std::lower_bound(prios.begin(), prios.end(), pr) - prios.begin()];
            level_[c] = lv;
            levels_[lv].members.push_back(c);
        }
        current_ = id;
        solve_level(0, val);
    }

    void solve_level(std::size_t d, std::vector<V>& val) {
        auto& lv = levels_[d];
        const bool even = lv.prio % 2 == 0;
        for (auto c : lv.members) val[c] = even ? POS : NEG;
        std::size_t& rounds = stats_.rounds[lv.prio];
        if (d + 1 == levels_.size()) {
            std::vector<std::uint32_t> work(lv.members.rbegin(), lv.members.rend());
            for (auto c : lv.members) mark_[c] = 1;
            while (!work.empty()) {
                std::uint32_t c = work.back();
                work.pop_back();
                mark_[c] = 0;
                V nv = step(c, val);
                if (nv == val[c]) continue;
                val[c] = nv;
                ++rounds;
                for (std::size_t k = cg_.poff[c]; k < cg_.poff[c + 1]; ++k) {
                    std::uint32_t u = cg_.preds[k];
                    if (comp_[u] == current_ && level_[u] == static_cast<int>(d) && !mark_[u]) {
                        mark_[u] = 1;
                        work.push_back(u);
                    }
                }
            }
            return;
        }
        std::vector<V> next(lv.members.size());
        for (;;) {
            solve_level(d + 1, val);
            bool changed = false;
            for (std::size_t i = 0; i < lv.members.size(); ++i) {
                next[i] = step(lv.members[i], val);
                changed = changed || next[i] != val[lv.members[i]];
            }
            if (!changed) return;
            ++rounds;
            for (std::size_t i = 0; i < lv.members.size(); ++i) val[lv.members[i]] = next[i];
        }
    }

    struct Level {
        int prio;
        std::vector<std::uint32_t> members;
    };

    const Arena& a_;
    const ConfigGraph& cg_;
    const Set& wm_;
    const Set& wp_;
    SolveStats& stats_;
    std::vector<V> mult_, add_;
    std::vector<std::uint32_t> comp_;
    std::vector<int> level_;
    std::vector<Level> levels_;
    std::vector<char> mark_;
    std::uint32_t current_ = 0;
};

GameValue to_value(V v, const Integer& den) {
    if (v == NEG) return GameValue::minus_inf();
    if (v == POS) return GameValue::plus_inf();
    return GameValue(Rational(Integer(static_cast<long>(v)), den));
}

std::string config_name(const Game& g, const ConfigGraph& cg, std::uint32_t c) {
    std::string s = g.position(cg.pos[c]).name + " [";
    for (std::size_t i = 0; i < cg.dim; ++i) {
        if (i) s += ",";
        long v = cg.ctr[c * cg.dim + i];
        s += v == cg.cap ? std::string("w") : std::to_string(v);
    }
    return s + "]";
}

}  // namespace

const GameValue& SolveResult::value() const {
    if (kind != Kind::Exact) throw Error(Errc::PreconditionViolated, "result is not exact");
    return lo;
}

std::string SolveResult::str() const {
    switch (kind) {
        case Kind::Exact: return "Exact(" + lo.str() + ")";
        case Kind::Bounds: return "Bounds(" + lo.str() + ", " + hi.str() + ")";
        default: return "Inconclusive(" + diagnostic + ")";
    }
}

SolveResult solve_counter_reset(const Game& g, const GameState& s0, const SolveConfig& cfg) {
    auto problems = check_counter_reset(g);
    if (!problems.empty()) throw Error(Errc::NotCounterReset, problems.front());
    if (cfg.counter_cap < 1 || cfg.horizon < 1 || cfg.max_cap < cfg.counter_cap)
        throw Error(Errc::PreconditionViolated, "solver caps must be positive and ordered");
    if (cfg.max_cap > 60000) throw Error(Errc::Limit, "counter cap too large");
    if (g.dim() > 5) throw Error(Errc::Limit, "at most 5 counters are supported");
    if (s0.position >= g.size() || s0.values.size() != g.dim())
        throw Error(Errc::CounterOutOfRange, "start state does not match the game");
    for (const auto& v : s0.values)
        if (!v.is_finite() || v.finite().get_den() != 1 || v.finite() < 0 || v.finite() >= cfg.counter_cap)
            throw Error(Errc::CounterOutOfRange, "start counter " + v.str() + " outside [0, B)");

    Integer den = 1;
    for (const auto& p : g.positions()) {
        den = lcm_of(den, p.payoff.mult.finite().get_den());
        if (p.payoff.add.is_finite()) den = lcm_of(den, p.payoff.add.finite().get_den());
    }

    SolveResult res;
    Arena a = build_arena(g);
    Set wm = pump_region(a, 1);
    Set wp = pump_region(a, 0);
    res.stats.pumped_minus = static_cast<std::size_t>(std::count(wm.begin(), wm.end(), 1));
    res.stats.pumped_plus = static_cast<std::size_t>(std::count(wp.begin(), wp.end(), 1));
    if (wm[s0.position] || wp[s0.position]) {
        res.kind = SolveResult::Kind::Exact;
        res.lo = res.hi = wm[s0.position] ? GameValue::minus_inf() : GameValue::plus_inf();
        return res;
    }
    bool ran = false;
    for (long cap = cfg.counter_cap; cap <= cfg.max_cap; cap *= 2) {
        auto cg = build_configs(a, s0, cap, wm, wp, cfg.config_limit);
        if (!cg) {
            res.diagnostic = "configuration graph exceeds " + std::to_string(cfg.config_limit) + " at B=" +
                             std::to_string(cap);
            break;
        }
        SolveStats stats;
        stats.pumped_minus = res.stats.pumped_minus;
        stats.pumped_plus = res.stats.pumped_plus;
        stats.cap = cap;
        stats.configurations = cg->size();
        FixpointSolver fs(a, *cg, wm, wp, den, stats);
        Envelopes env = fs.run();
        GameValue lo = to_value(env.lo[0], den), hi = to_value(env.hi[0], den);
        if (lo > hi) throw Error(Errc::PreconditionViolated, "solver envelopes crossed");
        if (!ran || lo > res.lo) res.lo = lo;
        if (!ran || hi < res.hi) res.hi = hi;
        ran = true;
        if (res.lo == res.hi) {
            // Witness: a value-attaining successor for every configuration with a choice.
            for (std::uint32_t c = 0; c < cg->size() && stats.witness.size() < 256; ++c) {
                if (cg->off[c + 1] - cg->off[c] < 2) continue;
                for (std::size_t k = cg->off[c]; k < cg->off[c + 1]; ++k)
                    if (env.lo[cg->succ[k]] == env.lo[c]) {
                        stats.witness.push_back({config_name(g, *cg, c), config_name(g, *cg, cg->succ[k])});
                        break;
                    }
            }
        }
        res.stats = std::move(stats);
        if (res.lo == res.hi) break;
    }
    if (!ran) {
        res.kind = SolveResult::Kind::Inconclusive;
        return res;
    }
    if (res.lo == res.hi)
        res.kind = SolveResult::Kind::Exact;
    else if (res.lo == GameValue::minus_inf() && res.hi == GameValue::plus_inf()) {
        res.kind = SolveResult::Kind::Inconclusive;
        if (res.diagnostic.empty()) res.diagnostic = "envelopes unbounded on both sides";
    } else
        res.kind = SolveResult::Kind::Bounds;
    return res;
}

OracleResult minimax_oracle(const Game& g, const GameState& s0, long horizon) {
    if (horizon < 1) throw Error(Errc::PreconditionViolated, "horizon must be positive");
    std::vector<GameState> path;
    std::function<OracleResult(const GameState&, long)> go = [&](const GameState& s, long depth) -> OracleResult {
        for (std::size_t j = 0; j < path.size(); ++j)
            if (path[j] == s) {
                int lowest = g.position(s.position).priority;
                for (std::size_t k = j; k < path.size(); ++k)
                    lowest = std::min(lowest, g.position(path[k].position).priority);
                GameValue v = lowest % 2 == 0 ? GameValue::plus_inf() : GameValue::minus_inf();
                return {v, v};
            }
        Successors succ = game_successors(g, s);
        if (succ.choices.empty()) {
            GameValue v = g.position(s.position).payoff.eval(s.values);
            return {v, v};
        }
        if (depth == horizon) return {GameValue::minus_inf(), GameValue::plus_inf()};
        auto next = succ.states(g, s);
        bool max = g.position(s.position).owner == 0;
        OracleResult best{max ? GameValue::minus_inf() : GameValue::plus_inf(),
                          max ? GameValue::minus_inf() : GameValue::plus_inf()};
        path.push_back(s);
        for (const auto& t : next) {
            OracleResult r = go(t, depth + 1);
            best.lo = max ? ext_max(best.lo, r.lo) : ext_min(best.lo, r.lo);
            best.hi = max ? ext_max(best.hi, r.hi) : ext_min(best.hi, r.hi);
        }
        path.pop_back();
        return best;
    };
    return go(s0, 0);
}

std::string Classified::str() const {
    switch (kind) {
        case Kind::PlusInf: return "PlusInf";
        case Kind::MinusInf: return "MinusInf";
        case Kind::Approx: return "Approx(" + value.get_str() + ")";
        default: return "Inconclusive";
    }
}

Classified classify_value(const SolveResult& res, const ScaleCertificate& cert, const Integer& n) {
    Classified out;
    Rational div(cert.divisor());
    Rational unit(1, 1);
    unit /= Rational(n);
    if (res.kind == SolveResult::Kind::Exact) {
        if (!res.lo.is_finite()) {
            out.kind = res.lo.sign() > 0 ? Classified::Kind::PlusInf : Classified::Kind::MinusInf;
            return out;
        }
        out.kind = Classified::Kind::Approx;
        out.value = res.lo.finite() / div;
        out.guarantee = unit;
        return out;
    }
    if (res.kind == SolveResult::Kind::Bounds && res.lo.is_finite() && res.hi.is_finite()) {
        Rational lo = res.lo.finite() / div, hi = res.hi.finite() / div;
        Rational width = hi - lo;
        if (width <= 2 * unit) {
            out.kind = Classified::Kind::Approx;
            out.value = (lo + hi) / 2;
            out.guarantee = unit + width / 2;
            return out;
        }
        out.diagnostic = "bounds [" + lo.get_str() + ", " + hi.get_str() + "] wider than 2/n";
        return out;
    }
    out.diagnostic = res.kind == SolveResult::Kind::Bounds ? "unbounded envelope: " + res.str() : res.diagnostic;
    return out;
}

}  // namespace qmc
