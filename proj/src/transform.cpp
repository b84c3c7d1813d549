#include "qmc/transform.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

namespace qmc {

namespace {

bool observed(const Game& g, std::size_t p, std::size_t i) {
    const Position& pos = g.position(p);
    if (pos.payoff.mult.sign() != 0 && pos.payoff.var == i) return true;
    for (auto m : g.out(p))
        for (const auto& l : g.moves()[m].labels)
            if (!l.constraints[i].is_everything()) return true;
    return false;
}

Game rebuild(const Game& g, const std::vector<Position>& positions,
             const std::function<Label(const Move&, const Label&)>& relabel) {
    Game out;
    out.variables = g.variables;
    for (const auto& p : positions) out.add_position(p);
    for (const auto& m : g.moves()) {
        std::vector<Label> labels;
        for (const auto& l : m.labels) labels.push_back(relabel(m, l));
        out.add_move(m.from, m.to, std::move(labels));
    }
    return out;
}

bool is_integer(const ExtRat& x) { return !x.is_finite() || x.finite().get_den() == 1; }

bool integer_interval(const Interval& i) { return is_integer(i.lo().value) && is_integer(i.hi().value); }

void require_flat(const Game& g, const char* op) {
    if (!is_flat(g)) throw Error(Errc::NotFlat, std::string(op) + " requires a flat game");
}

Integer abs_int(const Integer& z) { return z < 0 ? Integer(-z) : z; }

std::string sign_string(const std::vector<int>& s) {
    std::string out;
    for (int v : s) out += v > 0 ? '+' : v < 0 ? '-' : '0';
    return out;
}

// Iterates all vectors in {lo..hi}^dim.
std::vector<std::vector<int>> all_vectors(std::size_t dim, int lo, int hi) {
    std::vector<std::vector<int>> out{{}};
    for (std::size_t k = 0; k < dim; ++k) {
        std::vector<std::vector<int>> next;
        for (const auto& v : out)
            for (int x = lo; x <= hi; ++x) {
                auto w = v;
                w.push_back(x);
                next.push_back(std::move(w));
            }
        out = std::move(next);
    }
    return out;
}

// Collects labels per (from, to) and emits moves in a deterministic order.
class MoveCollector {
public:
    void add(std::size_t from, std::size_t to, const Label& l) {
        auto& labels = moves_[{from, to}];
        if (std::find(labels.begin(), labels.end(), l) == labels.end()) labels.push_back(l);
    }
    void emit(Game& g) {
        for (auto& [key, labels] : moves_) g.add_move(key.first, key.second, std::move(labels));
        moves_.clear();
    }

private:
    std::map<std::pair<std::size_t, std::size_t>, std::vector<Label>> moves_;
};

// Interns product positions (base, tag) in creation order.
template <class Tag>
class ProductIndex {
public:
    std::pair<std::size_t, bool> intern(std::size_t base, const Tag& tag) {
        auto [it, fresh] = index_.emplace(std::make_pair(base, tag), keys_.size());
        if (fresh) keys_.push_back({base, tag});
        return {it->second, fresh};
    }
    const std::pair<std::size_t, Tag>& key(std::size_t k) const { return keys_[k]; }
    std::size_t size() const { return keys_.size(); }

private:
    std::map<std::pair<std::size_t, Tag>, std::size_t> index_;
    std::vector<std::pair<std::size_t, Tag>> keys_;
};

// Target sign options for one variable.
std::vector<int> sign_options(int i, int d) {
    if (d == 0) return {i};
    if (i == -d) return {-1, 0, 1};
    return {d};
}

void sign_targets(const std::vector<int>& i, int d, VarSet resets, std::set<std::vector<int>>& out) {
    std::vector<std::vector<int>> acc{{}};
    for (std::size_t k = 0; k < i.size(); ++k) {
        std::vector<int> opts = resets.contains(k) ? std::vector<int>{0} : sign_options(i[k], d);
        std::vector<std::vector<int>> next;
        for (const auto& v : acc)
            for (int o : opts) {
                auto w = v;
                w.push_back(o);
                next.push_back(std::move(w));
            }
        acc = std::move(next);
    }
    out.insert(acc.begin(), acc.end());
}

// Does an integer-endpoint interval contain c + sign*delta for all small delta > 0?
// c = -1 encodes a counter above b.
bool contains_approx(const Interval& iv, long c, int sign) {
    if (c < 0) return !iv.hi().value.is_finite();
    ExtRat x(c);
    if (iv.lo().value.is_finite()) {
        auto cmp = x <=> iv.lo().value;
        if (cmp < 0) return false;
        if (cmp == 0 && (iv.lo().closed ? sign < 0 : sign <= 0)) return false;
    }
    if (iv.hi().value.is_finite()) {
        auto cmp = x <=> iv.hi().value;
        if (cmp > 0) return false;
        if (cmp == 0 && (iv.hi().closed ? sign > 0 : sign >= 0)) return false;
    }
    return true;
}

long to_long(const ExtRat& x) { return x.finite().get_num().get_si(); }

}  // namespace

bool is_flat(const Game& g) {
    for (const auto& p : g.positions())
        for (const auto& r : p.rates)
            if (r != 1) return false;
    return true;
}

Game flatten(const Game& g) {
    auto violations = validate_initialised(g);
    if (!violations.empty()) throw Error(Errc::NotInitialised, violations.front().message);
    std::vector<Position> positions = g.positions();
    for (std::size_t p = 0; p < g.size(); ++p) {
        for (std::size_t i = 0; i < g.dim(); ++i) {
            const Rational& a = g.position(p).rates[i];
            if (a == 0 && observed(g, p, i))
                throw Error(Errc::ZeroRateDivision, "position " + g.position(p).name + ": " + g.variables[i] +
                                                        " has rate 0 but is observed");
            if (positions[p].payoff.var == i && a != 0) positions[p].payoff.mult *= ExtRat(a);
        }
        positions[p].rates.assign(g.dim(), Rational(1));
    }
    return rebuild(g, positions, [&](const Move& m, const Label& l) {
        Label out = l;
        const auto& rates = g.position(m.from).rates;
        for (std::size_t i = 0; i < g.dim(); ++i)
            if (rates[i] != 0 && rates[i] != 1) out.constraints[i] = l.constraints[i].scale(ExtRat(Rational(1 / rates[i])));
        return out;
    });
}

Game scale_game(const Game& g, const Rational& q) {
    require_flat(g, "scale_game");
    if (q <= 0) throw Error(Errc::ZeroScale, "scale factor must be positive");
    ExtRat f(q);
    std::vector<Position> positions = g.positions();
    for (auto& p : positions) p.payoff.add *= f;
    return rebuild(g, positions, [&](const Move&, const Label& l) {
        Label out = l;
        out.time = l.time.scale(f);
        for (auto& c : out.constraints) c = c.scale(f);
        return out;
    });
}

Integerised integerise(const Game& g) {
    require_flat(g, "integerise");
    Integerised res;
    Integer r = 1;
    for (const auto& p : g.positions()) r = lcm_of(r, p.payoff.mult.finite().get_den());
    std::vector<Position> positions = g.positions();
    for (auto& p : positions) {
        p.payoff.mult *= ExtRat(r);
        p.payoff.add *= ExtRat(r);
    }
    Integer q = 1;
    auto note = [&q](const ExtRat& x) {
        if (x.is_finite()) q = lcm_of(q, x.finite().get_den());
    };
    for (const auto& p : positions) note(p.payoff.add);
    for (const auto& m : g.moves())
        for (const auto& l : m.labels) {
            note(l.time.lo().value);
            note(l.time.hi().value);
            for (const auto& c : l.constraints) {
                note(c.lo().value);
                note(c.hi().value);
            }
        }
    Game rescaled = rebuild(g, positions, [](const Move&, const Label& l) { return l; });
    res.game = scale_game(rescaled, Rational(q));
    res.cert.r = r;
    res.cert.q = q;
    return res;
}

StageSizes stage_sizes(const Game& g) { return {g.size(), g.moves().size(), g.label_count()}; }

CounterResetResult to_counter_reset(const Game& g, const Integer& n, std::size_t start_position,
                                    const ScaleCertificate& cert, const CounterResetOptions& opts) {
    require_flat(g, "to_counter_reset");
    if (n < 1) throw Error(Errc::PreconditionViolated, "precision must be positive");
    Integer m = 1;
    for (const auto& p : g.positions()) {
        if (!is_integer(p.payoff.mult) || !is_integer(p.payoff.add))
            throw Error(Errc::NonIntegerData, "payoff of " + p.name + " is not integral");
        m = std::max(m, abs_int(p.payoff.mult.finite().get_num()));
    }
    for (const auto& mv : g.moves())
        for (const auto& l : mv.labels) {
            bool ok = integer_interval(l.time);
            for (const auto& c : l.constraints) ok = ok && integer_interval(c);
            if (!ok) throw Error(Errc::NonIntegerData, "non-integer interval endpoint");
        }

    CounterResetResult res;
    res.cert = cert;
    res.cert.n = n;
    res.cert.m = m;
    res.scaled = scale_game(g, Rational(n * m));
    const Game& g2 = res.scaled;
    const std::size_t dim = g2.dim();

    Integer bz = 0;
    for (const auto& mv : g2.moves())
        for (const auto& l : mv.labels)
            for (const auto& c : l.constraints)
                for (const auto* e : {&c.lo().value, &c.hi().value})
                    if (e->is_finite()) bz = std::max(bz, abs_int(e->finite().get_num()));
    res.b = bz;
    if (!bz.fits_slong_p() || bz > 1000000) throw Error(Errc::Limit, "constraint bound too large");
    const long b = bz.get_si();

    // Stage 2: sign product.
    ProductIndex<std::vector<int>> sidx;
    Game& sg = res.sign;
    sg.variables = g2.variables;
    std::deque<std::size_t> work;
    auto sign_position = [&](std::size_t base, const std::vector<int>& signs) {
        auto [k, fresh] = sidx.intern(base, signs);
        if (fresh) {
            Position p = g2.position(base);
            p.name += "^" + sign_string(signs);
            sg.add_position(std::move(p));
            res.sign_of.push_back(signs);
            res.sign_base.push_back(base);
            work.push_back(k);
        }
        return k;
    };
    if (opts.full_product) {
        auto vectors = all_vectors(dim, -1, 1);
        for (std::size_t v = 0; v < g2.size(); ++v)
            for (const auto& s : vectors) sign_position(v, s);
    } else {
        sign_position(start_position, std::vector<int>(dim, 0));
    }
    MoveCollector sign_moves;
    while (!work.empty()) {
        std::size_t k = work.front();
        work.pop_front();
        auto [base, signs] = sidx.key(k);
        for (auto mi : g2.out(base)) {
            const Move& mv = g2.moves()[mi];
            for (const auto& l : mv.labels) {
                const Interval& t = l.time;
                long lo = to_long(t.lo().value);
                bool bounded = t.hi().value.is_finite();
                long hi = bounded ? to_long(t.hi().value) : lo + 1;
                // (time label, direction) pairs
                std::vector<std::pair<Interval, int>> steps;
                for (long x = lo; x <= hi; ++x) {
                    bool tail = !bounded && x == hi;
                    Interval time = tail ? Interval::at_least(ExtRat(x)) : Interval::point(ExtRat(x));
                    for (int d = -1; d <= 1; ++d) {
                        if (!tail) {
                            if (x == lo && (d < 0 || (d == 0 && !t.lo().closed))) continue;
                            if (bounded && x == hi && (d > 0 || (d == 0 && !t.hi().closed))) continue;
                            if (lo == hi && d != 0) continue;
                        }
                        steps.emplace_back(time, d);
                    }
                }
                for (const auto& [time, d] : steps) {
                    std::set<std::vector<int>> targets;
                    sign_targets(signs, d, l.resets, targets);
                    for (const auto& j : targets) {
                        Label out = l;
                        out.time = time;
                        sign_moves.add(k, sign_position(mv.to, j), out);
                    }
                }
            }
        }
    }
    sign_moves.emit(sg);

    // Stage 3: memory product resolving constraints.
    ProductIndex<std::vector<int>> midx;
    Game& mg = res.memory;
    mg.variables = g2.variables;
    if (opts.full_product) {
        double count = static_cast<double>(sg.size());
        for (std::size_t i = 0; i < dim; ++i) count *= static_cast<double>(b + 2);
        if (count > 2e6) throw Error(Errc::Limit, "full memory product too large");
    }
    auto mem_string = [&](const std::vector<int>& mem) {
        std::string s;
        for (std::size_t i = 0; i < mem.size(); ++i) {
            if (i) s += ',';
            s += mem[i] > b ? std::string(">") + std::to_string(b) : std::to_string(mem[i]);
        }
        return s;
    };
    auto memory_position = [&](std::size_t base, const std::vector<int>& mem) {
        auto [k, fresh] = midx.intern(base, mem);
        if (fresh) {
            Position p = sg.position(base);
            p.name += "|" + mem_string(mem);
            mg.add_position(std::move(p));
            res.memory_of.push_back(mem);
            res.memory_base.push_back(base);
            work.push_back(k);
        }
        return k;
    };
    if (opts.full_product) {
        auto vectors = all_vectors(dim, 0, static_cast<int>(b + 1));
        for (std::size_t v = 0; v < sg.size(); ++v)
            for (const auto& mem : vectors) memory_position(v, mem);
    } else {
        memory_position(0, std::vector<int>(dim, 0));
    }
    MoveCollector mem_moves;
    const Label trivial = empty_label(dim);
    auto advance_mem = [&](const std::vector<int>& mem, long l, VarSet resets) {
        std::vector<int> out(dim);
        for (std::size_t i = 0; i < dim; ++i)
            out[i] = resets.contains(i) ? 0 : static_cast<int>(std::min<long>(mem[i] + l, b + 1));
        return out;
    };
    while (!work.empty()) {
        std::size_t k = work.front();
        work.pop_front();
        auto [base, mem] = midx.key(k);
        const auto& signs = res.sign_of[base];
        for (auto mi : sg.out(base)) {
            const Move& mv = sg.moves()[mi];
            for (const auto& l : mv.labels) {
                bool ok = true;
                for (std::size_t i = 0; i < dim && ok; ++i)
                    ok = contains_approx(l.constraints[i], mem[i] > b ? -1 : mem[i], signs[i]);
                if (!ok) continue;
                Label out = trivial;
                out.resets = l.resets;
                long lo = to_long(l.time.lo().value);
                if (l.time.is_point()) {
                    out.time = l.time;
                    mem_moves.add(k, memory_position(mv.to, advance_mem(mem, lo, l.resets)), out);
                    continue;
                }
                long sat = lo;
                for (std::size_t i = 0; i < dim; ++i)
                    if (!l.resets.contains(i) && mem[i] <= b) sat = std::max<long>(sat, b + 1 - mem[i]);
                for (long x = lo; x < sat; ++x) {
                    out.time = Interval::point(ExtRat(x));
                    mem_moves.add(k, memory_position(mv.to, advance_mem(mem, x, l.resets)), out);
                }
                out.time = Interval::at_least(ExtRat(sat));
                mem_moves.add(k, memory_position(mv.to, advance_mem(mem, sat, l.resets)), out);
            }
        }
    }
    mem_moves.emit(mg);

    // Stage 4: unit decomposition.
    Game& cg = res.counter_reset;
    cg.variables = g2.variables;
    const int top = mg.max_priority();
    for (const auto& p : mg.positions()) cg.add_position(p);
    MoveCollector unit_moves;
    Label zero = trivial, one = trivial;
    one.time = Interval::point(1);
    std::map<std::pair<std::size_t, long>, std::size_t> ladders, loops;
    auto fresh_position = [&](std::size_t src, const std::string& suffix, int priority) {
        Position p;
        p.name = mg.position(src).name + suffix;
        p.owner = mg.position(src).owner;
        p.priority = priority;
        p.rates.assign(dim, Rational(1));
        p.payoff = PayoffTerm::constant(p.owner == 0 ? ExtRat::minus_inf() : ExtRat::plus_inf());
        return cg.add_position(std::move(p));
    };
    std::function<std::size_t(std::size_t, long)> ladder = [&](std::size_t src, long depth) -> std::size_t {
        if (depth == 0) return src;
        auto it = ladders.find({src, depth});
        if (it != ladders.end()) return it->second;
        std::size_t prev = ladder(src, depth - 1);
        std::size_t p = fresh_position(src, "~" + std::to_string(depth), top);
        ladders[{src, depth}] = p;
        unit_moves.add(prev, p, one);
        return p;
    };
    auto loop = [&](std::size_t src, long from) {
        auto it = loops.find({src, from});
        if (it != loops.end()) return it->second;
        int owner = mg.position(src).owner;
        int priority = (top % 2 == (owner == 0 ? 1 : 0)) ? top : top + 1;
        std::size_t p = fresh_position(src, "~loop" + std::to_string(from), priority);
        loops[{src, from}] = p;
        unit_moves.add(ladder(src, from), p, zero);
        unit_moves.add(p, p, one);
        return p;
    };
    for (const auto& mv : mg.moves()) {
        for (const auto& l : mv.labels) {
            long lo = to_long(l.time.lo().value);
            Label exit = trivial;
            exit.resets = l.resets;
            if (!l.time.is_point()) {
                exit.time = Interval::point(0);
                unit_moves.add(loop(mv.from, lo), mv.to, exit);
            } else if (lo == 0) {
                exit.time = Interval::point(0);
                unit_moves.add(mv.from, mv.to, exit);
            } else {
                exit.time = Interval::point(1);
                unit_moves.add(ladder(mv.from, lo - 1), mv.to, exit);
            }
        }
    }
    unit_moves.emit(cg);
    res.start = 0;
    return res;
}

std::vector<std::string> check_counter_reset(const Game& g) {
    std::vector<std::string> out;
    for (const auto& p : g.positions())
        for (const auto& r : p.rates)
            if (r != 1) out.push_back("position " + p.name + " has a rate other than 1");
    for (const auto& m : g.moves())
        for (const auto& l : m.labels) {
            if (!(l.time == Interval::point(0) || l.time == Interval::point(1)))
                out.push_back("move from " + g.position(m.from).name + " has time " + l.time.str());
            for (const auto& c : l.constraints)
                if (!c.is_everything()) {
                    out.push_back("move from " + g.position(m.from).name + " has a constraint");
                    break;
                }
        }
    return out;
}

}  // namespace qmc
