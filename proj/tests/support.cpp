#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iterator>
#include <set>

namespace qmc::testing {

namespace {

long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }
bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

Interval integer_bounding(Rng& rng, const Rational& x) {
    Integer f = floor_of(x), c = ceil_of(x);
    long lo = f.get_si() - uniform(rng, 0, 1);
    long hi = c.get_si() + uniform(rng, 0, 1);
    bool lo_closed = Rational(lo) == x || coin(rng);
    bool hi_closed = Rational(hi) == x || coin(rng);
    return Interval({ExtRat(lo), lo_closed}, {ExtRat(hi), hi_closed});
}

}  // namespace

std::string data_path(const std::string& rel) { return std::string(QMC_DATA_DIR) + "/" + rel; }

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::PreconditionViolated, "cannot read " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

System load_system(const std::string& rel) { return parse_system(read_text(data_path(rel))); }
Game load_game(const std::string& rel) { return parse_game(read_text(data_path(rel))); }

Rational random_rational(Rng& rng, long lo, long hi, long max_den) {
    long den = uniform(rng, 1, max_den);
    long num = uniform(rng, lo * den, hi * den);
    Rational q(num, den);
    q.canonicalize();
    return q;
}

System random_point_system(Rng& rng, std::size_t max_locations, std::size_t max_vars) {
    System sys;
    std::size_t m = static_cast<std::size_t>(uniform(rng, 1, static_cast<long>(max_vars)));
    std::size_t n = static_cast<std::size_t>(uniform(rng, 1, static_cast<long>(max_locations)));
    for (std::size_t i = 0; i < m; ++i) sys.variables.push_back("y" + std::to_string(i));
    std::vector<Rational> rates;
    for (std::size_t i = 0; i < m; ++i) rates.push_back(uniform(rng, 1, 2));
    for (std::size_t l = 0; l < n; ++l) {
        Location loc;
        loc.name = "l" + std::to_string(l);
        loc.rates = rates;
        for (const char* p : {"P", "Q"}) {
            long r = uniform(rng, 0, 39);
            loc.predicates[p] = r == 0 ? ExtRat::plus_inf() : r == 1 ? ExtRat::minus_inf() : ExtRat(random_rational(rng, -3, 3, 2));
        }
        sys.locations.push_back(loc);
    }
    for (std::size_t l = 0; l < n; ++l) {
        long edges = uniform(rng, 0, 3);
        if (l == 0 || coin(rng, 0.5)) edges = std::max(edges, 1L);
        for (long e = 0; e < edges; ++e) {
            Edge edge;
            edge.from = l;
            edge.to = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(n) - 1));
            long labels = uniform(rng, 1, 2);
            for (long k = 0; k < labels; ++k) {
                Label lab;
                lab.time = Interval::point(ExtRat(uniform(rng, 0, 3) == 0 ? 0 : uniform(rng, 1, 2)));
                for (std::size_t i = 0; i < m; ++i) {
                    long lo = coin(rng, 0.8) ? 0 : 1;
                    lab.constraints.push_back(Interval::closed(ExtRat(lo), ExtRat(lo + uniform(rng, 2, 4))));
                    if (coin(rng, 0.4)) lab.resets.insert(i);
                }
                edge.labels.push_back(lab);
            }
            sys.edges.push_back(edge);
        }
    }
    return sys;
}

Formula random_formula(Rng& rng, std::size_t vars, int depth) {
    std::vector<std::string> bound;
    int counter = 0;
    std::function<Formula(int)> gen = [&](int d) -> Formula {
        long pick = d <= 0 ? 0 : uniform(rng, 0, 9);
        switch (pick) {
            case 0:
            case 1: {
                long kind = bound.empty() ? uniform(rng, 0, 1) : uniform(rng, 0, 3) > 1 ? 2 : uniform(rng, 0, 1);
                if (kind == 2) return fml::fixvar(bound[static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(bound.size()) - 1))]);
                if (kind == 1) return fml::var(static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(vars) - 1)), coin(rng));
                return fml::pred(coin(rng) ? "P" : "Q", coin(rng));
            }
            case 2: return fml::conj(gen(d - 1), gen(d - 1));
            case 3: return fml::disj(gen(d - 1), gen(d - 1));
            case 4:
            case 5: return fml::diamond(gen(d - 1));
            case 6: return fml::box(gen(d - 1));
            default: {
                std::string x = "X" + std::to_string(counter++);
                bound.push_back(x);
                Formula body = gen(d - 1);
                if (coin(rng, 0.6)) {
                    Formula rec = coin(rng) ? fml::diamond(fml::fixvar(x)) : fml::box(fml::fixvar(x));
                    body = coin(rng) ? fml::disj(rec, body) : fml::conj(rec, body);
                }
                bound.pop_back();
                return pick % 2 == 0 ? fml::mu(x, body) : fml::nu(x, body);
            }
        }
    };
    return gen(depth);
}

Game random_point_game(Rng& rng) {
    Game g;
    std::size_t m = static_cast<std::size_t>(uniform(rng, 1, 2));
    for (std::size_t i = 0; i < m; ++i) g.variables.push_back("y" + std::to_string(i));
    static const std::vector<Rational> rate_pool = {Rational(1), Rational(2), Rational(1, 2), Rational(3), Rational(-1)};
    std::vector<Rational> rates;
    for (std::size_t i = 0; i < m; ++i) rates.push_back(rate_pool[static_cast<std::size_t>(uniform(rng, 0, 4))]);
    long n = uniform(rng, 3, 6);
    long terminals = uniform(rng, 1, 2);
    for (long p = 0; p < n; ++p) {
        Position pos;
        pos.name = "p" + std::to_string(p);
        pos.owner = static_cast<int>(uniform(rng, 0, 1));
        pos.priority = static_cast<int>(uniform(rng, 0, 3));
        pos.rates = rates;
        if (p >= n - terminals) {
            pos.payoff.var = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(m) - 1));
            pos.payoff.mult = ExtRat(random_rational(rng, -2, 2, 2));
            pos.payoff.add = ExtRat(random_rational(rng, -3, 3, 3));
            if (pos.payoff.mult == ExtRat(0)) pos.payoff.var = 0;
        } else {
            pos.payoff = PayoffTerm::constant(pos.owner == 0 ? ExtRat::minus_inf() : ExtRat::plus_inf());
        }
        g.add_position(pos);
    }
    for (long p = 0; p < n - terminals; ++p) {
        long k = uniform(rng, 1, 2);
        for (long e = 0; e < k; ++e) {
            Label lab = empty_label(m);
            long t = uniform(rng, 0, 3);
            lab.time = Interval::point(t == 3 ? ExtRat(Rational(1, 2)) : ExtRat(t == 2 ? 0 : t));
            for (std::size_t i = 0; i < m; ++i) {
                if (coin(rng, 0.25)) lab.constraints[i] = Interval::closed(ExtRat(-1), ExtRat(uniform(rng, 1, 3)));
                if (coin(rng, 0.3)) lab.resets.insert(i);
            }
            g.add_move(static_cast<std::size_t>(p), static_cast<std::size_t>(uniform(rng, 0, n - 1)), {lab});
        }
    }
    return g;
}

DiscreteCase random_discrete_case(Rng& rng) {
    DiscreteCase c;
    std::size_t m = static_cast<std::size_t>(uniform(rng, 1, 3));
    c.s.location = 0;
    for (std::size_t i = 0; i < m; ++i) {
        Rational d = coin(rng, 0.15) ? Rational(0) : random_rational(rng, -1, 1, 64) / 8;
        c.s.values.push_back(ExtRat(Rational(uniform(rng, 1, 3)) + d));
    }
    c.label = empty_label(m);
    long lo = uniform(rng, 0, 2);
    long kind = uniform(rng, 0, 4);
    if (kind == 0) {
        c.label.time = Interval::point(ExtRat(lo));
    } else if (kind == 1) {
        c.label.time = Interval({ExtRat(lo), coin(rng)}, {ExtRat::plus_inf(), false});
    } else {
        c.label.time = Interval({ExtRat(lo), coin(rng)}, {ExtRat(lo + uniform(rng, 1, 3)), coin(rng)});
    }
    for (std::size_t i = 0; i < m; ++i) {
        c.label.constraints[i] = integer_bounding(rng, c.s.values[i].finite());
        if (coin(rng, 0.25)) c.label.resets.insert(i);
    }
    Rational w;
    for (;;) {
        Rational hi = c.label.time.hi().value.is_finite() ? c.label.time.hi().value.finite() : Rational(lo + 3);
        w = Rational(lo) + random_rational(rng, 0, 1, 32) * (hi - lo);
        if (coin(rng, 0.1)) w = Rational(floor_of(w));
        if (c.label.time.contains(ExtRat(w))) break;
    }
    c.t.location = 0;
    c.t.values = c.s.values;
    for (std::size_t i = 0; i < m; ++i)
        c.t.values[i] = c.label.resets.contains(i) ? ExtRat(0) : ExtRat(Rational(c.s.values[i].finite() + w));
    return c;
}

SysState random_equivalent(Rng& rng, const SysState& s) {
    std::vector<Rational> fr;
    for (const auto& v : s.values) fr.push_back(frac(v.finite()));
    std::set<Rational> distinct;
    for (const auto& f : fr)
        if (f != 0) distinct.insert(f);
    std::set<Rational> fresh;
    while (fresh.size() < distinct.size()) fresh.insert(Rational(uniform(rng, 1, 999), 1000));
    std::vector<Rational> old_sorted(distinct.begin(), distinct.end()), new_sorted(fresh.begin(), fresh.end());
    SysState out = s;
    for (std::size_t i = 0; i < fr.size(); ++i) {
        if (fr[i] == 0) continue;
        auto k = std::lower_bound(old_sorted.begin(), old_sorted.end(), fr[i]) - old_sorted.begin();
        out.values[i] = ExtRat(Rational(floor_of(s.values[i].finite())) + new_sorted[static_cast<std::size_t>(k)]);
    }
    return out;
}

System discrete_system(std::size_t dim) {
    System sys;
    for (std::size_t i = 0; i < dim; ++i) sys.variables.push_back("y" + std::to_string(i));
    sys.locations.push_back({"v", std::vector<Rational>(dim, Rational(1)), {}});
    return sys;
}

}  // namespace qmc::testing
