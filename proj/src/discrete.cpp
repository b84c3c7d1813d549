#include "qmc/discrete.hpp"

#include <algorithm>

namespace qmc {

namespace {

const Rational kHalf(1, 2);
const Rational kNine10(9, 10);

Rational abs_q(const Rational& q) { return q < 0 ? Rational(-q) : q; }

std::vector<Rational> finite_values(const SysState& s) {
    std::vector<Rational> out;
    for (const auto& v : s.values) out.push_back(v.finite());
    return out;
}

bool integer_label(const Label& l) {
    auto ok = [](const Interval& i) {
        for (const auto* e : {&i.lo().value, &i.hi().value})
            if (e->is_finite() && e->finite().get_den() != 1) return false;
        return true;
    };
    if (!ok(l.time)) return false;
    return std::all_of(l.constraints.begin(), l.constraints.end(), ok);
}

// Checks that t is a successor of s under l and returns the elapsed time.
std::optional<Rational> checked_elapsed(const SysState& s, const SysState& t, const Label& l) {
    if (!label_allows(l, s.values)) throw Error(Errc::NotAllowed, "label constraints fail at the source state");
    auto w = elapsed(s, t, l);
    if (w && !l.time.contains(ExtRat(*w))) throw Error(Errc::NotAllowed, "elapsed time outside the label interval");
    return w;
}

SysState successor(const SysState& s, std::size_t location, const Label& l, const Rational& w) {
    SysState t{location, s.values};
    for (std::size_t i = 0; i < t.values.size(); ++i)
        t.values[i] = l.resets.contains(i) ? ExtRat(0) : ExtRat(Rational(s.values[i].finite() + w));
    return t;
}

std::vector<std::size_t> kept(const Label& l, std::size_t dim) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < dim; ++i)
        if (!l.resets.contains(i)) out.push_back(i);
    return out;
}

bool postconditions(const SysState& s, const SysState& t, const Label& l, const SysState& cand,
                    const Rational& bound) {
    auto w = elapsed(s, cand, l);
    if (w && !l.time.contains(ExtRat(*w))) return false;
    return equivalent(t, cand) && dstar(cand).dstar <= bound;
}

// Search the set of times keeping every variable in its integer bracket of t.
SysState cell_search(const SysState& s, const SysState& t, const Label& l, const Rational& eps) {
    const auto sv = finite_values(s), tv = finite_values(t);
    auto idx = kept(l, sv.size());
    // Feasible w' as an interval (lo, hi) with flags.
    ExtRat lo = l.time.lo().value, hi = l.time.hi().value;
    bool lo_closed = l.time.lo().closed, hi_closed = l.time.hi().closed;
    auto tighten_lo = [&](const Rational& x, bool closed) {
        ExtRat e(x);
        if (e > lo || (e == lo && !closed)) {
            lo = e;
            lo_closed = closed;
        }
    };
    auto tighten_hi = [&](const Rational& x, bool closed) {
        ExtRat e(x);
        if (e < hi || (e == hi && !closed)) {
            hi = e;
            hi_closed = closed;
        }
    };
    for (auto j : idx) {
        Integer f = floor_of(tv[j]), c = ceil_of(tv[j]);
        tighten_lo(Rational(f) - sv[j], f == c);
        tighten_hi(Rational(c) - sv[j], f == c);
    }
    std::vector<Rational> cands;
    Rational wl = lo.finite(), wh = hi.is_finite() ? hi.finite() : Rational(wl + 2);
    Rational eta = std::min(Rational(eps / 4), Rational((wh - wl) / 4));
    if (eta <= 0) eta = (wh - wl) / 4;
    auto add = [&](const Rational& x) {
        if (x < wl || x > wh) return;
        if (x == wl && !lo_closed) return;
        if (x == wh && !hi_closed && hi.is_finite()) return;
        cands.push_back(x);
    };
    add(wl);
    add(wl + eta);
    add(wh);
    add(wh - eta);
    add(elapsed(s, t, l).value());
    for (auto j : idx) {
        // points where s_j + w' has fractional part 1/2
        Integer k0 = floor_of(Rational(wl + sv[j] - kHalf));
        for (Integer k = k0; Rational(k) + kHalf - sv[j] <= wh; ++k) {
            Rational h = Rational(k) + kHalf - sv[j];
            add(h);
            add(h - eta);
            add(h + eta);
        }
    }
    SysState best = t;
    Rational best_d = dstar(t).dstar;
    for (const auto& w : cands) {
        SysState c = successor(s, t.location, l, w);
        if (!equivalent(t, c)) continue;
        Rational d = dstar(c).dstar;
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

}  // namespace

Rational frac(const Rational& r) { return r - Rational(floor_of(r)); }

Rational di(const Rational& in) {
    Rational r = in;
    r.canonicalize();
    Rational down = r - Rational(floor_of(r));
    Rational up = r - Rational(ceil_of(r));
    return abs_q(up) <= abs_q(down) ? up : down;
}

Distances dstar(const SysState& s) {
    Distances d;
    bool all_le = true, all_ge = true;
    for (const auto& v : s.values) {
        Rational x = di(v.finite());
        d.di.push_back(x);
        all_le = all_le && x <= 0;
        all_ge = all_ge && x >= 0;
    }
    if (d.di.empty()) return d;
    d.dl = *std::min_element(d.di.begin(), d.di.end());
    d.dr = *std::max_element(d.di.begin(), d.di.end());
    if (all_le)
        d.dstar = abs_q(d.dl);
    else if (all_ge)
        d.dstar = d.dr;
    else
        d.dstar = abs_q(d.dl) + d.dr;
    return d;
}

DiSumRule di_sum_rule(const Rational& da_in, const Rational& db_in) {
    Rational da = da_in, db = db_in;
    da.canonicalize();
    db.canonicalize();
    Rational sum = da + db;
    if (abs_q(sum) < kHalf) return {sum, 1};
    if ((da == -kHalf && db == -kHalf) || (da == 0 && db == 0)) return {Rational(0), 2};
    if (da > 0 && db > 0) return {sum - 1, 3};
    // The sum -1/2 sits on the tie of di, which resolves to -1/2.
    if (da < 0 && db < 0) return {sum == -kHalf ? sum : Rational(sum + 1), 4};
    return {sum, 5};
}

bool equivalent(const SysState& s, const SysState& t) {
    if (s.location != t.location || s.values.size() != t.values.size()) return false;
    auto a = finite_values(s), b = finite_values(t);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (floor_of(a[i]) != floor_of(b[i]) || ceil_of(a[i]) != ceil_of(b[i])) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            if ((frac(a[i]) <= frac(a[j])) != (frac(b[i]) <= frac(b[j]))) return false;
    return true;
}

std::optional<Rational> elapsed(const SysState& s, const SysState& t, const Label& l) {
    std::optional<Rational> w;
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        if (l.resets.contains(i)) {
            if (t.values[i] != ExtRat(0)) throw Error(Errc::NotAllowed, "reset variable is not zero");
            continue;
        }
        Rational d = t.values[i].finite() - s.values[i].finite();
        if (w && *w != d) throw Error(Errc::NotAllowed, "variables advanced by different amounts");
        w = d;
    }
    return w;
}

SysState shift_move(const SysState& s, const SysState& t, const Label& l, const SysState& s2) {
    if (!equivalent(s, s2)) throw Error(Errc::NotEquivalent, "source states are not equivalent");
    if (!integer_label(l)) throw Error(Errc::PreconditionViolated, "label endpoints must be integers");
    auto w = checked_elapsed(s, t, l);
    if (!w) return t;
    if (w->get_den() == 1) return successor(s2, t.location, l, *w);

    const auto sv = finite_values(s2), tv = finite_values(t);
    auto idx = kept(l, sv.size());
    Rational phi = frac(*w);
    Rational base(floor_of(*w));
    std::size_t i = idx.front();
    for (auto j : idx)
        if (frac(tv[j]) < frac(tv[i])) i = j;
    std::size_t top = idx.front();
    for (auto j : idx)
        if (frac(sv[j]) > frac(sv[top])) top = j;

    Rational w2;
    if (frac(tv[i]) == 0) {
        // t_i landed on an integer: hit the matching breakpoint exactly.
        w2 = base + 1 - frac(sv[i]);
    } else if (frac(tv[i]) >= phi) {
        w2 = base + kNine10 * (1 - frac(sv[top]));
    } else if (std::all_of(idx.begin(), idx.end(), [&](std::size_t j) { return frac(sv[j]) >= frac(sv[i]); })) {
        Rational delta = kNine10 * std::min(frac(sv[i]), Rational(1 - frac(sv[top])));
        w2 = base + (1 - frac(sv[i])) + delta;
    } else {
        std::size_t lo = idx.front();
        bool found = false;
        for (auto j : idx)
            if (frac(tv[j]) >= phi && (!found || frac(tv[j]) > frac(tv[lo]))) {
                lo = j;
                found = true;
            }
        Rational delta = frac(sv[i]) - frac(sv[lo]);
        w2 = base + (1 - frac(sv[i])) + kNine10 * delta;
    }
    return successor(s2, t.location, l, w2);
}

SysState correct_move(const SysState& s, const SysState& t, const Label& l, const Rational& eps,
                      CorrectMoveTrace* trace) {
    CorrectMoveTrace local;
    CorrectMoveTrace& tr = trace ? *trace : local;
    tr = {};
    Distances ds = dstar(s);
    if (ds.dstar > Rational(1, 4)) throw Error(Errc::PreconditionViolated, "d*(s) exceeds 1/4");
    if (eps < 0) throw Error(Errc::PreconditionViolated, "negative epsilon");
    auto w = checked_elapsed(s, t, l);
    Rational bound = ds.dstar + eps;
    Distances dt = dstar(t);
    if (dt.dstar <= bound || !w) return t;

    if (ds.dstar == 0) {
        // Degenerate case: take an integer time closest to w inside the interval.
        tr.formula_case = -1;
        for (long step = 0; step < 4; ++step) {
            for (const Integer& cand : {Integer(floor_of(*w) - step), Integer(ceil_of(*w) + step)}) {
                if (cand < 0 || !l.time.contains(ExtRat(Rational(cand)))) continue;
                return successor(s, t.location, l, Rational(cand));
            }
        }
        if (eps > 0) {
            Rational h = eps / 2;
            if (h > Rational(1, 2)) h = Rational(1, 2);
            for (long step = 0; step < 4; ++step) {
                for (const Integer& base : {Integer(floor_of(*w) - step), Integer(ceil_of(*w) + step)}) {
                    for (const Rational& cand : {Rational(base + h), Rational(base - h)}) {
                        if (cand < 0 || !l.time.contains(ExtRat(cand))) continue;
                        return successor(s, t.location, l, cand);
                    }
                }
            }
        }
        throw Error(Errc::PreconditionViolated, "no time within epsilon of an integer in the label interval");
    }
    if (eps >= ds.dstar) throw Error(Errc::PreconditionViolated, "epsilon must be below d*(s)");

    const auto tv = finite_values(t);
    auto idx = kept(l, tv.size());
    Rational dl_t = di(tv[idx.front()]), dr_t = dl_t;
    for (auto j : idx) {
        dl_t = std::min(dl_t, di(tv[j]));
        dr_t = std::max(dr_t, di(tv[j]));
    }
    Rational dw = di(*w);
    Rational w2;
    bool all_le = std::all_of(dt.di.begin(), dt.di.end(), [](const Rational& x) { return x <= 0; });
    bool all_ge = std::all_of(dt.di.begin(), dt.di.end(), [](const Rational& x) { return x >= 0; });
    if (all_le) {
        tr.formula_case = 1;
        Rational c = dw < 0 ? std::min(abs_q(dr_t), abs_q(dw)) : abs_q(dr_t);
        w2 = *w + c - eps;
    } else if (all_ge && dw > 0) {
        tr.formula_case = 21;
        Rational c = std::max(abs_q(dl_t), abs_q(dw));
        w2 = *w + (1 - c) - eps;
    } else if (all_ge) {
        tr.formula_case = 22;
        w2 = Rational(ceil_of(*w)) - eps;
    } else {
        tr.formula_case = 3;
        Rational c = std::min(abs_q(dl_t), abs_q(dw));
        w2 = *w + c - eps / 2;
    }
    SysState cand = successor(s, t.location, l, w2);
    if (postconditions(s, t, l, cand, bound)) return cand;
    tr.case_formula_ok = false;
    SysState fixed = cell_search(s, t, l, eps);
    if (!postconditions(s, t, l, fixed, bound))
        throw Error(Errc::PreconditionViolated, "no equivalent successor within the distance bound");
    return fixed;
}

bool validate_discrete_trace(const std::vector<SysState>& trace, const Rational& eps) {
    if (trace.empty()) return true;
    Rational d0 = dstar(trace[0]).dstar;
    Rational budget = 0;
    Rational step = eps / 2;
    bool tracking = true;
    for (std::size_t n = 0; n + 1 < trace.size(); ++n) {
        Rational a = dstar(trace[n]).dstar, b = dstar(trace[n + 1]).dstar;
        if (a <= eps && b > a + step) return false;
        tracking = tracking && a <= eps;
        budget += step;
        if (tracking && d0 <= eps / 2 && b > d0 + budget) return false;
        step /= 2;
    }
    return true;
}

}  // namespace qmc
