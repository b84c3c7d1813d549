#include "qmc/qmu.hpp"

#include <cctype>
#include <functional>

namespace qmc {

namespace fml {

namespace {
Formula make(FormulaNode n) { return std::make_shared<const FormulaNode>(std::move(n)); }
}  // namespace

Formula pred(std::string name, bool negated) {
    FormulaNode n;
    n.kind = FormulaKind::Pred;
    n.name = std::move(name);
    n.negated = negated;
    return make(std::move(n));
}

Formula var(std::size_t index, bool negated) {
    FormulaNode n;
    n.kind = FormulaKind::Var;
    n.var = index;
    n.negated = negated;
    return make(std::move(n));
}

Formula fixvar(std::string name) {
    FormulaNode n;
    n.kind = FormulaKind::FixVar;
    n.name = std::move(name);
    return make(std::move(n));
}

namespace {
Formula unary(FormulaKind k, Formula f) {
    FormulaNode n;
    n.kind = k;
    n.lhs = std::move(f);
    return make(std::move(n));
}
Formula binary(FormulaKind k, Formula a, Formula b) {
    FormulaNode n;
    n.kind = k;
    n.lhs = std::move(a);
    n.rhs = std::move(b);
    return make(std::move(n));
}
Formula binder(FormulaKind k, std::string x, Formula body) {
    FormulaNode n;
    n.kind = k;
    n.name = std::move(x);
    n.lhs = std::move(body);
    return make(std::move(n));
}
}  // namespace

Formula neg(Formula f) { return unary(FormulaKind::Neg, std::move(f)); }
Formula conj(Formula a, Formula b) { return binary(FormulaKind::And, std::move(a), std::move(b)); }
Formula disj(Formula a, Formula b) { return binary(FormulaKind::Or, std::move(a), std::move(b)); }
Formula diamond(Formula f) { return unary(FormulaKind::Diamond, std::move(f)); }
Formula box(Formula f) { return unary(FormulaKind::Box, std::move(f)); }
Formula mu(std::string x, Formula body) { return binder(FormulaKind::Mu, std::move(x), std::move(body)); }
Formula nu(std::string x, Formula body) { return binder(FormulaKind::Nu, std::move(x), std::move(body)); }

}  // namespace fml

namespace {

bool is_binder(FormulaKind k) { return k == FormulaKind::Mu || k == FormulaKind::Nu; }

bool is_system_var(std::string_view s) {
    if (s.size() < 2 || s[0] != 'y') return false;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return s.size() == 2 || s[1] != '0';
}

class Parser {
public:
    Parser(std::string_view text, const FormulaContext& ctx) : text_(text), ctx_(ctx) {}

    Formula run() {
        Formula f = formula();
        skip();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return f;
    }

private:
    struct Binding {
        std::string name;
        int neg_depth;
    };

    std::string_view text_;
    const FormulaContext& ctx_;
    std::size_t pos_ = 0;
    int neg_depth_ = 0;
    std::vector<Binding> bound_;

    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(Errc::Parse, msg + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
    }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(std::string_view tok) {
        skip();
        if (text_.substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    void expect(std::string_view tok) {
        if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
    }

    bool peek_ident() {
        skip();
        return pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_');
    }

    std::string ident() {
        if (!peek_ident()) fail("expected identifier");
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    std::string peek_word() {
        std::size_t save = pos_;
        std::string w = peek_ident() ? ident() : std::string();
        pos_ = save;
        return w;
    }

    Formula formula() {
        Formula left = conjunction();
        while (accept("|")) left = fml::disj(left, conjunction());
        return left;
    }

    Formula conjunction() {
        Formula left = unary();
        while (accept("&")) left = fml::conj(left, unary());
        return left;
    }

    Formula unary() {
        if (accept("~")) {
            ++neg_depth_;
            Formula f;
            std::string w = peek_word();
            if (!w.empty() && w != "mu" && w != "nu" && !find_bound(w)) {
                f = atom(true);
            } else {
                f = fml::neg(unary());
            }
            --neg_depth_;
            return f;
        }
        if (accept("<>")) return fml::diamond(unary());
        if (accept("[]")) return fml::box(unary());
        if (accept("(")) {
            Formula f = formula();
            expect(")");
            return f;
        }
        std::string w = peek_word();
        if (w == "mu" || w == "nu") return binder();
        if (w.empty()) fail("expected a formula");
        return atom(false);
    }

    Formula binder() {
        std::string kw = ident();
        std::string x = ident();
        if (x == "mu" || x == "nu") fail("keyword used as variable name");
        expect(".");
        bound_.push_back({x, neg_depth_});
        Formula body = formula();
        bound_.pop_back();
        return kw == "mu" ? fml::mu(x, body) : fml::nu(x, body);
    }

    const Binding* find_bound(const std::string& name) const {
        for (auto it = bound_.rbegin(); it != bound_.rend(); ++it)
            if (it->name == name) return &*it;
        return nullptr;
    }

    Formula atom(bool negated) {
        std::string w = ident();
        if (const Binding* b = find_bound(w)) {
            if ((neg_depth_ - b->neg_depth) % 2 != 0)
                throw Error(Errc::NegativeFixVar, "fixpoint variable " + w + " must appear positively");
            return fml::fixvar(w);
        }
        if (is_system_var(w)) return fml::var(std::stoul(w.substr(1)), negated);
        if (ctx_.predicates && !ctx_.predicates->count(w))
            throw Error(Errc::UnboundFixVar, "'" + w + "' is neither bound nor a known predicate");
        return fml::pred(w, negated);
    }
};

int precedence(const Formula& f) {
    switch (f->kind) {
        case FormulaKind::Mu:
        case FormulaKind::Nu: return 0;
        case FormulaKind::Or: return 1;
        case FormulaKind::And: return 2;
        default: return 3;
    }
}

void print(const Formula& f, int ctx, std::string& out) {
    bool paren = precedence(f) < ctx || (is_binder(f->kind) && ctx > 0);
    if (paren) out += '(';
    switch (f->kind) {
        case FormulaKind::Pred:
            if (f->negated) out += '~';
            out += f->name;
            break;
        case FormulaKind::Var:
            if (f->negated) out += '~';
            out += "y" + std::to_string(f->var);
            break;
        case FormulaKind::FixVar: out += f->name; break;
        case FormulaKind::Neg:
            out += '~';
            if (f->lhs->kind == FormulaKind::Pred || f->lhs->kind == FormulaKind::Var) {
                out += '(';
                print(f->lhs, 0, out);
                out += ')';
            } else {
                print(f->lhs, 3, out);
            }
            break;
        case FormulaKind::Diamond:
            out += "<>";
            print(f->lhs, 3, out);
            break;
        case FormulaKind::Box:
            out += "[]";
            print(f->lhs, 3, out);
            break;
        case FormulaKind::Or:
            print(f->lhs, 1, out);
            out += " | ";
            print(f->rhs, 2, out);
            break;
        case FormulaKind::And:
            print(f->lhs, 2, out);
            out += " & ";
            print(f->rhs, 3, out);
            break;
        case FormulaKind::Mu:
        case FormulaKind::Nu:
            out += f->kind == FormulaKind::Mu ? "mu " : "nu ";
            out += f->name;
            out += ". ";
            print(f->lhs, 0, out);
            break;
    }
    if (paren) out += ')';
}

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
    switch (f->kind) {
        case FormulaKind::FixVar:
            if (!bound.count(f->name)) out.insert(f->name);
            return;
        case FormulaKind::Mu:
        case FormulaKind::Nu: {
            bool fresh = bound.insert(f->name).second;
            collect_free(f->lhs, bound, out);
            if (fresh) bound.erase(f->name);
            return;
        }
        default:
            if (f->lhs) collect_free(f->lhs, bound, out);
            if (f->rhs) collect_free(f->rhs, bound, out);
    }
}

void collect_names(const Formula& f, std::set<std::string>& out) {
    if (f->kind == FormulaKind::Pred || is_binder(f->kind) || f->kind == FormulaKind::FixVar) out.insert(f->name);
    if (f->lhs) collect_names(f->lhs, out);
    if (f->rhs) collect_names(f->rhs, out);
}

class NnfBuilder {
public:
    explicit NnfBuilder(const Formula& f) { collect_names(f, reserved_); }

    Formula run(const Formula& f, bool negate, const std::map<std::string, std::string>& env) {
        switch (f->kind) {
            case FormulaKind::Pred: return fml::pred(f->name, f->negated != negate);
            case FormulaKind::Var: return fml::var(f->var, f->negated != negate);
            case FormulaKind::FixVar: {
                auto it = env.find(f->name);
                if (it == env.end()) throw Error(Errc::OpenFormula, "free fixpoint variable " + f->name);
                return fml::fixvar(it->second);
            }
            case FormulaKind::Neg: return run(f->lhs, !negate, env);
            case FormulaKind::And:
            case FormulaKind::Or: {
                Formula a = run(f->lhs, negate, env), b = run(f->rhs, negate, env);
                bool is_and = (f->kind == FormulaKind::And) != negate;
                return is_and ? fml::conj(a, b) : fml::disj(a, b);
            }
            case FormulaKind::Diamond:
            case FormulaKind::Box: {
                Formula a = run(f->lhs, negate, env);
                bool dia = (f->kind == FormulaKind::Diamond) != negate;
                return dia ? fml::diamond(a) : fml::box(a);
            }
            case FormulaKind::Mu:
            case FormulaKind::Nu: {
                std::string x = fresh(f->name);
                auto inner = env;
                inner[f->name] = x;
                Formula body = run(f->lhs, negate, inner);
                bool least = (f->kind == FormulaKind::Mu) != negate;
                return least ? fml::mu(x, body) : fml::nu(x, body);
            }
        }
        return f;
    }

private:
    std::set<std::string> reserved_;
    std::set<std::string> taken_;

    std::string fresh(const std::string& base) {
        std::string x = base;
        for (int k = 2; taken_.count(x) || (x != base && reserved_.count(x)); ++k) x = base + "_" + std::to_string(k);
        taken_.insert(x);
        return x;
    }
};

}  // namespace

Formula parse_formula(std::string_view text, const FormulaContext& ctx) { return Parser(text, ctx).run(); }

std::string print_formula(const Formula& f) {
    std::string out;
    print(f, 0, out);
    return out;
}

bool formula_equal(const Formula& a, const Formula& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind || a->negated != b->negated || a->name != b->name || a->var != b->var) return false;
    return formula_equal(a->lhs, b->lhs) && formula_equal(a->rhs, b->rhs);
}

bool is_atom(const Formula& f) { return f->kind == FormulaKind::Pred || f->kind == FormulaKind::Var; }

bool is_nnf(const Formula& f) {
    if (f->kind == FormulaKind::Neg) return false;
    if (f->lhs && !is_nnf(f->lhs)) return false;
    if (f->rhs && !is_nnf(f->rhs)) return false;
    return true;
}

std::set<std::string> free_fixvars(const Formula& f) {
    std::set<std::string> bound, out;
    collect_free(f, bound, out);
    return out;
}

std::set<std::size_t> used_variables(const Formula& f) {
    std::set<std::size_t> out;
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
        if (g->kind == FormulaKind::Var) out.insert(g->var);
        if (g->lhs) walk(g->lhs);
        if (g->rhs) walk(g->rhs);
    };
    walk(f);
    return out;
}

std::size_t formula_depth(const Formula& f) {
    std::size_t d = 0;
    if (f->lhs) d = std::max(d, formula_depth(f->lhs));
    if (f->rhs) d = std::max(d, formula_depth(f->rhs));
    return (f->lhs || f->rhs) ? d + 1 : 0;
}

Formula to_nnf(const Formula& f) {
    auto open = free_fixvars(f);
    if (!open.empty()) throw Error(Errc::OpenFormula, "free fixpoint variable " + *open.begin());
    NnfBuilder b(f);
    return b.run(f, false, {});
}

AlternationInfo alternation_depth(const Formula& nnf) {
    AlternationInfo info;
    struct Frame {
        std::string name;
        bool greatest;
        int level;
    };
    std::vector<Frame> stack;
    std::function<void(const Formula&)> walk = [&](const Formula& f) {
        if (is_binder(f->kind)) {
            bool greatest = f->kind == FormulaKind::Nu;
            auto deps = free_fixvars(f);
            int level = 1;
            for (const auto& a : stack)
                if (deps.count(a.name)) level = std::max(level, a.level + (a.greatest != greatest ? 1 : 0));
            info.level[f->name] = level;
            info.greatest[f->name] = greatest;
            info.body[f->name] = f->lhs;
            info.priority[f->name] = (level % 2 == 0) == greatest ? level : level + 1;
            info.depth = std::max(info.depth, level);
            stack.push_back({f->name, greatest, level});
            walk(f->lhs);
            stack.pop_back();
            return;
        }
        if (f->lhs) walk(f->lhs);
        if (f->rhs) walk(f->rhs);
    };
    walk(nnf);
    info.max_priority = info.depth;
    for (const auto& [x, p] : info.priority) info.max_priority = std::max(info.max_priority, p);
    return info;
}

std::vector<Formula> subformulae(const Formula& f) {
    std::vector<Formula> out;
    std::set<std::string> seen;
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
        if (!seen.insert(print_formula(g)).second) return;
        out.push_back(g);
        if (g->lhs) walk(g->lhs);
        if (g->rhs) walk(g->rhs);
    };
    walk(f);
    return out;
}

Qts qts_from_state_graph(const System& sys, const StateGraph& g) {
    Qts q;
    q.succ = g.succ;
    for (const auto& s : g.states) {
        q.predicates.push_back(sys.locations[s.location].predicates);
        q.values.push_back(s.values);
    }
    return q;
}

namespace {

class DirectEvaluator {
public:
    DirectEvaluator(const Qts& g, EvalStats* stats) : g_(g), stats_(stats) {}

    std::vector<ExtRat> eval(const Formula& f) {
        std::size_t n = g_.size();
        std::vector<ExtRat> out(n);
        switch (f->kind) {
            case FormulaKind::Pred:
                for (std::size_t s = 0; s < n; ++s) {
                    auto it = g_.predicates[s].find(f->name);
                    if (it == g_.predicates[s].end())
                        throw Error(Errc::UnboundFixVar, "predicate " + f->name + " undefined on state");
                    out[s] = f->negated ? -it->second : it->second;
                }
                break;
            case FormulaKind::Var:
                for (std::size_t s = 0; s < n; ++s) {
                    const ExtRat& v = g_.values[s].at(f->var);
                    out[s] = f->negated ? -v : v;
                }
                break;
            case FormulaKind::FixVar: {
                auto it = env_.find(f->name);
                if (it == env_.end()) throw Error(Errc::OpenFormula, "free fixpoint variable " + f->name);
                return it->second;
            }
            case FormulaKind::Neg: {
                auto a = eval(f->lhs);
                for (std::size_t s = 0; s < n; ++s) out[s] = -a[s];
                break;
            }
            case FormulaKind::And:
            case FormulaKind::Or: {
                auto a = eval(f->lhs), b = eval(f->rhs);
                bool is_and = f->kind == FormulaKind::And;
                for (std::size_t s = 0; s < n; ++s) out[s] = is_and ? ext_min(a[s], b[s]) : ext_max(a[s], b[s]);
                break;
            }
            case FormulaKind::Diamond:
            case FormulaKind::Box: {
                auto a = eval(f->lhs);
                bool dia = f->kind == FormulaKind::Diamond;
                for (std::size_t s = 0; s < n; ++s) {
                    ExtRat v = dia ? ExtRat::minus_inf() : ExtRat::plus_inf();
                    for (auto t : g_.succ[s]) v = dia ? ext_max(v, a[t]) : ext_min(v, a[t]);
                    out[s] = v;
                }
                break;
            }
            case FormulaKind::Mu:
            case FormulaKind::Nu: {
                bool least = f->kind == FormulaKind::Mu;
                std::vector<ExtRat> x(n, least ? ExtRat::minus_inf() : ExtRat::plus_inf());
                auto saved = env_.find(f->name) != env_.end() ? std::optional(env_[f->name]) : std::nullopt;
                std::size_t rounds = 0;
                for (;;) {
                    env_[f->name] = x;
                    auto y = eval(f->lhs);
                    if (y == x) break;
                    ++rounds;
                    x = std::move(y);
                }
                if (saved) env_[f->name] = *saved; else env_.erase(f->name);
                if (stats_) stats_->max_rounds = std::max(stats_->max_rounds, rounds);
                return x;
            }
        }
        return out;
    }

private:
    const Qts& g_;
    EvalStats* stats_;
    std::map<std::string, std::vector<ExtRat>> env_;
};

}  // namespace

std::vector<ExtRat> eval_direct_all(const Qts& g, const Formula& nnf, EvalStats* stats) {
    if (stats) {
        std::set<ExtRat> values{ExtRat::plus_inf(), ExtRat::minus_inf()};
        std::function<void(const Formula&)> walk = [&](const Formula& f) {
            for (std::size_t s = 0; s < g.size(); ++s) {
                if (f->kind == FormulaKind::Pred) {
                    auto it = g.predicates[s].find(f->name);
                    if (it != g.predicates[s].end()) values.insert(f->negated ? -it->second : it->second);
                } else if (f->kind == FormulaKind::Var && f->var < g.values[s].size()) {
                    values.insert(f->negated ? -g.values[s][f->var] : g.values[s][f->var]);
                }
            }
            if (f->lhs) walk(f->lhs);
            if (f->rhs) walk(f->rhs);
        };
        walk(nnf);
        stats->value_count = values.size();
    }
    return DirectEvaluator(g, stats).eval(nnf);
}

ExtRat eval_direct(const Qts& g, const Formula& nnf, std::size_t state, EvalStats* stats) {
    return eval_direct_all(g, nnf, stats).at(state);
}

}  // namespace qmc
