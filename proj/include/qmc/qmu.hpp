#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qmc/lhs.hpp"

namespace qmc {

enum class FormulaKind { Pred, Var, FixVar, Neg, And, Or, Diamond, Box, Mu, Nu };

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
    FormulaKind kind = FormulaKind::Pred;
    bool negated = false;    // sign of Pred/Var atoms
    std::string name;        // predicate, fixpoint variable, or binder name
    std::size_t var = 0;     // system variable index for Var
    Formula lhs;             // operand of unary nodes and binders
    Formula rhs;
};

namespace fml {
Formula pred(std::string name, bool negated = false);
Formula var(std::size_t index, bool negated = false);
Formula fixvar(std::string name);
Formula neg(Formula f);
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
Formula diamond(Formula f);
Formula box(Formula f);
Formula mu(std::string x, Formula body);
Formula nu(std::string x, Formula body);
}  // namespace fml

struct FormulaContext {
    // When set, identifiers outside this set that are not bound are rejected.
    const std::set<std::string>* predicates = nullptr;
};

Formula parse_formula(std::string_view text, const FormulaContext& ctx = {});
std::string print_formula(const Formula& f);
bool formula_equal(const Formula& a, const Formula& b);

bool is_atom(const Formula& f);
bool is_nnf(const Formula& f);
std::set<std::string> free_fixvars(const Formula& f);
std::set<std::size_t> used_variables(const Formula& f);
std::size_t formula_depth(const Formula& f);

// Negation normal form; binders are renamed apart.
Formula to_nnf(const Formula& f);

struct AlternationInfo {
    int depth = 0;
    std::map<std::string, int> level;
    std::map<std::string, int> priority;
    std::map<std::string, bool> greatest;  // true for nu binders
    std::map<std::string, Formula> body;
    int max_priority = 0;                   // priority of non-variable positions
};

// Requires NNF with distinct binder names.
AlternationInfo alternation_depth(const Formula& nnf);

// Distinct subformulae in preorder.
std::vector<Formula> subformulae(const Formula& f);

struct Qts {
    std::vector<std::vector<std::size_t>> succ;
    std::vector<std::map<std::string, ExtRat>> predicates;
    std::vector<std::vector<ExtRat>> values;

    std::size_t size() const { return succ.size(); }
};

Qts qts_from_state_graph(const System& sys, const StateGraph& g);

struct EvalStats {
    std::size_t max_rounds = 0;
    std::size_t value_count = 0;  // |A|: distinct atom values plus the infinities
};

std::vector<ExtRat> eval_direct_all(const Qts& g, const Formula& nnf, EvalStats* stats = nullptr);
ExtRat eval_direct(const Qts& g, const Formula& nnf, std::size_t state, EvalStats* stats = nullptr);

}  // namespace qmc
