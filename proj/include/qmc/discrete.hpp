#pragma once

#include <optional>
#include <vector>

#include "qmc/lhs.hpp"

namespace qmc {

Rational di(const Rational& r);
Rational frac(const Rational& r);

struct Distances {
    std::vector<Rational> di;
    Rational dl;
    Rational dr;
    Rational dstar;
};

Distances dstar(const SysState& s);

// Predicted di(a+b) from di(a), di(b) by the refinement cases; case in 1..5.
struct DiSumRule {
    Rational value;
    int rule = 0;
};
DiSumRule di_sum_rule(const Rational& da, const Rational& db);

bool equivalent(const SysState& s, const SysState& t);

// Time elapsed between s and its successor t under label l (t -_R s).
// nullopt when every variable is reset.
std::optional<Rational> elapsed(const SysState& s, const SysState& t, const Label& l);

SysState shift_move(const SysState& s, const SysState& t, const Label& l, const SysState& s2);

struct CorrectMoveTrace {
    int formula_case = 0;      // 0: t kept, 1..3 construction cases (21/22 for the two subcases of case 2), -1 degenerate
    bool case_formula_ok = true;
};

SysState correct_move(const SysState& s, const SysState& t, const Label& l, const Rational& eps,
                      CorrectMoveTrace* trace = nullptr);

bool validate_discrete_trace(const std::vector<SysState>& trace, const Rational& eps);

}  // namespace qmc
