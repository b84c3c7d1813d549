#pragma once

#include <random>
#include <string>

#include "qmc/discrete.hpp"
#include "qmc/pipeline.hpp"

namespace qmc::testing {

std::string data_path(const std::string& rel);
std::string read_text(const std::string& path);
System load_system(const std::string& rel);
Game load_game(const std::string& rel);

using Rng = std::mt19937_64;

Rational random_rational(Rng& rng, long lo, long hi, long max_den);

// Finite-graph systems: point times, every label bounds every variable, so the state graph is finite.
System random_point_system(Rng& rng, std::size_t max_locations, std::size_t max_vars);

// Closed formula over P, Q and the system's variables, binder nesting at most `depth`.
Formula random_formula(Rng& rng, std::size_t vars, int depth);

// Small initialised game with point time intervals and per-variable constant rates.
Game random_point_game(Rng& rng);

struct DiscreteCase {
    SysState s;
    SysState t;
    Label label;
};

// s with d*(s) <= 1/4, a label with integer endpoints allowing s, and a successor t.
DiscreteCase random_discrete_case(Rng& rng);

// A random state equivalent to s.
SysState random_equivalent(Rng& rng, const SysState& s);

// One-location system whose state space matches the case (rates 1).
System discrete_system(std::size_t dim);

}  // namespace qmc::testing
