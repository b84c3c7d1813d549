#pragma once

#include <map>
#include <string>
#include <vector>

#include "qmc/game.hpp"
#include "qmc/transform.hpp"

namespace qmc {

struct SolveConfig {
    long counter_cap = 64;   // first cap B
    long max_cap = 512;      // deepening doubles B up to this
    long horizon = 32;       // used by oracle cross-checks
    std::size_t config_limit = 3'000'000;
};

struct WitnessEntry {
    std::string configuration;
    std::string successor;
};

struct SolveStats {
    std::size_t configurations = 0;
    std::size_t components = 0;
    long cap = 0;
    std::map<int, std::size_t> rounds;  // per original priority
    std::size_t pumped_minus = 0;       // positions with value -inf by the pumping analysis
    std::size_t pumped_plus = 0;
    std::vector<WitnessEntry> witness;
};

struct SolveResult {
    enum class Kind { Exact, Bounds, Inconclusive };
    Kind kind = Kind::Inconclusive;
    GameValue lo = GameValue::minus_inf();
    GameValue hi = GameValue::plus_inf();
    std::string diagnostic;
    SolveStats stats;

    const GameValue& value() const;  // Exact only
    std::string str() const;
};

SolveResult solve_counter_reset(const Game& g, const GameState& s0, const SolveConfig& cfg = {});

struct OracleResult {
    GameValue lo;
    GameValue hi;
    bool conclusive() const { return lo == hi; }
};

OracleResult minimax_oracle(const Game& g, const GameState& s0, long horizon);

struct Classified {
    enum class Kind { PlusInf, MinusInf, Approx, Inconclusive };
    Kind kind = Kind::Inconclusive;
    Rational value;
    Rational guarantee;
    std::string diagnostic;

    std::string str() const;
};

Classified classify_value(const SolveResult& res, const ScaleCertificate& cert, const Integer& n);

}  // namespace qmc
