#pragma once

#include <string>
#include <vector>

#include "qmc/game.hpp"

namespace qmc {

struct ScaleCertificate {
    Integer r = 1;
    Integer q = 1;
    Integer n = 1;
    Integer m = 1;

    Integer divisor() const { return n * m * q * r; }
};

bool is_flat(const Game& g);

Game flatten(const Game& g);
Game scale_game(const Game& g, const Rational& q);

struct Integerised {
    Game game;
    ScaleCertificate cert;
};

Integerised integerise(const Game& g);

struct CounterResetOptions {
    // Build the complete sign and memory products instead of the part reachable
    // from the start position with zero counters.
    bool full_product = false;
};

struct StageSizes {
    std::size_t positions = 0;
    std::size_t moves = 0;
    std::size_t labels = 0;
};

StageSizes stage_sizes(const Game& g);

struct CounterResetResult {
    Game scaled;  // n*m*G
    Game sign;
    Game memory;
    Game counter_reset;
    std::vector<std::vector<int>> sign_of;           // per sign-game position
    std::vector<std::size_t> sign_base;               // sign-game position -> scaled position
    std::vector<std::vector<int>> memory_of;          // per memory-game position
    std::vector<std::size_t> memory_base;             // memory-game position -> sign position
    std::size_t start = 0;                            // in counter_reset
    Integer b = 0;
    ScaleCertificate cert;
};

CounterResetResult to_counter_reset(const Game& g, const Integer& n, std::size_t start_position,
                                    const ScaleCertificate& cert = {}, const CounterResetOptions& opts = {});

// Empty iff g is a counter-reset game.
std::vector<std::string> check_counter_reset(const Game& g);

}  // namespace qmc
