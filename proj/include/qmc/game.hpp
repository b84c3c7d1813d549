#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qmc/lhs.hpp"
#include "qmc/qmu.hpp"

namespace qmc {

using GameValue = ExtRat;

// mult * y_var + add. mult is always finite.
struct PayoffTerm {
    std::size_t var = 0;
    ExtRat mult = 0;
    ExtRat add = 0;

    ExtRat eval(const std::vector<ExtRat>& values) const;
    static PayoffTerm constant(const ExtRat& c) { return {0, 0, c}; }

    friend bool operator==(const PayoffTerm&, const PayoffTerm&) = default;
};

struct Position {
    std::string name;
    int owner = 0;
    int priority = 0;
    std::vector<Rational> rates;
    PayoffTerm payoff;

    friend bool operator==(const Position&, const Position&) = default;
};

struct Move {
    std::size_t from = 0;
    std::size_t to = 0;
    std::vector<Label> labels;

    friend bool operator==(const Move&, const Move&) = default;
};

class Game {
public:
    std::vector<std::string> variables;

    std::size_t dim() const { return variables.size(); }
    std::size_t size() const { return positions_.size(); }

    const std::vector<Position>& positions() const { return positions_; }
    const Position& position(std::size_t p) const { return positions_.at(p); }
    Position& position(std::size_t p) { return positions_.at(p); }
    const std::vector<Move>& moves() const { return moves_; }
    Move& move(std::size_t m) { return moves_.at(m); }
    const std::vector<std::size_t>& out(std::size_t p) const { return out_.at(p); }

    std::size_t add_position(Position p);
    std::size_t add_move(std::size_t from, std::size_t to, std::vector<Label> labels);
    std::optional<std::size_t> find_position(std::string_view name) const;
    std::size_t position_index(std::string_view name) const;

    int max_priority() const;
    std::size_t label_count() const;
    bool terminal_position(std::size_t p) const { return out_.at(p).empty(); }

    friend bool operator==(const Game& a, const Game& b) {
        return a.variables == b.variables && a.positions_ == b.positions_ && a.moves_ == b.moves_;
    }

private:
    std::vector<Position> positions_;
    std::vector<Move> moves_;
    std::vector<std::vector<std::size_t>> out_;
    std::map<std::string, std::size_t, std::less<>> by_name_;
};

struct GameState {
    std::size_t position = 0;
    std::vector<ExtRat> values;

    friend bool operator==(const GameState&, const GameState&) = default;
    friend auto operator<=>(const GameState&, const GameState&) = default;
};

GameState initial_game_state(const Game& g, std::size_t position);

struct Step {
    std::size_t move = 0;
    std::size_t label = 0;
    ExtRat time = 0;
};

// Finite play when cycle is empty; otherwise a lasso prefix.cycle^omega.
struct Play {
    GameState start;
    std::vector<Step> prefix;
    std::vector<Step> cycle;
};

GameState apply_game_move(const Game& g, const GameState& s, const Step& step);
GameValue play_payoff(const Game& g, const Play& p);

struct Choice {
    std::size_t move = 0;
    std::size_t label = 0;
    Interval time = Interval::point(0);
};

struct Successors {
    std::vector<Choice> choices;
    bool enumerable() const;
    // Requires enumerable().
    std::vector<GameState> states(const Game& g, const GameState& s) const;
};

Successors game_successors(const Game& g, const GameState& s);

std::vector<Violation> validate_initialised(const Game& g);

struct McGame {
    Game game;
    Formula formula;  // NNF actually used
    AlternationInfo alternation;
    std::map<std::pair<std::string, std::size_t>, std::size_t> index;

    std::size_t position_of(const Formula& sub, std::size_t location) const;
};

McGame build_mc_game(const System& sys, const Formula& f);

std::string dump_game(const Game& g);
Game parse_game(std::string_view text);

}  // namespace qmc
