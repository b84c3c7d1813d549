#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qmc/numerics.hpp"

namespace qmc {

// Set of variable indices, at most 64 variables.
class VarSet {
public:
    VarSet() = default;
    explicit VarSet(std::uint64_t bits) : bits_(bits) {}
    static VarSet all(std::size_t dim) { return VarSet(dim >= 64 ? ~0ULL : ((1ULL << dim) - 1)); }

    bool contains(std::size_t i) const { return (bits_ >> i) & 1U; }
    void insert(std::size_t i) { bits_ |= (1ULL << i); }
    bool empty() const { return bits_ == 0; }
    std::size_t size() const { return static_cast<std::size_t>(__builtin_popcountll(bits_)); }
    std::uint64_t bits() const { return bits_; }

    friend bool operator==(VarSet, VarSet) = default;
    friend auto operator<=>(VarSet, VarSet) = default;

private:
    std::uint64_t bits_ = 0;
};

struct Label {
    Interval time = Interval::point(0);
    std::vector<Interval> constraints;
    VarSet resets;

    friend bool operator==(const Label&, const Label&) = default;
};

// Label with time [0,0], no constraints and no resets.
Label empty_label(std::size_t dim);

bool label_allows(const Label& l, const std::vector<ExtRat>& values);
std::vector<ExtRat> advance(const std::vector<ExtRat>& values, const std::vector<Rational>& rates, const Label& l,
                            const ExtRat& t);

struct Location {
    std::string name;
    std::vector<Rational> rates;
    std::map<std::string, ExtRat> predicates;

    friend bool operator==(const Location&, const Location&) = default;
};

struct Edge {
    std::size_t from = 0;
    std::size_t to = 0;
    std::vector<Label> labels;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct System {
    std::vector<std::string> variables;
    std::vector<Location> locations;
    std::vector<Edge> edges;

    std::size_t dim() const { return variables.size(); }
    std::optional<std::size_t> find_location(std::string_view name) const;
    std::size_t location(std::string_view name) const;
    std::vector<std::string> predicate_names() const;

    friend bool operator==(const System&, const System&) = default;
};

struct SysState {
    std::size_t location = 0;
    std::vector<ExtRat> values;

    friend bool operator==(const SysState&, const SysState&) = default;
    friend auto operator<=>(const SysState&, const SysState&) = default;
};

SysState initial_state(const System& sys, std::size_t location);

System parse_system(std::string_view json_text);
std::string print_system(const System& sys);

struct Violation {
    enum class Kind { NotInitialised, ZeroRate };
    Kind kind = Kind::NotInitialised;
    std::size_t edge = 0;
    std::size_t label = 0;
    std::size_t variable = 0;
    std::string message;
};

std::vector<Violation> validate_initialised(const System& sys);
// Zero rates at a location are rejected when the variable is observed there
// (constrained on an outgoing label). Unobserved zero rates are harmless.
std::vector<Violation> validate_rates(const System& sys, const std::vector<std::size_t>& payoff_vars = {});

bool allowed(const System& sys, const SysState& s, std::size_t edge, std::size_t label);
SysState apply_move(const System& sys, const SysState& s, std::size_t edge, std::size_t label, const ExtRat& t);
std::optional<std::vector<SysState>> successors_enumerable(const System& sys, const SysState& s);

struct StateGraph {
    std::vector<SysState> states;
    std::vector<std::vector<std::size_t>> succ;
};

// Reachable states with point-time labels only. Throws NotEnumerable or Limit.
StateGraph explore_state_graph(const System& sys, const SysState& start, std::size_t limit = 5000);

}  // namespace qmc
