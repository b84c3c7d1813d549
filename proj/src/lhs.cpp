#include "qmc/lhs.hpp"

#include <deque>
#include <set>

#include "json_io.hpp"

namespace qmc {

using detail::Json;

Label empty_label(std::size_t dim) {
    return Label{Interval::point(0), std::vector<Interval>(dim, Interval::everything()), VarSet()};
}

bool label_allows(const Label& l, const std::vector<ExtRat>& values) {
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!l.constraints[i].contains(values[i])) return false;
    return true;
}

std::vector<ExtRat> advance(const std::vector<ExtRat>& values, const std::vector<Rational>& rates, const Label& l,
                            const ExtRat& t) {
    std::vector<ExtRat> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        out[i] = l.resets.contains(i) ? ExtRat(0) : values[i] + ExtRat(rates[i]) * t;
    return out;
}

std::optional<std::size_t> System::find_location(std::string_view name) const {
    for (std::size_t i = 0; i < locations.size(); ++i)
        if (locations[i].name == name) return i;
    return std::nullopt;
}

std::size_t System::location(std::string_view name) const {
    auto i = find_location(name);
    if (!i) throw Error(Errc::UnknownLocation, "no location named '" + std::string(name) + "'");
    return *i;
}

std::vector<std::string> System::predicate_names() const {
    std::set<std::string> names;
    for (const auto& l : locations)
        for (const auto& [k, v] : l.predicates) names.insert(k);
    return {names.begin(), names.end()};
}

SysState initial_state(const System& sys, std::size_t location) {
    return SysState{location, std::vector<ExtRat>(sys.dim(), ExtRat(0))};
}

namespace detail {

Json parse_json(std::string_view text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::Parse, e.what());
    }
}

const Json& field(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key))
        throw Error(Errc::Parse, where + ": missing field '" + key + "'");
    return j.at(key);
}

Rational rational_from_json(const Json& j, const std::string& where) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const Error& e) {
            throw Error(Errc::Parse, where + ": " + e.what());
        }
    }
    throw Error(Errc::Parse, where + ": expected a rational literal");
}

ExtRat ext_from_json(const Json& j, const std::string& where) {
    if (j.is_number_integer()) return ExtRat(j.get<long>());
    if (j.is_string()) {
        try {
            return ExtRat::parse(j.get<std::string>());
        } catch (const Error& e) {
            throw Error(Errc::Parse, where + ": " + e.what());
        }
    }
    throw Error(Errc::Parse, where + ": expected a number literal");
}

namespace {

std::size_t var_index(const std::vector<std::string>& variables, const std::string& name, const std::string& where) {
    for (std::size_t i = 0; i < variables.size(); ++i)
        if (variables[i] == name) return i;
    throw Error(Errc::Parse, where + ": unknown variable '" + name + "'");
}

Interval interval_from_json(const Json& j, const std::string& where) {
    if (!j.is_string()) throw Error(Errc::Parse, where + ": expected an interval string");
    try {
        return Interval::parse(j.get<std::string>());
    } catch (const Error& e) {
        throw Error(Errc::Parse, where + ": " + e.what());
    }
}

}  // namespace

Label label_from_json(const Json& j, const std::vector<std::string>& variables, const std::string& where) {
    if (!j.is_object()) throw Error(Errc::Parse, where + ": label must be an object");
    Label l = empty_label(variables.size());
    l.time = interval_from_json(field(j, "time", where), where + ".time");
    if (l.time.lo().value < ExtRat(0)) throw Error(Errc::Parse, where + ".time: negative time");
    if (j.contains("constraints")) {
        const Json& c = j.at("constraints");
        if (c.is_array()) {
            if (c.size() != variables.size())
                throw Error(Errc::Arity, where + ".constraints: " + std::to_string(c.size()) + " entries for " +
                                             std::to_string(variables.size()) + " variables");
            for (std::size_t i = 0; i < c.size(); ++i)
                l.constraints[i] = interval_from_json(c[i], where + ".constraints[" + std::to_string(i) + "]");
        } else if (c.is_object()) {
            for (const auto& [k, v] : c.items())
                l.constraints[var_index(variables, k, where + ".constraints")] =
                    interval_from_json(v, where + ".constraints." + k);
        } else {
            throw Error(Errc::Parse, where + ".constraints: expected object or array");
        }
    }
    if (j.contains("resets")) {
        const Json& r = j.at("resets");
        if (!r.is_array()) throw Error(Errc::Parse, where + ".resets: expected array");
        for (const auto& v : r) {
            if (!v.is_string()) throw Error(Errc::Parse, where + ".resets: expected variable names");
            l.resets.insert(var_index(variables, v.get<std::string>(), where + ".resets"));
        }
    }
    return l;
}

Json label_to_json(const Label& l, const std::vector<std::string>& variables) {
    Json j;
    j["time"] = l.time.str();
    Json c = Json::object();
    for (std::size_t i = 0; i < l.constraints.size(); ++i)
        if (!l.constraints[i].is_everything()) c[variables[i]] = l.constraints[i].str();
    j["constraints"] = c;
    Json r = Json::array();
    for (std::size_t i = 0; i < variables.size(); ++i)
        if (l.resets.contains(i)) r.push_back(variables[i]);
    j["resets"] = r;
    return j;
}

}  // namespace detail

System parse_system(std::string_view json_text) {
    using namespace detail;
    Json doc = parse_json(json_text);
    System sys;
    const Json& vars = field(doc, "variables", "system");
    if (!vars.is_array()) throw Error(Errc::Parse, "system.variables: expected array");
    for (const auto& v : vars) {
        if (!v.is_string()) throw Error(Errc::Parse, "system.variables: expected names");
        sys.variables.push_back(v.get<std::string>());
    }
    if (sys.dim() > 64) throw Error(Errc::Parse, "system.variables: at most 64 variables");
    std::set<std::string> seen_vars(sys.variables.begin(), sys.variables.end());
    if (seen_vars.size() != sys.dim()) throw Error(Errc::Parse, "system.variables: duplicate name");

    const Json& locs = field(doc, "locations", "system");
    if (!locs.is_array() || locs.empty()) throw Error(Errc::Parse, "system.locations: expected a nonempty array");
    for (std::size_t k = 0; k < locs.size(); ++k) {
        std::string where = "locations[" + std::to_string(k) + "]";
        const Json& lj = locs[k];
        Location loc;
        const Json& name = field(lj, "name", where);
        if (!name.is_string()) throw Error(Errc::Parse, where + ".name: expected string");
        loc.name = name.get<std::string>();
        if (sys.find_location(loc.name)) throw Error(Errc::Parse, where + ": duplicate location '" + loc.name + "'");
        if (lj.contains("rates")) {
            const Json& r = lj.at("rates");
            if (!r.is_array() || r.size() != sys.dim())
                throw Error(Errc::Arity, where + ".rates: expected " + std::to_string(sys.dim()) + " entries");
            for (std::size_t i = 0; i < r.size(); ++i)
                loc.rates.push_back(rational_from_json(r[i], where + ".rates[" + std::to_string(i) + "]"));
        } else {
            loc.rates.assign(sys.dim(), Rational(1));
        }
        if (lj.contains("predicates")) {
            const Json& p = lj.at("predicates");
            if (!p.is_object()) throw Error(Errc::Parse, where + ".predicates: expected object");
            for (const auto& [k2, v] : p.items())
                loc.predicates[k2] = ext_from_json(v, where + ".predicates." + k2);
        }
        sys.locations.push_back(std::move(loc));
    }
    auto names = sys.predicate_names();
    for (const auto& loc : sys.locations)
        for (const auto& n : names)
            if (!loc.predicates.count(n))
                throw Error(Errc::Parse, "location '" + loc.name + "': predicate '" + n + "' undefined");

    if (doc.contains("edges")) {
        const Json& edges = doc.at("edges");
        if (!edges.is_array()) throw Error(Errc::Parse, "system.edges: expected array");
        for (std::size_t k = 0; k < edges.size(); ++k) {
            std::string where = "edges[" + std::to_string(k) + "]";
            const Json& ej = edges[k];
            Edge e;
            for (const char* end : {"from", "to"}) {
                const Json& n = field(ej, end, where);
                if (!n.is_string()) throw Error(Errc::Parse, where + "." + end + ": expected location name");
                auto idx = sys.find_location(n.get<std::string>());
                if (!idx)
                    throw Error(Errc::UnknownLocation, where + "." + end + ": '" + n.get<std::string>() + "'");
                (std::string(end) == "from" ? e.from : e.to) = *idx;
            }
            const Json& labels = field(ej, "labels", where);
            if (!labels.is_array() || labels.empty())
                throw Error(Errc::Parse, where + ".labels: expected a nonempty array");
            for (std::size_t li = 0; li < labels.size(); ++li)
                e.labels.push_back(
                    label_from_json(labels[li], sys.variables, where + ".labels[" + std::to_string(li) + "]"));
            sys.edges.push_back(std::move(e));
        }
    }
    return sys;
}

std::string print_system(const System& sys) {
    Json doc;
    doc["variables"] = sys.variables;
    Json locs = Json::array();
    for (const auto& l : sys.locations) {
        Json lj;
        lj["name"] = l.name;
        Json rates = Json::array();
        for (const auto& r : l.rates) rates.push_back(r.get_str());
        lj["rates"] = rates;
        Json preds = Json::object();
        for (const auto& [k, v] : l.predicates) preds[k] = v.str();
        lj["predicates"] = preds;
        locs.push_back(lj);
    }
    doc["locations"] = locs;
    Json edges = Json::array();
    for (const auto& e : sys.edges) {
        Json ej;
        ej["from"] = sys.locations[e.from].name;
        ej["to"] = sys.locations[e.to].name;
        Json labels = Json::array();
        for (const auto& l : e.labels) labels.push_back(detail::label_to_json(l, sys.variables));
        ej["labels"] = labels;
        edges.push_back(ej);
    }
    doc["edges"] = edges;
    return doc.dump(2) + "\n";
}

std::vector<Violation> validate_initialised(const System& sys) {
    std::vector<Violation> out;
    for (std::size_t e = 0; e < sys.edges.size(); ++e) {
        const Edge& edge = sys.edges[e];
        const auto& a = sys.locations[edge.from].rates;
        const auto& b = sys.locations[edge.to].rates;
        for (std::size_t l = 0; l < edge.labels.size(); ++l)
            for (std::size_t i = 0; i < sys.dim(); ++i)
                if (a[i] != b[i] && !edge.labels[l].resets.contains(i))
                    out.push_back({Violation::Kind::NotInitialised, e, l, i,
                                   "edge (" + sys.locations[edge.from].name + "," + sys.locations[edge.to].name +
                                       ") label " + std::to_string(l) + ": rate of " + sys.variables[i] +
                                       " changes but it is not reset"});
    }
    return out;
}

std::vector<Violation> validate_rates(const System& sys, const std::vector<std::size_t>& payoff_vars) {
    std::vector<Violation> out;
    for (std::size_t v = 0; v < sys.locations.size(); ++v) {
        const Location& loc = sys.locations[v];
        for (std::size_t i = 0; i < sys.dim(); ++i) {
            if (loc.rates[i] != 0) continue;
            bool observed = false;
            for (auto p : payoff_vars) observed |= p == i;
            for (std::size_t e = 0; e < sys.edges.size() && !observed; ++e) {
                if (sys.edges[e].from != v) continue;
                for (const auto& l : sys.edges[e].labels) observed |= !l.constraints[i].is_everything();
            }
            if (observed)
                out.push_back({Violation::Kind::ZeroRate, 0, 0, i,
                               "location " + loc.name + ": " + sys.variables[i] + " has rate 0 but is observed"});
        }
    }
    return out;
}

bool allowed(const System& sys, const SysState& s, std::size_t edge, std::size_t label) {
    const Edge& e = sys.edges.at(edge);
    if (e.from != s.location) return false;
    return label_allows(e.labels.at(label), s.values);
}

SysState apply_move(const System& sys, const SysState& s, std::size_t edge, std::size_t label, const ExtRat& t) {
    const Edge& e = sys.edges.at(edge);
    const Label& l = e.labels.at(label);
    if (!l.time.contains(t) || !t.is_finite())
        throw Error(Errc::TimeOutOfInterval, t.str() + " not in " + l.time.str());
    if (!allowed(sys, s, edge, label)) throw Error(Errc::NotAllowed, "label constraints not satisfied");
    return SysState{e.to, advance(s.values, sys.locations[s.location].rates, l, t)};
}

std::optional<std::vector<SysState>> successors_enumerable(const System& sys, const SysState& s) {
    std::vector<SysState> out;
    for (std::size_t e = 0; e < sys.edges.size(); ++e) {
        if (sys.edges[e].from != s.location) continue;
        for (std::size_t l = 0; l < sys.edges[e].labels.size(); ++l) {
            if (!allowed(sys, s, e, l)) continue;
            const Label& lab = sys.edges[e].labels[l];
            if (!lab.time.is_point()) return std::nullopt;
            out.push_back(apply_move(sys, s, e, l, lab.time.lo().value));
        }
    }
    return out;
}

StateGraph explore_state_graph(const System& sys, const SysState& start, std::size_t limit) {
    StateGraph g;
    std::map<SysState, std::size_t> index;
    std::deque<std::size_t> work;
    auto intern = [&](const SysState& s) {
        auto [it, fresh] = index.emplace(s, g.states.size());
        if (fresh) {
            if (g.states.size() >= limit)
                throw Error(Errc::Limit, "state graph exceeds " + std::to_string(limit) + " states");
            g.states.push_back(s);
            g.succ.emplace_back();
            work.push_back(it->second);
        }
        return it->second;
    };
    intern(start);
    while (!work.empty()) {
        std::size_t k = work.front();
        work.pop_front();
        auto succ = successors_enumerable(sys, g.states[k]);
        if (!succ) throw Error(Errc::NotEnumerable, "non-point time interval reachable at " + sys.locations[g.states[k].location].name);
        std::set<std::size_t> targets;
        for (const auto& t : *succ) targets.insert(intern(t));
        g.succ[k].assign(targets.begin(), targets.end());
    }
    return g;
}

}  // namespace qmc
