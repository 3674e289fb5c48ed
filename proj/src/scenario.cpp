#include "plf/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace plf {

namespace {

std::size_t find_index(const std::vector<int>& vals, int v, const char* what) {
    auto it = std::find(vals.begin(), vals.end(), v);
    if (it == vals.end())
        throw InvalidBehavior(std::string("value ") + std::to_string(v) + " not in " + what + " domain");
    return static_cast<std::size_t>(it - vals.begin());
}

void check_domain(const std::vector<int>& vals, const char* what) {
    if (vals.empty()) throw InvalidBehavior(std::string("empty ") + what + " domain");
    std::set<int> seen;
    for (int v : vals) {
        if (v < 0) throw InvalidBehavior(std::string("negative value in ") + what + " domain");
        if (!seen.insert(v).second) throw InvalidBehavior(std::string("duplicate value in ") + what + " domain");
    }
}

}  // namespace

void ScenarioConfig::validate() const {
    check_domain(x_values, "x");
    check_domain(y_values, "y");
    check_domain(a_values, "a");
    check_domain(b_values, "b");
    if (friend_a) {
        if (!read_x) throw InvalidBehavior("friend_a requires read_x");
        x_index(*read_x);
    }
    if (friend_b) {
        if (!read_y) throw InvalidBehavior("friend_b requires read_y");
        y_index(*read_y);
    }
}

std::size_t ScenarioConfig::a_index(int v) const { return find_index(a_values, v, "a"); }
std::size_t ScenarioConfig::b_index(int v) const { return find_index(b_values, v, "b"); }
std::size_t ScenarioConfig::x_index(int v) const { return find_index(x_values, v, "x"); }
std::size_t ScenarioConfig::y_index(int v) const { return find_index(y_values, v, "y"); }

ScenarioConfig ScenarioConfig::bell() {
    ScenarioConfig c;
    c.friend_a = c.friend_b = false;
    c.read_x.reset();
    c.read_y.reset();
    return c;
}

std::string to_string(const Cell& c) {
    return "(" + std::to_string(c.a) + "," + std::to_string(c.b) + "," + std::to_string(c.x) + "," +
           std::to_string(c.y) + ")";
}

// ---------------------------------------------------------------------------

Behavior::Behavior(ScenarioConfig config, std::vector<bool> table)
    : config_(std::move(config)), possible_(std::move(table)) {
    config_.validate();
    if (possible_.size() != config_.num_cells())
        throw InvalidBehavior("possibility table has " + std::to_string(possible_.size()) +
                              " cells, expected " + std::to_string(config_.num_cells()));
    for (std::size_t ix = 0; ix < config_.num_x(); ++ix) {
        for (std::size_t iy = 0; iy < config_.num_y(); ++iy) {
            bool any = false;
            for (std::size_t ia = 0; ia < config_.num_a() && !any; ++ia)
                for (std::size_t ib = 0; ib < config_.num_b() && !any; ++ib) any = this->possible(ia, ib, ix, iy);
            if (!any)
                throw InvalidBehavior("context x=" + std::to_string(config_.x_values[ix]) +
                                      ", y=" + std::to_string(config_.y_values[iy]) + " has no possible outcome");
        }
    }
}

Behavior Behavior::from_cells(ScenarioConfig config, const std::vector<Cell>& possible_cells) {
    config.validate();
    std::vector<bool> table(config.num_cells(), false);
    auto idx = [&](const Cell& c) {
        return ((config.a_index(c.a) * config.num_b() + config.b_index(c.b)) * config.num_x() +
                config.x_index(c.x)) * config.num_y() + config.y_index(c.y);
    };
    for (const auto& c : possible_cells) table[idx(c)] = true;
    return Behavior(std::move(config), std::move(table));
}

Behavior Behavior::all_possible(ScenarioConfig config) {
    config.validate();
    std::size_t n = config.num_cells();
    return Behavior(std::move(config), std::vector<bool>(n, true));
}

bool Behavior::possible(const Cell& c) const {
    return possible(config_.a_index(c.a), config_.b_index(c.b), config_.x_index(c.x), config_.y_index(c.y));
}

Cell Behavior::cell_at(std::size_t ia, std::size_t ib, std::size_t ix, std::size_t iy) const {
    return {config_.a_values[ia], config_.b_values[ib], config_.x_values[ix], config_.y_values[iy]};
}

namespace {

template <typename Pred>
std::vector<Cell> collect(const Behavior& beh, Pred keep) {
    const auto& c = beh.config();
    std::vector<Cell> out;
    for (std::size_t ia = 0; ia < c.num_a(); ++ia)
        for (std::size_t ib = 0; ib < c.num_b(); ++ib)
            for (std::size_t ix = 0; ix < c.num_x(); ++ix)
                for (std::size_t iy = 0; iy < c.num_y(); ++iy)
                    if (keep(beh.possible(ia, ib, ix, iy))) out.push_back(beh.cell_at(ia, ib, ix, iy));
    return out;
}

}  // namespace

std::vector<Cell> Behavior::possible_cells() const {
    return collect(*this, [](bool p) { return p; });
}

std::vector<Cell> Behavior::impossible_cells() const {
    return collect(*this, [](bool p) { return !p; });
}

// ---------------------------------------------------------------------------

PnsReport check_pns(const Behavior& beh) {
    const auto& c = beh.config();
    PnsReport report;
    // Alice: OR_b possible(a,b,x,y) must not depend on y.
    for (std::size_t ia = 0; ia < c.num_a(); ++ia) {
        for (std::size_t ix = 0; ix < c.num_x(); ++ix) {
            std::vector<bool> marg(c.num_y(), false);
            for (std::size_t iy = 0; iy < c.num_y(); ++iy)
                for (std::size_t ib = 0; ib < c.num_b(); ++ib) marg[iy] = marg[iy] || beh.possible(ia, ib, ix, iy);
            for (std::size_t y1 = 0; y1 < c.num_y(); ++y1)
                for (std::size_t y2 = y1 + 1; y2 < c.num_y(); ++y2)
                    if (marg[y1] != marg[y2])
                        report.violations.push_back({'A', c.a_values[ia], {c.x_values[ix], c.y_values[y1]},
                                                     {c.x_values[ix], c.y_values[y2]}});
        }
    }
    // Bob: OR_a possible(a,b,x,y) must not depend on x.
    for (std::size_t ib = 0; ib < c.num_b(); ++ib) {
        for (std::size_t iy = 0; iy < c.num_y(); ++iy) {
            std::vector<bool> marg(c.num_x(), false);
            for (std::size_t ix = 0; ix < c.num_x(); ++ix)
                for (std::size_t ia = 0; ia < c.num_a(); ++ia) marg[ix] = marg[ix] || beh.possible(ia, ib, ix, iy);
            for (std::size_t x1 = 0; x1 < c.num_x(); ++x1)
                for (std::size_t x2 = x1 + 1; x2 < c.num_x(); ++x2)
                    if (marg[x1] != marg[x2])
                        report.violations.push_back({'B', c.b_values[ib], {c.x_values[x1], c.y_values[iy]},
                                                     {c.x_values[x2], c.y_values[iy]}});
        }
    }
    report.holds = report.violations.empty();
    return report;
}

// ---------------------------------------------------------------------------

Formula cell_event(const Cell& c) {
    return Formula::conjunction_of({Formula::atom(kVarA, std::to_string(c.a)), Formula::atom(kVarB, std::to_string(c.b)),
                                    Formula::atom(kVarX, std::to_string(c.x)), Formula::atom(kVarY, std::to_string(c.y))});
}

std::string cell_label(const Cell& c) { return "cell" + to_string(c); }

namespace {

std::vector<std::string> as_strings(const std::vector<int>& v) {
    std::vector<std::string> out;
    for (int x : v) out.push_back(std::to_string(x));
    return out;
}

// X=read -> (A=v1 & C=v1) | (A=v2 & C=v2) | ...
Clause reading_rule(const char* setting, int read, const char* outcome, const char* friend_var,
                    const std::vector<int>& values) {
    std::vector<Formula> matches;
    for (int v : values) {
        auto s = std::to_string(v);
        matches.push_back(Formula::conjunction(Formula::atom(outcome, s), Formula::atom(friend_var, s)));
    }
    return Clause::must_all(
        Formula::implication(Formula::atom(setting, std::to_string(read)), Formula::disjunction_of(matches)),
        std::string("read-") + outcome);
}

// <>E -> <>(E & Z=z) for every assignment E to every nonempty subset of `eligible`.
void add_agency_family(std::vector<Clause>& out, const std::vector<AtomDomain>& eligible, const AtomDomain& z) {
    const std::size_t n = eligible.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        std::vector<const AtomDomain*> vars;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t{1} << i)) vars.push_back(&eligible[i]);
        std::vector<std::size_t> pick(vars.size(), 0);
        for (;;) {
            std::vector<Formula> lits;
            for (std::size_t i = 0; i < vars.size(); ++i)
                lits.push_back(Formula::atom(vars[i]->variable, vars[i]->values[pick[i]]));
            Formula event = Formula::conjunction_of(lits);
            for (const auto& zv : z.values) {
                auto with_z = lits;
                with_z.push_back(Formula::atom(z.variable, zv));
                out.push_back(Clause::conditional(event, Formula::conjunction_of(with_z), "pla-" + z.variable));
            }
            std::size_t i = vars.size();
            while (i > 0 && ++pick[i - 1] == vars[i - 1]->values.size()) pick[--i] = 0;
            if (i == 0) break;
        }
    }
}

}  // namespace

Depth1Problem encode(const Behavior& beh) {
    const auto& c = beh.config();
    AtomDomain dom_a{kVarA, as_strings(c.a_values)};
    AtomDomain dom_b{kVarB, as_strings(c.b_values)};
    AtomDomain dom_c{kVarC, as_strings(c.a_values)};
    AtomDomain dom_d{kVarD, as_strings(c.b_values)};
    AtomDomain dom_x{kVarX, as_strings(c.x_values)};
    AtomDomain dom_y{kVarY, as_strings(c.y_values)};

    std::vector<AtomDomain> domains{dom_a, dom_b};
    if (c.friend_a) domains.push_back(dom_c);
    if (c.friend_b) domains.push_back(dom_d);
    domains.push_back(dom_x);
    domains.push_back(dom_y);

    std::vector<Clause> clauses;
    for (std::size_t ia = 0; ia < c.num_a(); ++ia)
        for (std::size_t ib = 0; ib < c.num_b(); ++ib)
            for (std::size_t ix = 0; ix < c.num_x(); ++ix)
                for (std::size_t iy = 0; iy < c.num_y(); ++iy) {
                    Cell cell = beh.cell_at(ia, ib, ix, iy);
                    if (beh.possible(ia, ib, ix, iy))
                        clauses.push_back(Clause::required(cell_event(cell), cell_label(cell)));
                    else
                        clauses.push_back(Clause::forbidden(cell_event(cell), cell_label(cell)));
                }

    if (c.friend_a) clauses.push_back(reading_rule(kVarX, *c.read_x, kVarA, kVarC, c.a_values));
    if (c.friend_b) clauses.push_back(reading_rule(kVarY, *c.read_y, kVarB, kVarD, c.b_values));

    // Variables outside each intervention's future light cone.
    std::vector<AtomDomain> not_after_x{dom_b};
    if (c.friend_a) not_after_x.push_back(dom_c);
    if (c.friend_b) not_after_x.push_back(dom_d);
    not_after_x.push_back(dom_y);
    std::vector<AtomDomain> not_after_y{dom_a};
    if (c.friend_a) not_after_y.push_back(dom_c);
    if (c.friend_b) not_after_y.push_back(dom_d);
    not_after_y.push_back(dom_x);

    add_agency_family(clauses, not_after_x, dom_x);
    add_agency_family(clauses, not_after_y, dom_y);

    return Depth1Problem(std::move(domains), std::move(clauses));
}

// ---------------------------------------------------------------------------
// JSON

ScenarioConfig config_from_json(const nlohmann::json& j) {
    ScenarioConfig c;
    try {
        if (j.contains("x_values")) c.x_values = j.at("x_values").get<std::vector<int>>();
        if (j.contains("y_values")) c.y_values = j.at("y_values").get<std::vector<int>>();
        if (j.contains("a_values")) c.a_values = j.at("a_values").get<std::vector<int>>();
        if (j.contains("b_values")) c.b_values = j.at("b_values").get<std::vector<int>>();
        if (j.contains("friend_a")) c.friend_a = j.at("friend_a").get<bool>();
        if (j.contains("friend_b")) c.friend_b = j.at("friend_b").get<bool>();
        if (j.contains("read_x")) {
            if (j.at("read_x").is_null())
                c.read_x.reset();
            else
                c.read_x = j.at("read_x").get<int>();
        }
        if (j.contains("read_y")) {
            if (j.at("read_y").is_null())
                c.read_y.reset();
            else
                c.read_y = j.at("read_y").get<int>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidBehavior(std::string("malformed scenario config: ") + e.what());
    }
    c.validate();
    return c;
}

Behavior behavior_from_json(const nlohmann::json& j) {
    static const std::set<std::string> keys{"x_values", "y_values", "a_values", "b_values", "friend_a",
                                            "friend_b", "read_x",   "read_y",   "possible"};
    if (!j.is_object()) throw InvalidBehavior("behavior must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (!keys.count(key)) throw InvalidBehavior("unknown key '" + key + "' in behavior");
    if (!j.contains("possible")) throw InvalidBehavior("behavior lacks 'possible'");
    ScenarioConfig config = config_from_json(j);
    std::vector<Cell> cells;
    try {
        for (const auto& row : j.at("possible")) {
            auto v = row.get<std::vector<int>>();
            if (v.size() != 4) throw InvalidBehavior("each possible cell is [a,b,x,y]");
            cells.push_back({v[0], v[1], v[2], v[3]});
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidBehavior(std::string("malformed 'possible' list: ") + e.what());
    }
    return Behavior::from_cells(std::move(config), cells);
}

nlohmann::json config_to_json(const ScenarioConfig& c) {
    nlohmann::json j{{"x_values", c.x_values}, {"y_values", c.y_values}, {"a_values", c.a_values},
                     {"b_values", c.b_values}, {"friend_a", c.friend_a}, {"friend_b", c.friend_b}};
    j["read_x"] = c.read_x ? nlohmann::json(*c.read_x) : nlohmann::json(nullptr);
    j["read_y"] = c.read_y ? nlohmann::json(*c.read_y) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json behavior_to_json(const Behavior& beh) {
    nlohmann::json j = config_to_json(beh.config());
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : beh.possible_cells()) cells.push_back({c.a, c.b, c.x, c.y});
    j["possible"] = cells;
    return j;
}

nlohmann::json pns_report_to_json(const PnsReport& r) {
    nlohmann::json v = nlohmann::json::array();
    for (const auto& x : r.violations)
        v.push_back({{"party", std::string(1, x.party)},
                     {"value", x.value},
                     {"settings", {{x.first.first, x.first.second}, {x.second.first, x.second.second}}}});
    return {{"holds", r.holds}, {"violations", v}};
}

Behavior load_behavior(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidBehavior("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidBehavior("'" + path + "' is not valid JSON: " + e.what());
    }
    return behavior_from_json(j);
}

}  // namespace plf
