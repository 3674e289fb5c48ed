#include "plf/kripke.hpp"

#include <fstream>

namespace plf {

KripkeModel::KripkeModel(std::vector<WorldId> worlds, std::set<std::pair<WorldId, WorldId>> relation,
                         std::map<Atom, std::set<WorldId>> valuation)
    : worlds_(std::move(worlds)), relation_(std::move(relation)), valuation_(std::move(valuation)) {
    if (worlds_.empty()) throw FormatError("a Kripke model needs at least one world");
    for (std::size_t i = 0; i < worlds_.size(); ++i) {
        if (!index_.emplace(worlds_[i], i).second)
            throw FormatError("duplicate world '" + worlds_[i] + "'");
    }
    succ_.resize(worlds_.size());
    for (const auto& [from, to] : relation_) succ_[index_of(from)].push_back(index_of(to));
    for (const auto& [atom, ws] : valuation_) {
        std::vector<bool> row(worlds_.size(), false);
        for (const auto& w : ws) row[index_of(w)] = true;
        truth_.emplace(atom, std::move(row));
    }
}

std::size_t KripkeModel::index_of(const WorldId& w) const {
    auto it = index_.find(w);
    if (it == index_.end()) throw UnknownWorld(w);
    return it->second;
}

bool KripkeModel::holds_atom(const Atom& a, std::size_t world) const {
    auto it = truth_.find(a);
    return it != truth_.end() && it->second[world];
}

namespace {

bool eval_at(const KripkeModel& m, std::size_t w, const Formula& f) {
    switch (f.kind()) {
    case FormulaKind::Atom: return m.holds_atom(f.atom(), w);
    case FormulaKind::Not: return !eval_at(m, w, f.child());
    case FormulaKind::And: return eval_at(m, w, f.left()) && eval_at(m, w, f.right());
    case FormulaKind::Or: return eval_at(m, w, f.left()) || eval_at(m, w, f.right());
    case FormulaKind::Implies: return !eval_at(m, w, f.left()) || eval_at(m, w, f.right());
    case FormulaKind::Iff: return eval_at(m, w, f.left()) == eval_at(m, w, f.right());
    case FormulaKind::Box:
        for (auto v : m.successors(w))
            if (!eval_at(m, v, f.child())) return false;
        return true;
    case FormulaKind::Diamond:
        for (auto v : m.successors(w))
            if (eval_at(m, v, f.child())) return true;
        return false;
    }
    return false;
}

}  // namespace

bool evaluate(const KripkeModel& m, const KripkeModel::WorldId& w, const Formula& f) {
    return eval_at(m, m.index_of(w), f);
}

bool valid(const KripkeModel& m, const Formula& f) {
    for (std::size_t w = 0; w < m.worlds().size(); ++w)
        if (!eval_at(m, w, f)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// JSON

KripkeModel model_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw FormatError("Kripke model must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (key != "worlds" && key != "relation" && key != "valuation")
            throw FormatError("unknown key '" + key + "' in Kripke model");
    }
    try {
        auto worlds = j.at("worlds").get<std::vector<std::string>>();
        std::set<std::pair<std::string, std::string>> rel;
        if (j.contains("relation")) {
            for (const auto& edge : j.at("relation")) {
                if (!edge.is_array() || edge.size() != 2)
                    throw FormatError("relation entries must be [from, to] pairs");
                rel.emplace(edge[0].get<std::string>(), edge[1].get<std::string>());
            }
        }
        std::map<Atom, std::set<std::string>> val;
        if (j.contains("valuation")) {
            if (!j.at("valuation").is_object()) throw FormatError("valuation must be an object");
            for (const auto& [key, ws] : j.at("valuation").items()) {
                Atom a;
                try {
                    a = parse_atom(key);
                } catch (const SyntaxError& e) {
                    throw FormatError("bad valuation key '" + key + "': " + e.what());
                }
                auto& slot = val[a];
                for (const auto& w : ws) slot.insert(w.get<std::string>());
            }
        }
        return KripkeModel(std::move(worlds), std::move(rel), std::move(val));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed Kripke model: ") + e.what());
    } catch (const UnknownWorld& e) {
        throw FormatError(e.what());
    }
}

nlohmann::json model_to_json(const KripkeModel& m) {
    nlohmann::json rel = nlohmann::json::array();
    for (const auto& [a, b] : m.relation()) rel.push_back({a, b});
    nlohmann::json val = nlohmann::json::object();
    for (const auto& [atom, ws] : m.valuation()) val[render(atom)] = ws;
    return {{"worlds", m.worlds()}, {"relation", rel}, {"valuation", val}};
}

KripkeModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("'" + path + "' is not valid JSON: " + e.what());
    }
    return model_from_json(j);
}

}  // namespace plf
