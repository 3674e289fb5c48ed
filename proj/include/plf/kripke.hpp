#ifndef PLF_KRIPKE_HPP
#define PLF_KRIPKE_HPP

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "plf/formula.hpp"

namespace plf {

class UnknownWorld : public std::out_of_range {
public:
    explicit UnknownWorld(const std::string& world)
        : std::out_of_range("unknown world '" + world + "'") {}
};

/// Rejected model or input file.
class FormatError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Finite Kripke model <W, R, V>. No frame conditions are imposed on R.
/// Atoms missing from the valuation are false in every world.
class KripkeModel {
public:
    using WorldId = std::string;

    KripkeModel(std::vector<WorldId> worlds, std::set<std::pair<WorldId, WorldId>> relation,
                std::map<Atom, std::set<WorldId>> valuation);

    const std::vector<WorldId>& worlds() const { return worlds_; }
    const std::set<std::pair<WorldId, WorldId>>& relation() const { return relation_; }
    const std::map<Atom, std::set<WorldId>>& valuation() const { return valuation_; }

    bool has_world(const WorldId& w) const { return index_.count(w) != 0; }
    std::size_t index_of(const WorldId& w) const;
    /// Worlds accessible from world #i, as indices.
    const std::vector<std::size_t>& successors(std::size_t i) const { return succ_[i]; }
    bool holds_atom(const Atom& a, std::size_t world) const;

private:
    std::vector<WorldId> worlds_;
    std::set<std::pair<WorldId, WorldId>> relation_;
    std::map<Atom, std::set<WorldId>> valuation_;

    std::map<WorldId, std::size_t> index_;
    std::vector<std::vector<std::size_t>> succ_;
    std::map<Atom, std::vector<bool>> truth_;
};

/// M, w |= f.
bool evaluate(const KripkeModel& m, const KripkeModel::WorldId& w, const Formula& f);
/// True iff f holds at every world of m.
bool valid(const KripkeModel& m, const Formula& f);

/// {"worlds": [...], "relation": [[u, v], ...], "valuation": {"A=1": [...]}}
KripkeModel model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const KripkeModel& m);
KripkeModel load_model(const std::string& path);

}  // namespace plf

#endif
