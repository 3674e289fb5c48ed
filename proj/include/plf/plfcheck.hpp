#ifndef PLF_PLFCHECK_HPP
#define PLF_PLFCHECK_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "plf/scenario.hpp"

namespace plf {

class ConfigMismatch : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class DomainTooLarge : public std::length_error {
    using std::length_error::length_error;
};

/// Why a cell is absent from a (c,d) slice.
enum class EliminationKind {
    Impossible,  // the behavior itself rules the cell out
    ReadingA,    // X = read_x but A != C
    ReadingB,    // Y = read_y but B != D
    AgencyX,     // Bob's marginal for fixed (b,y) must not depend on X
    AgencyY,     // Alice's marginal for fixed (a,x) must not depend on Y
};

const char* to_string(EliminationKind k);

/// One elimination. For the agency kinds, `value` is the outcome whose marginal
/// possibility is empty at `empty_setting` of the intervening party while the
/// owner's setting is `own_setting`; `killed` lists the cells removed on the other
/// settings. For the other kinds `killed` is the single cell concerned.
struct Elimination {
    EliminationKind kind;
    std::vector<Cell> killed;
    int value = 0;
    int own_setting = 0;
    int empty_setting = 0;
};

/// The greatest sub-table of the behavior, for one fixed (c,d), that obeys the reading
/// rules and the local-agency marginal equalities.
struct SubTable {
    std::size_t c_index = 0;
    std::size_t d_index = 0;
    std::vector<bool> cells;  // Behavior index order
    /// For each cell: index into `steps` that removed it, or -1 when removed before
    /// deflation (impossible or reading) or never removed.
    std::vector<int> removed_by;
    std::vector<Elimination> steps;  // agency eliminations in firing order
};

SubTable maximal_subtable(const Behavior& beh, std::size_t c_index, std::size_t d_index);

/// Possibility assignment over (a,b,c,d,x,y). The c (d) axis has length 1 when Alice's
/// (Bob's) friend is absent.
class ExtendedTable {
public:
    explicit ExtendedTable(ScenarioConfig config);

    const ScenarioConfig& config() const { return config_; }
    std::size_t index(std::size_t ia, std::size_t ib, std::size_t ic, std::size_t id, std::size_t ix,
                      std::size_t iy) const;
    bool at(std::size_t ia, std::size_t ib, std::size_t ic, std::size_t id, std::size_t ix, std::size_t iy) const {
        return entries_[index(ia, ib, ic, id, ix, iy)];
    }
    void set(std::size_t ia, std::size_t ib, std::size_t ic, std::size_t id, std::size_t ix, std::size_t iy,
             bool v) {
        entries_[index(ia, ib, ic, id, ix, iy)] = v;
    }
    std::size_t size() const { return entries_.size(); }

private:
    ScenarioConfig config_;
    std::vector<bool> entries_;
};

struct TraceBranch {
    std::size_t c_index = 0;
    std::size_t d_index = 0;
    /// Dependency-ordered: facts about the starting table, then agency eliminations.
    /// The last step removes the target.
    std::vector<Elimination> steps;
};

struct ProofTrace {
    Cell target;
    std::vector<TraceBranch> branches;  // one per (c,d)
};

struct Verdict {
    bool feasible = false;
    std::optional<ExtendedTable> witness;
    std::optional<ProofTrace> trace;
};

/// Decides whether an extended table exists whose (c,d)-marginal is the behavior.
Verdict plf_feasible(const Behavior& beh);

/// Independent exhaustive decision; throws DomainTooLarge above 24 cells per slice.
bool brute_force_feasible(const Behavior& beh);

/// True iff `t` obeys the reading rules, the agency marginal equalities, per-context
/// nonemptiness, and marginalizes to `beh`. Throws ConfigMismatch.
bool validate_extended_table(const ExtendedTable& t, const Behavior& beh);

/// Re-applies a branch starting from the full table: every absent cell the argument uses
/// must be cited as a fact, every step must be licensed, and the target must end up eliminated.
bool replay_branch(const Behavior& beh, const Cell& target, const TraceBranch& branch);

nlohmann::json trace_to_json(const Behavior& beh, const ProofTrace& trace);
std::string trace_to_text(const Behavior& beh, const ProofTrace& trace);
nlohmann::json extended_table_to_json(const ExtendedTable& t);

}  // namespace plf

#endif
