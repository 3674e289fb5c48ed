#ifndef PLF_DEPTH1_HPP
#define PLF_DEPTH1_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "plf/formula.hpp"
#include "plf/kripke.hpp"

namespace plf {

class FragmentError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Constraint shapes asserted at the reference world w0. phi/psi are propositional.
enum class ClauseKind {
    MustAll,      // []phi
    Forbidden,    // ~<>phi
    Required,     // <>phi
    Conditional,  // <>phi -> <>psi
};

const char* to_string(ClauseKind k);

struct Clause {
    ClauseKind kind;
    Formula phi;
    std::optional<Formula> psi;  // Conditional only
    std::string label;

    static Clause must_all(Formula phi, std::string label = {});
    static Clause forbidden(Formula phi, std::string label = {});
    static Clause required(Formula phi, std::string label = {});
    static Clause conditional(Formula phi, Formula psi, std::string label = {});

    /// Classifies a modal formula into one of the four shapes; throws FragmentError otherwise.
    static Clause from_modal(const Formula& f, std::string label = {});

    /// The modal formula this clause stands for.
    Formula to_modal() const;

    friend bool operator==(const Clause&, const Clause&) = default;
};

/// A variable with its finite domain. Every world assigns exactly one value.
struct AtomDomain {
    std::string variable;
    std::vector<std::string> values;

    friend bool operator==(const AtomDomain&, const AtomDomain&) = default;
};

class Depth1Problem {
public:
    Depth1Problem(std::vector<AtomDomain> domains, std::vector<Clause> clauses);

    /// Splits top-level conjunctions and classifies each conjunct.
    static Depth1Problem from_formulas(std::vector<AtomDomain> domains,
                                       const std::vector<Formula>& formulas);

    const std::vector<AtomDomain>& domains() const { return domains_; }
    const std::vector<Clause>& clauses() const { return clauses_; }

    /// Copy without the clauses whose label equals `label`.
    Depth1Problem without_label(const std::string& label) const;

private:
    std::vector<AtomDomain> domains_;
    std::vector<Clause> clauses_;
};

/// Total assignment: one value index per domain, in domain order.
struct ValuationPoint {
    std::vector<std::size_t> value_index;

    friend bool operator==(const ValuationPoint&, const ValuationPoint&) = default;
    friend auto operator<=>(const ValuationPoint&, const ValuationPoint&) = default;
};

using PointSet = boost::dynamic_bitset<>;

/// Mixed-radix enumeration of all ValuationPoints of a domain list.
/// The last domain varies fastest.
class ValuationGrid {
public:
    explicit ValuationGrid(std::vector<AtomDomain> domains);

    std::size_t size() const { return size_; }
    const std::vector<AtomDomain>& domains() const { return domains_; }

    ValuationPoint point(std::size_t index) const;
    std::size_t index(const ValuationPoint& p) const;
    /// `A=1 B=0 ...`
    std::string describe(std::size_t index) const;

    /// Points satisfying a propositional formula.
    PointSet satisfying(const Formula& phi) const;
    PointSet empty_set() const { return PointSet(size_); }
    PointSet full_set() const { return ~PointSet(size_); }

private:
    std::vector<AtomDomain> domains_;
    std::vector<std::size_t> stride_;
    std::size_t size_ = 1;
};

/// One entry of an unsatisfiability explanation: `clause` removed `points`.
struct CoreStep {
    std::size_t clause;
    bool deflation;  // false: initial MustAll/Forbidden filter
    std::vector<std::size_t> points;
};

struct UnsatCore {
    std::size_t required_clause;
    /// Filter steps first, then deflation steps in firing order.
    std::vector<CoreStep> steps;
};

struct SatResult {
    /// Engaged iff satisfiable: the maximal admissible world set, as grid indices.
    std::optional<std::vector<std::size_t>> model;
    std::optional<UnsatCore> core;

    bool satisfiable() const { return model.has_value(); }
};

/// Decides the depth-1 fragment by greatest-fixpoint deflation.
SatResult solve_depth1(const Depth1Problem& p);

/// Direct check of a candidate world set against every clause.
bool is_solution(const Depth1Problem& p, const PointSet& worlds);

/// `[] ( (F=v1 & ~F=v2 ...) | (~F=v1 & F=v2 ...) ... )`
Formula exactly_one_value(const AtomDomain& d);

/// Kripke model with worlds w0, w1..wn, w0 R wi, and each wi valued by the i-th point.
KripkeModel witness_model(const Depth1Problem& p, const std::vector<std::size_t>& points);

/// Builds witness_model and checks every clause and every exactly-one-value formula at w0
/// through the Kripke evaluator.
bool verify_witness(const Depth1Problem& p, const std::vector<std::size_t>& points);

}  // namespace plf

#endif
