#include "plf/depth1.hpp"

#include <algorithm>
#include <map>

namespace plf {

const char* to_string(ClauseKind k) {
    switch (k) {
    case ClauseKind::MustAll: return "must-all";
    case ClauseKind::Forbidden: return "forbidden";
    case ClauseKind::Required: return "required";
    case ClauseKind::Conditional: return "conditional";
    }
    return "?";
}

Clause Clause::must_all(Formula phi, std::string label) {
    return {ClauseKind::MustAll, std::move(phi), std::nullopt, std::move(label)};
}
Clause Clause::forbidden(Formula phi, std::string label) {
    return {ClauseKind::Forbidden, std::move(phi), std::nullopt, std::move(label)};
}
Clause Clause::required(Formula phi, std::string label) {
    return {ClauseKind::Required, std::move(phi), std::nullopt, std::move(label)};
}
Clause Clause::conditional(Formula phi, Formula psi, std::string label) {
    return {ClauseKind::Conditional, std::move(phi), std::move(psi), std::move(label)};
}

Clause Clause::from_modal(const Formula& f, std::string label) {
    auto propositional = [&](const Formula& g) {
        if (!g.is_modality_free())
            throw FragmentError("nested modality in '" + render(f) + "'");
        return g;
    };
    switch (f.kind()) {
    case FormulaKind::Box: return must_all(propositional(f.child()), std::move(label));
    case FormulaKind::Diamond: return required(propositional(f.child()), std::move(label));
    case FormulaKind::Not:
        if (f.child().kind() == FormulaKind::Diamond)
            return forbidden(propositional(f.child().child()), std::move(label));
        break;
    case FormulaKind::Implies:
        if (f.left().kind() == FormulaKind::Diamond && f.right().kind() == FormulaKind::Diamond)
            return conditional(propositional(f.left().child()), propositional(f.right().child()),
                               std::move(label));
        break;
    default: break;
    }
    throw FragmentError("'" + render(f) + "' is not one of []p, ~<>p, <>p, <>p -> <>q");
}

Formula Clause::to_modal() const {
    switch (kind) {
    case ClauseKind::MustAll: return Formula::box(phi);
    case ClauseKind::Forbidden: return Formula::negation(Formula::diamond(phi));
    case ClauseKind::Required: return Formula::diamond(phi);
    case ClauseKind::Conditional: return Formula::implication(Formula::diamond(phi), Formula::diamond(*psi));
    }
    throw std::logic_error("bad clause kind");
}

// ---------------------------------------------------------------------------

Depth1Problem::Depth1Problem(std::vector<AtomDomain> domains, std::vector<Clause> clauses)
    : domains_(std::move(domains)), clauses_(std::move(clauses)) {
    std::set<std::string> known;
    for (const auto& d : domains_) {
        if (!is_valid_variable(d.variable)) throw FragmentError("invalid variable '" + d.variable + "'");
        if (d.values.empty()) throw FragmentError("empty domain for '" + d.variable + "'");
        if (!known.insert(d.variable).second) throw FragmentError("duplicate domain '" + d.variable + "'");
        std::set<std::string> seen;
        for (const auto& v : d.values)
            if (!is_valid_value(v) || !seen.insert(v).second)
                throw FragmentError("bad or duplicate value '" + v + "' for '" + d.variable + "'");
    }
    auto check = [&](const Formula& f) {
        if (!f.is_modality_free()) throw FragmentError("modal operator inside clause '" + render(f) + "'");
        for (const auto& v : f.variables())
            if (!known.count(v)) throw FragmentError("variable '" + v + "' has no domain");
    };
    for (const auto& c : clauses_) {
        check(c.phi);
        if (c.kind == ClauseKind::Conditional) {
            if (!c.psi) throw FragmentError("conditional clause without consequent");
            check(*c.psi);
        } else if (c.psi) {
            throw FragmentError("only conditional clauses carry a consequent");
        }
    }
}

Depth1Problem Depth1Problem::from_formulas(std::vector<AtomDomain> domains,
                                           const std::vector<Formula>& formulas) {
    std::vector<Clause> clauses;
    std::vector<Formula> todo(formulas.rbegin(), formulas.rend());
    while (!todo.empty()) {
        Formula f = todo.back();
        todo.pop_back();
        if (f.kind() == FormulaKind::And) {
            todo.push_back(f.right());
            todo.push_back(f.left());
            continue;
        }
        clauses.push_back(Clause::from_modal(f));
    }
    return Depth1Problem(std::move(domains), std::move(clauses));
}

Depth1Problem Depth1Problem::without_label(const std::string& label) const {
    std::vector<Clause> kept;
    std::copy_if(clauses_.begin(), clauses_.end(), std::back_inserter(kept),
                 [&](const Clause& c) { return c.label != label; });
    return Depth1Problem(domains_, std::move(kept));
}

// ---------------------------------------------------------------------------

ValuationGrid::ValuationGrid(std::vector<AtomDomain> domains) : domains_(std::move(domains)) {
    stride_.assign(domains_.size(), 1);
    for (std::size_t i = domains_.size(); i-- > 0;) {
        stride_[i] = size_;
        size_ *= domains_[i].values.size();
    }
}

ValuationPoint ValuationGrid::point(std::size_t index) const {
    ValuationPoint p;
    p.value_index.resize(domains_.size());
    for (std::size_t i = 0; i < domains_.size(); ++i)
        p.value_index[i] = (index / stride_[i]) % domains_[i].values.size();
    return p;
}

std::size_t ValuationGrid::index(const ValuationPoint& p) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < domains_.size(); ++i) idx += p.value_index.at(i) * stride_[i];
    return idx;
}

std::string ValuationGrid::describe(std::size_t index) const {
    auto p = point(index);
    std::string s;
    for (std::size_t i = 0; i < domains_.size(); ++i) {
        if (i) s += ' ';
        s += domains_[i].variable + "=" + domains_[i].values[p.value_index[i]];
    }
    return s;
}

PointSet ValuationGrid::satisfying(const Formula& phi) const {
    switch (phi.kind()) {
    case FormulaKind::Atom: {
        PointSet out(size_);
        const Atom& a = phi.atom();
        for (std::size_t i = 0; i < domains_.size(); ++i) {
            if (domains_[i].variable != a.variable) continue;
            const auto& vals = domains_[i].values;
            auto it = std::find(vals.begin(), vals.end(), a.value);
            if (it == vals.end()) return out;
            std::size_t v = static_cast<std::size_t>(it - vals.begin());
            for (std::size_t k = 0; k < size_; ++k)
                if ((k / stride_[i]) % vals.size() == v) out.set(k);
        }
        return out;
    }
    case FormulaKind::Not: return ~satisfying(phi.child());
    case FormulaKind::And: return satisfying(phi.left()) & satisfying(phi.right());
    case FormulaKind::Or: return satisfying(phi.left()) | satisfying(phi.right());
    case FormulaKind::Implies: return ~satisfying(phi.left()) | satisfying(phi.right());
    case FormulaKind::Iff: return ~(satisfying(phi.left()) ^ satisfying(phi.right()));
    default: throw FragmentError("modal operator in propositional position: '" + render(phi) + "'");
    }
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::size_t> members(const PointSet& s) {
    std::vector<std::size_t> out;
    for (auto i = s.find_first(); i != PointSet::npos; i = s.find_next(i)) out.push_back(i);
    return out;
}

}  // namespace

SatResult solve_depth1(const Depth1Problem& p) {
    ValuationGrid grid(p.domains());
    const auto& clauses = p.clauses();
    std::vector<PointSet> phi_sets, psi_sets(clauses.size());
    phi_sets.reserve(clauses.size());
    for (std::size_t k = 0; k < clauses.size(); ++k) {
        phi_sets.push_back(grid.satisfying(clauses[k].phi));
        if (clauses[k].psi) psi_sets[k] = grid.satisfying(*clauses[k].psi);
    }

    constexpr std::size_t kAlive = static_cast<std::size_t>(-1);
    // remover[i]: clause that filtered point i, or kAlive.
    std::vector<std::size_t> remover(grid.size(), kAlive);
    // step_of[i]: index into `fired` for points removed by deflation.
    std::vector<std::size_t> step_of(grid.size(), kAlive);

    PointSet alive = grid.full_set();
    for (std::size_t k = 0; k < clauses.size(); ++k) {
        PointSet dropped;
        if (clauses[k].kind == ClauseKind::MustAll)
            dropped = alive - phi_sets[k];
        else if (clauses[k].kind == ClauseKind::Forbidden)
            dropped = alive & phi_sets[k];
        else
            continue;
        for (auto i : members(dropped)) remover[i] = k;
        alive -= dropped;
    }

    struct Fired {
        std::size_t clause;
        PointSet removed;
    };
    std::vector<Fired> fired;
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t k = 0; k < clauses.size(); ++k) {
            if (clauses[k].kind != ClauseKind::Conditional) continue;
            PointSet hit = alive & phi_sets[k];
            if (hit.none() || alive.intersects(psi_sets[k])) continue;
            for (auto i : members(hit)) {
                remover[i] = k;
                step_of[i] = fired.size();
            }
            fired.push_back({k, hit});
            alive -= hit;
            changed = true;
        }
    }

    for (std::size_t k = 0; k < clauses.size(); ++k) {
        if (clauses[k].kind != ClauseKind::Required || alive.intersects(phi_sets[k])) continue;

        // Walk back from the uncovered clause: each deflation step depends on every
        // consequent point having been removed before it fired.
        std::map<std::size_t, std::vector<std::size_t>> filters;
        std::set<std::size_t> steps;
        std::vector<std::size_t> work = members(phi_sets[k]);
        std::vector<bool> seen(grid.size(), false);
        while (!work.empty()) {
            auto i = work.back();
            work.pop_back();
            if (seen[i]) continue;
            seen[i] = true;
            if (step_of[i] == kAlive) {
                filters[remover[i]].push_back(i);
                continue;
            }
            if (!steps.insert(step_of[i]).second) continue;
            for (auto j : members(psi_sets[fired[step_of[i]].clause])) work.push_back(j);
        }
        UnsatCore core{k, {}};
        for (auto& [clause, pts] : filters) {
            std::sort(pts.begin(), pts.end());
            core.steps.push_back({clause, false, std::move(pts)});
        }
        for (auto s : steps) core.steps.push_back({fired[s].clause, true, members(fired[s].removed)});
        return {std::nullopt, std::move(core)};
    }
    return {members(alive), std::nullopt};
}

bool is_solution(const Depth1Problem& p, const PointSet& worlds) {
    ValuationGrid grid(p.domains());
    for (const auto& c : p.clauses()) {
        PointSet phi = grid.satisfying(c.phi);
        switch (c.kind) {
        case ClauseKind::MustAll:
            if (!worlds.is_subset_of(phi)) return false;
            break;
        case ClauseKind::Forbidden:
            if (worlds.intersects(phi)) return false;
            break;
        case ClauseKind::Required:
            if (!worlds.intersects(phi)) return false;
            break;
        case ClauseKind::Conditional:
            if (worlds.intersects(phi) && !worlds.intersects(grid.satisfying(*c.psi))) return false;
            break;
        }
    }
    return true;
}

Formula exactly_one_value(const AtomDomain& d) {
    std::vector<Formula> options;
    for (std::size_t i = 0; i < d.values.size(); ++i) {
        std::vector<Formula> lits;
        for (std::size_t j = 0; j < d.values.size(); ++j) {
            Formula a = Formula::atom(d.variable, d.values[j]);
            lits.push_back(i == j ? a : Formula::negation(a));
        }
        options.push_back(Formula::conjunction_of(lits));
    }
    return Formula::box(Formula::disjunction_of(options));
}

KripkeModel witness_model(const Depth1Problem& p, const std::vector<std::size_t>& points) {
    ValuationGrid grid(p.domains());
    std::vector<std::string> worlds{"w0"};
    std::set<std::pair<std::string, std::string>> rel;
    std::map<Atom, std::set<std::string>> val;
    for (std::size_t n = 0; n < points.size(); ++n) {
        std::string w = "w" + std::to_string(n + 1);
        worlds.push_back(w);
        rel.emplace("w0", w);
        auto pt = grid.point(points[n]);
        for (std::size_t i = 0; i < p.domains().size(); ++i) {
            const auto& d = p.domains()[i];
            val[Atom(d.variable, d.values[pt.value_index[i]])].insert(w);
        }
    }
    return KripkeModel(std::move(worlds), std::move(rel), std::move(val));
}

bool verify_witness(const Depth1Problem& p, const std::vector<std::size_t>& points) {
    KripkeModel m = witness_model(p, points);
    for (const auto& d : p.domains())
        if (!evaluate(m, "w0", exactly_one_value(d))) return false;
    for (const auto& c : p.clauses())
        if (!evaluate(m, "w0", c.to_modal())) return false;
    return true;
}

}  // namespace plf
