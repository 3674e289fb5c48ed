// Random generators and test-only oracles shared by the suites.
#ifndef PLF_TESTS_SUPPORT_HPP
#define PLF_TESTS_SUPPORT_HPP

#include <cstdint>
#include <functional>
#include <set>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "plf/depth1.hpp"
#include "plf/formula.hpp"
#include "plf/kripke.hpp"
#include "plf/scenario.hpp"

namespace plf::testing {

using Rng = std::mt19937_64;

/// Uniform over behaviors satisfying per-context nonemptiness: each (x,y) context gets a
/// uniformly chosen nonempty set of (a,b) outcomes.
inline Behavior random_behavior(Rng& rng, const ScenarioConfig& cfg = ScenarioConfig{}) {
    const std::size_t outcomes = cfg.num_a() * cfg.num_b();
    std::uniform_int_distribution<unsigned long> pick(1, (1ul << outcomes) - 1);
    std::vector<bool> table(cfg.num_cells(), false);
    for (std::size_t ix = 0; ix < cfg.num_x(); ++ix)
        for (std::size_t iy = 0; iy < cfg.num_y(); ++iy) {
            unsigned long mask = pick(rng);
            for (std::size_t ia = 0; ia < cfg.num_a(); ++ia)
                for (std::size_t ib = 0; ib < cfg.num_b(); ++ib)
                    if (mask & (1ul << (ia * cfg.num_b() + ib)))
                        table[((ia * cfg.num_b() + ib) * cfg.num_x() + ix) * cfg.num_y() + iy] = true;
        }
    return Behavior(cfg, std::move(table));
}

/// Each cell possible independently with probability `density`, resampled until every
/// context is nonempty. Dense tables have rich slice families.
inline Behavior dense_behavior(Rng& rng, double density, const ScenarioConfig& cfg = ScenarioConfig{}) {
    std::bernoulli_distribution coin(density);
    for (;;) {
        std::vector<bool> table(cfg.num_cells());
        for (std::size_t i = 0; i < table.size(); ++i) table[i] = coin(rng);
        try {
            return Behavior(cfg, std::move(table));
        } catch (const InvalidBehavior&) {
        }
    }
}

/// Random formula over the given atoms. Modal operators only when `modal` is set.
inline Formula random_formula(Rng& rng, const std::vector<Atom>& atoms, int depth, bool modal) {
    std::uniform_int_distribution<int> kind(0, modal ? 7 : 5);
    std::uniform_int_distribution<std::size_t> which(0, atoms.size() - 1);
    if (depth <= 0) return Formula::atom(atoms[which(rng)]);
    switch (kind(rng)) {
    case 0: return Formula::atom(atoms[which(rng)]);
    case 1: return Formula::negation(random_formula(rng, atoms, depth - 1, modal));
    case 2: return Formula::conjunction(random_formula(rng, atoms, depth - 1, modal), random_formula(rng, atoms, depth - 1, modal));
    case 3: return Formula::disjunction(random_formula(rng, atoms, depth - 1, modal), random_formula(rng, atoms, depth - 1, modal));
    case 4: return Formula::implication(random_formula(rng, atoms, depth - 1, modal), random_formula(rng, atoms, depth - 1, modal));
    case 5: return Formula::equivalence(random_formula(rng, atoms, depth - 1, modal), random_formula(rng, atoms, depth - 1, modal));
    case 6: return Formula::diamond(random_formula(rng, atoms, depth - 1, modal));
    default: return Formula::box(random_formula(rng, atoms, depth - 1, modal));
    }
}

/// Random model over worlds w0..w{n-1} with arbitrary relation and valuation.
inline KripkeModel random_model(Rng& rng, std::size_t n, const std::vector<Atom>& atoms) {
    std::bernoulli_distribution coin(0.4);
    std::vector<std::string> worlds;
    for (std::size_t i = 0; i < n; ++i) worlds.push_back("w" + std::to_string(i));
    std::set<std::pair<std::string, std::string>> rel;
    for (const auto& u : worlds)
        for (const auto& v : worlds)
            if (coin(rng)) rel.emplace(u, v);
    std::map<Atom, std::set<std::string>> val;
    for (const auto& a : atoms)
        for (const auto& w : worlds)
            if (coin(rng)) val[a].insert(w);
    return KripkeModel(worlds, rel, val);
}

inline std::vector<AtomDomain> boolean_domains(std::size_t n) {
    std::vector<AtomDomain> d;
    for (std::size_t i = 0; i < n; ++i) d.push_back({"v" + std::to_string(i), {"0", "1"}});
    return d;
}

inline std::vector<Atom> atoms_of(const std::vector<AtomDomain>& doms) {
    std::vector<Atom> out;
    for (const auto& d : doms)
        for (const auto& v : d.values) out.emplace_back(d.variable, v);
    return out;
}

inline Depth1Problem random_problem(Rng& rng, std::size_t nvars) {
    auto doms = boolean_domains(nvars);
    auto atoms = atoms_of(doms);
    std::uniform_int_distribution<int> count(0, 4);
    std::uniform_int_distribution<int> depth(0, 2);
    std::vector<Clause> cs;
    for (int i = count(rng) + 1; i > 0; --i) cs.push_back(Clause::required(random_formula(rng, atoms, depth(rng), false)));
    for (int i = count(rng) / 2; i > 0; --i) cs.push_back(Clause::forbidden(random_formula(rng, atoms, depth(rng), false)));
    for (int i = count(rng) / 2; i > 0; --i) cs.push_back(Clause::must_all(random_formula(rng, atoms, depth(rng) + 1, false)));
    for (int i = count(rng) + count(rng); i > 0; --i)
        cs.push_back(Clause::conditional(random_formula(rng, atoms, depth(rng), false),
                                         random_formula(rng, atoms, depth(rng), false)));
    std::shuffle(cs.begin(), cs.end(), rng);
    return Depth1Problem(doms, cs);
}

// ---------------------------------------------------------------------------
// Independent propositional evaluation over an explicit assignment.

using Assignment = std::map<std::string, std::string>;

inline bool eval_prop(const Formula& f, const Assignment& s) {
    switch (f.kind()) {
    case FormulaKind::Atom: {
        auto it = s.find(f.atom().variable);
        return it != s.end() && it->second == f.atom().value;
    }
    case FormulaKind::Not: return !eval_prop(f.child(), s);
    case FormulaKind::And: return eval_prop(f.left(), s) && eval_prop(f.right(), s);
    case FormulaKind::Or: return eval_prop(f.left(), s) || eval_prop(f.right(), s);
    case FormulaKind::Implies: return !eval_prop(f.left(), s) || eval_prop(f.right(), s);
    case FormulaKind::Iff: return eval_prop(f.left(), s) == eval_prop(f.right(), s);
    default: throw std::logic_error("modal operator in eval_prop");
    }
}

inline std::vector<Assignment> all_assignments(const std::vector<AtomDomain>& doms) {
    std::vector<Assignment> out{{}};
    for (const auto& d : doms) {
        std::vector<Assignment> next;
        for (const auto& partial : out)
            for (const auto& v : d.values) {
                auto s = partial;
                s[d.variable] = v;
                next.push_back(std::move(s));
            }
        out = std::move(next);
    }
    return out;
}

/// Does the explicit world list satisfy every clause?
inline bool clauses_hold(const Depth1Problem& p, const std::vector<const Assignment*>& worlds) {
    auto any = [&](const Formula& f) {
        for (auto* w : worlds)
            if (eval_prop(f, *w)) return true;
        return false;
    };
    for (const auto& c : p.clauses()) {
        switch (c.kind) {
        case ClauseKind::MustAll:
            for (auto* w : worlds)
                if (!eval_prop(c.phi, *w)) return false;
            break;
        case ClauseKind::Forbidden:
            if (any(c.phi)) return false;
            break;
        case ClauseKind::Required:
            if (!any(c.phi)) return false;
            break;
        case ClauseKind::Conditional:
            if (any(c.phi) && !any(*c.psi)) return false;
            break;
        }
    }
    return true;
}

/// Exhaustive oracle: try every subset of the MustAll/Forbidden-filtered assignments.
inline bool brute_force_sat(const Depth1Problem& p) {
    std::vector<Assignment> pts;
    for (auto& s : all_assignments(p.domains())) {
        bool keep = true;
        for (const auto& c : p.clauses()) {
            if (c.kind == ClauseKind::MustAll && !eval_prop(c.phi, s)) keep = false;
            if (c.kind == ClauseKind::Forbidden && eval_prop(c.phi, s)) keep = false;
        }
        if (keep) pts.push_back(std::move(s));
    }
    if (pts.size() > 20) throw std::length_error("brute_force_sat: too many candidate worlds");
    for (unsigned long mask = 0; mask < (1ul << pts.size()); ++mask) {
        std::vector<const Assignment*> ws;
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (mask & (1ul << i)) ws.push_back(&pts[i]);
        if (clauses_hold(p, ws)) return true;
    }
    return false;
}

/// Naive deflation written against explicit assignments.
inline bool naive_deflation_sat(const Depth1Problem& p) {
    std::vector<Assignment> pts;
    for (auto& s : all_assignments(p.domains())) {
        bool keep = true;
        for (const auto& c : p.clauses()) {
            if (c.kind == ClauseKind::MustAll && !eval_prop(c.phi, s)) keep = false;
            if (c.kind == ClauseKind::Forbidden && eval_prop(c.phi, s)) keep = false;
        }
        if (keep) pts.push_back(std::move(s));
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& c : p.clauses()) {
            if (c.kind != ClauseKind::Conditional) continue;
            bool ante = false, cons = false;
            for (const auto& s : pts) {
                ante = ante || eval_prop(c.phi, s);
                cons = cons || eval_prop(*c.psi, s);
            }
            if (ante && !cons) {
                std::erase_if(pts, [&](const Assignment& s) { return eval_prop(c.phi, s); });
                changed = true;
            }
        }
    }
    std::vector<const Assignment*> ws;
    for (const auto& s : pts) ws.push_back(&s);
    return clauses_hold(p, ws);
}

// ---------------------------------------------------------------------------
// A candidate slice for fixed (c,d): a subset of the behavior obeying the reading rules
// and both agency marginal equalities.
inline bool slice_ok(const Behavior& beh, std::size_t ic, std::size_t id, const std::vector<bool>& s) {
    const auto& c = beh.config();
    auto idx = [&](std::size_t a, std::size_t b, std::size_t x, std::size_t y) { return beh.index(a, b, x, y); };
    for (std::size_t a = 0; a < c.num_a(); ++a)
        for (std::size_t b = 0; b < c.num_b(); ++b)
            for (std::size_t x = 0; x < c.num_x(); ++x)
                for (std::size_t y = 0; y < c.num_y(); ++y) {
                    if (!s[idx(a, b, x, y)]) continue;
                    if (!beh.possible(a, b, x, y)) return false;
                    if (c.friend_a && x == c.read_x_index() && a != ic) return false;
                    if (c.friend_b && y == c.read_y_index() && b != id) return false;
                }
    for (std::size_t b = 0; b < c.num_b(); ++b)
        for (std::size_t y = 0; y < c.num_y(); ++y) {
            std::set<bool> m;
            for (std::size_t x = 0; x < c.num_x(); ++x) {
                bool any = false;
                for (std::size_t a = 0; a < c.num_a(); ++a) any = any || s[idx(a, b, x, y)];
                m.insert(any);
            }
            if (m.size() > 1) return false;
        }
    for (std::size_t a = 0; a < c.num_a(); ++a)
        for (std::size_t x = 0; x < c.num_x(); ++x) {
            std::set<bool> m;
            for (std::size_t y = 0; y < c.num_y(); ++y) {
                bool any = false;
                for (std::size_t b = 0; b < c.num_b(); ++b) any = any || s[idx(a, b, x, y)];
                m.insert(any);
            }
            if (m.size() > 1) return false;
        }
    return true;
}

// Every valid slice, by enumeration over subsets of the possible cells.
inline std::vector<std::vector<bool>> valid_slices(const Behavior& beh, std::size_t ic, std::size_t id) {
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i < beh.table().size(); ++i)
        if (beh.table()[i]) pos.push_back(i);
    std::vector<std::vector<bool>> out;
    for (std::uint32_t mask = 0; mask < (1u << pos.size()); ++mask) {
        std::vector<bool> s(beh.table().size(), false);
        for (std::size_t k = 0; k < pos.size(); ++k)
            if (mask & (1u << k)) s[pos[k]] = true;
        if (slice_ok(beh, ic, id, s)) out.push_back(std::move(s));
    }
    return out;
}

inline std::vector<bool> cell_union(const std::vector<bool>& a, const std::vector<bool>& b) {
    std::vector<bool> u(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) u[i] = a[i] || b[i];
    return u;
}

inline std::vector<bool> slice_union(const Behavior& beh, std::size_t ic, std::size_t id) {
    std::vector<bool> u(beh.table().size(), false);
    for (const auto& s : valid_slices(beh, ic, id)) u = cell_union(u, s);
    return u;
}


}  // namespace plf::testing

#endif
