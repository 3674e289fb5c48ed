#include "plf/plfcheck.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>

namespace plf {

const char* to_string(EliminationKind k) {
    switch (k) {
    case EliminationKind::Impossible: return "impossible";
    case EliminationKind::ReadingA: return "reading-A";
    case EliminationKind::ReadingB: return "reading-B";
    case EliminationKind::AgencyX: return "agency-X";
    case EliminationKind::AgencyY: return "agency-Y";
    }
    return "?";
}

namespace {

struct Dims {
    std::size_t na, nb, nx, ny;
    explicit Dims(const ScenarioConfig& c) : na(c.num_a()), nb(c.num_b()), nx(c.num_x()), ny(c.num_y()) {}
    std::size_t at(std::size_t ia, std::size_t ib, std::size_t ix, std::size_t iy) const {
        return ((ia * nb + ib) * nx + ix) * ny + iy;
    }
};

// Reason a cell is missing from the masked starting table of a slice, if any.
std::optional<EliminationKind> initial_reason(const Behavior& beh, std::size_t ic, std::size_t id, std::size_t ia,
                                              std::size_t ib, std::size_t ix, std::size_t iy) {
    const auto& c = beh.config();
    if (!beh.possible(ia, ib, ix, iy)) return EliminationKind::Impossible;
    if (c.friend_a && ix == c.read_x_index() && ia != ic) return EliminationKind::ReadingA;
    if (c.friend_b && iy == c.read_y_index() && ib != id) return EliminationKind::ReadingB;
    return std::nullopt;
}

std::vector<bool> masked_table(const Behavior& beh, std::size_t ic, std::size_t id) {
    Dims n(beh.config());
    std::vector<bool> t(beh.config().num_cells(), false);
    for (std::size_t ia = 0; ia < n.na; ++ia)
        for (std::size_t ib = 0; ib < n.nb; ++ib)
            for (std::size_t ix = 0; ix < n.nx; ++ix)
                for (std::size_t iy = 0; iy < n.ny; ++iy)
                    t[n.at(ia, ib, ix, iy)] = !initial_reason(beh, ic, id, ia, ib, ix, iy);
    return t;
}

}  // namespace

SubTable maximal_subtable(const Behavior& beh, std::size_t c_index, std::size_t d_index) {
    const auto& cfg = beh.config();
    if (c_index >= cfg.num_c() || d_index >= cfg.num_d()) throw std::out_of_range("friend outcome index");
    Dims n(cfg);
    SubTable st;
    st.c_index = c_index;
    st.d_index = d_index;
    st.cells = masked_table(beh, c_index, d_index);
    st.removed_by.assign(st.cells.size(), -1);

    auto kill = [&](std::size_t idx, Elimination& step, std::size_t ia, std::size_t ib, std::size_t ix,
                    std::size_t iy) {
        st.cells[idx] = false;
        st.removed_by[idx] = static_cast<int>(st.steps.size());
        step.killed.push_back(beh.cell_at(ia, ib, ix, iy));
    };

    for (bool changed = true; changed;) {
        changed = false;
        // Bob's side: for fixed (b,y), "B=b possible" must not depend on x.
        for (std::size_t ib = 0; ib < n.nb; ++ib) {
            for (std::size_t iy = 0; iy < n.ny; ++iy) {
                std::vector<bool> marg(n.nx, false);
                for (std::size_t ix = 0; ix < n.nx; ++ix)
                    for (std::size_t ia = 0; ia < n.na; ++ia) marg[ix] = marg[ix] || st.cells[n.at(ia, ib, ix, iy)];
                auto empty = std::find(marg.begin(), marg.end(), false);
                if (empty == marg.end() || std::none_of(marg.begin(), marg.end(), [](bool b) { return b; })) continue;
                Elimination step{EliminationKind::AgencyX, {}, cfg.b_values[ib], cfg.y_values[iy],
                                 cfg.x_values[static_cast<std::size_t>(empty - marg.begin())]};
                for (std::size_t ix = 0; ix < n.nx; ++ix)
                    for (std::size_t ia = 0; ia < n.na; ++ia)
                        if (st.cells[n.at(ia, ib, ix, iy)]) kill(n.at(ia, ib, ix, iy), step, ia, ib, ix, iy);
                st.steps.push_back(std::move(step));
                changed = true;
            }
        }
        // Alice's side: for fixed (a,x), "A=a possible" must not depend on y.
        for (std::size_t ia = 0; ia < n.na; ++ia) {
            for (std::size_t ix = 0; ix < n.nx; ++ix) {
                std::vector<bool> marg(n.ny, false);
                for (std::size_t iy = 0; iy < n.ny; ++iy)
                    for (std::size_t ib = 0; ib < n.nb; ++ib) marg[iy] = marg[iy] || st.cells[n.at(ia, ib, ix, iy)];
                auto empty = std::find(marg.begin(), marg.end(), false);
                if (empty == marg.end() || std::none_of(marg.begin(), marg.end(), [](bool b) { return b; })) continue;
                Elimination step{EliminationKind::AgencyY, {}, cfg.a_values[ia], cfg.x_values[ix],
                                 cfg.y_values[static_cast<std::size_t>(empty - marg.begin())]};
                for (std::size_t iy = 0; iy < n.ny; ++iy)
                    for (std::size_t ib = 0; ib < n.nb; ++ib)
                        if (st.cells[n.at(ia, ib, ix, iy)]) kill(n.at(ia, ib, ix, iy), step, ia, ib, ix, iy);
                st.steps.push_back(std::move(step));
                changed = true;
            }
        }
    }
    return st;
}

// ---------------------------------------------------------------------------

ExtendedTable::ExtendedTable(ScenarioConfig config) : config_(std::move(config)) {
    config_.validate();
    entries_.assign(config_.num_cells() * config_.num_c() * config_.num_d(), false);
}

std::size_t ExtendedTable::index(std::size_t ia, std::size_t ib, std::size_t ic, std::size_t id, std::size_t ix,
                                 std::size_t iy) const {
    const auto& c = config_;
    return ((((ia * c.num_b() + ib) * c.num_c() + ic) * c.num_d() + id) * c.num_x() + ix) * c.num_y() + iy;
}

// ---------------------------------------------------------------------------

namespace {

TraceBranch build_branch(const Behavior& beh, const SubTable& st, std::size_t target_idx) {
    const auto& cfg = beh.config();
    Dims n(cfg);
    std::set<std::size_t> fact_cells;
    std::set<int> used_steps;

    std::vector<std::size_t> work{target_idx};
    std::set<std::size_t> seen;
    while (!work.empty()) {
        std::size_t idx = work.back();
        work.pop_back();
        if (!seen.insert(idx).second) continue;
        int s = st.removed_by[idx];
        if (s < 0) {
            fact_cells.insert(idx);
            continue;
        }
        if (!used_steps.insert(s).second) continue;
        // The step fired because its empty group was already empty: every cell of that
        // group is a prerequisite.
        const Elimination& e = st.steps[static_cast<std::size_t>(s)];
        if (e.kind == EliminationKind::AgencyX) {
            std::size_t ib = cfg.b_index(e.value), iy = cfg.y_index(e.own_setting), ix = cfg.x_index(e.empty_setting);
            for (std::size_t ia = 0; ia < n.na; ++ia) work.push_back(n.at(ia, ib, ix, iy));
        } else {
            std::size_t ia = cfg.a_index(e.value), ix = cfg.x_index(e.own_setting), iy = cfg.y_index(e.empty_setting);
            for (std::size_t ib = 0; ib < n.nb; ++ib) work.push_back(n.at(ia, ib, ix, iy));
        }
    }

    TraceBranch br;
    br.c_index = st.c_index;
    br.d_index = st.d_index;
    for (auto kind : {EliminationKind::Impossible, EliminationKind::ReadingA, EliminationKind::ReadingB}) {
        for (std::size_t idx : fact_cells) {
            std::size_t iy = idx % n.ny, ix = (idx / n.ny) % n.nx, ib = (idx / (n.ny * n.nx)) % n.nb,
                        ia = idx / (n.ny * n.nx * n.nb);
            if (initial_reason(beh, st.c_index, st.d_index, ia, ib, ix, iy) == kind)
                br.steps.push_back({kind, {beh.cell_at(ia, ib, ix, iy)}});
        }
    }
    for (int s : used_steps) br.steps.push_back(st.steps[static_cast<std::size_t>(s)]);
    return br;
}

}  // namespace

Verdict plf_feasible(const Behavior& beh) {
    const auto& cfg = beh.config();
    std::vector<SubTable> slices;
    std::vector<bool> covered(cfg.num_cells(), false);
    for (std::size_t ic = 0; ic < cfg.num_c(); ++ic)
        for (std::size_t id = 0; id < cfg.num_d(); ++id) {
            slices.push_back(maximal_subtable(beh, ic, id));
            for (std::size_t i = 0; i < covered.size(); ++i) covered[i] = covered[i] || slices.back().cells[i];
        }

    Verdict v;
    for (std::size_t i = 0; i < covered.size(); ++i) {
        if (beh.table()[i] && !covered[i]) {
            Dims n(cfg);
            std::size_t iy = i % n.ny, ix = (i / n.ny) % n.nx, ib = (i / (n.ny * n.nx)) % n.nb,
                        ia = i / (n.ny * n.nx * n.nb);
            ProofTrace trace{beh.cell_at(ia, ib, ix, iy), {}};
            for (const auto& st : slices) trace.branches.push_back(build_branch(beh, st, i));
            v.trace = std::move(trace);
            return v;
        }
    }

    v.feasible = true;
    ExtendedTable t(cfg);
    Dims n(cfg);
    for (const auto& st : slices)
        for (std::size_t ia = 0; ia < n.na; ++ia)
            for (std::size_t ib = 0; ib < n.nb; ++ib)
                for (std::size_t ix = 0; ix < n.nx; ++ix)
                    for (std::size_t iy = 0; iy < n.ny; ++iy)
                        if (st.cells[n.at(ia, ib, ix, iy)]) t.set(ia, ib, st.c_index, st.d_index, ix, iy, true);
    v.witness = std::move(t);
    return v;
}

// ---------------------------------------------------------------------------
// Exhaustive oracle. Cells are bit positions; shares nothing with the deflation above.

bool brute_force_feasible(const Behavior& beh) {
    const auto& cfg = beh.config();
    const std::size_t NA = cfg.num_a(), NB = cfg.num_b(), NX = cfg.num_x(), NY = cfg.num_y();
    const std::size_t cells = NA * NB * NX * NY;
    if (cells > 24) throw DomainTooLarge("brute force is limited to 24 cells per slice, got " + std::to_string(cells));

    auto bit = [&](std::size_t a, std::size_t b, std::size_t x, std::size_t y) -> std::uint32_t {
        return std::uint32_t{1} << (((a * NB + b) * NX + x) * NY + y);
    };

    std::uint32_t possible = 0;
    for (std::size_t a = 0; a < NA; ++a)
        for (std::size_t b = 0; b < NB; ++b)
            for (std::size_t x = 0; x < NX; ++x)
                for (std::size_t y = 0; y < NY; ++y)
                    if (beh.possible(a, b, x, y)) possible |= bit(a, b, x, y);

    // Group masks: bob[b][y][x] = cells with that (b,x,y) over all a; alice[a][x][y] likewise.
    std::vector<std::uint32_t> bob(NB * NY * NX, 0), alice(NA * NX * NY, 0);
    for (std::size_t a = 0; a < NA; ++a)
        for (std::size_t b = 0; b < NB; ++b)
            for (std::size_t x = 0; x < NX; ++x)
                for (std::size_t y = 0; y < NY; ++y) {
                    bob[(b * NY + y) * NX + x] |= bit(a, b, x, y);
                    alice[(a * NX + x) * NY + y] |= bit(a, b, x, y);
                }

    auto agency_ok = [&](std::uint32_t t) {
        for (std::size_t g = 0; g < NB * NY; ++g) {
            bool first = (t & bob[g * NX]) != 0;
            for (std::size_t x = 1; x < NX; ++x)
                if (((t & bob[g * NX + x]) != 0) != first) return false;
        }
        for (std::size_t g = 0; g < NA * NX; ++g) {
            bool first = (t & alice[g * NY]) != 0;
            for (std::size_t y = 1; y < NY; ++y)
                if (((t & alice[g * NY + y]) != 0) != first) return false;
        }
        return true;
    };

    const std::size_t NC = cfg.friend_a ? NA : 1, ND = cfg.friend_b ? NB : 1;
    std::uint32_t covered = 0;
    for (std::size_t c = 0; c < NC; ++c) {
        for (std::size_t d = 0; d < ND; ++d) {
            std::uint32_t banned = 0;
            for (std::size_t a = 0; a < NA; ++a)
                for (std::size_t b = 0; b < NB; ++b)
                    for (std::size_t x = 0; x < NX; ++x)
                        for (std::size_t y = 0; y < NY; ++y) {
                            bool bad_a = cfg.friend_a && cfg.x_values[x] == *cfg.read_x && a != c;
                            bool bad_b = cfg.friend_b && cfg.y_values[y] == *cfg.read_y && b != d;
                            if (bad_a || bad_b) banned |= bit(a, b, x, y);
                        }
            // Every sub-table of `possible`, including the empty one.
            std::uint32_t sub = possible;
            for (;;) {
                if ((sub & banned) == 0 && agency_ok(sub)) covered |= sub;
                if (sub == 0) break;
                sub = (sub - 1) & possible;
            }
        }
    }
    return covered == possible;
}

// ---------------------------------------------------------------------------

bool validate_extended_table(const ExtendedTable& t, const Behavior& beh) {
    if (!(t.config() == beh.config())) throw ConfigMismatch("extended table and behavior use different configs");
    const auto& cfg = beh.config();
    const std::size_t NA = cfg.num_a(), NB = cfg.num_b(), NC = cfg.num_c(), ND = cfg.num_d(), NX = cfg.num_x(),
                      NY = cfg.num_y();

    for (std::size_t a = 0; a < NA; ++a)
        for (std::size_t b = 0; b < NB; ++b)
            for (std::size_t c = 0; c < NC; ++c)
                for (std::size_t d = 0; d < ND; ++d)
                    for (std::size_t x = 0; x < NX; ++x)
                        for (std::size_t y = 0; y < NY; ++y) {
                            if (!t.at(a, b, c, d, x, y)) continue;
                            if (cfg.friend_a && x == cfg.read_x_index() && a != c) return false;
                            if (cfg.friend_b && y == cfg.read_y_index() && b != d) return false;
                        }

    for (std::size_t c = 0; c < NC; ++c)
        for (std::size_t d = 0; d < ND; ++d) {
            // OR_a independent of x for each (b,y).
            for (std::size_t b = 0; b < NB; ++b)
                for (std::size_t y = 0; y < NY; ++y) {
                    std::set<bool> seen;
                    for (std::size_t x = 0; x < NX; ++x) {
                        bool any = false;
                        for (std::size_t a = 0; a < NA; ++a) any = any || t.at(a, b, c, d, x, y);
                        seen.insert(any);
                    }
                    if (seen.size() > 1) return false;
                }
            // OR_b independent of y for each (a,x).
            for (std::size_t a = 0; a < NA; ++a)
                for (std::size_t x = 0; x < NX; ++x) {
                    std::set<bool> seen;
                    for (std::size_t y = 0; y < NY; ++y) {
                        bool any = false;
                        for (std::size_t b = 0; b < NB; ++b) any = any || t.at(a, b, c, d, x, y);
                        seen.insert(any);
                    }
                    if (seen.size() > 1) return false;
                }
            // OR_{a,b} independent of (x,y); implied by the two above.
            std::set<bool> seen;
            for (std::size_t x = 0; x < NX; ++x)
                for (std::size_t y = 0; y < NY; ++y) {
                    bool any = false;
                    for (std::size_t a = 0; a < NA; ++a)
                        for (std::size_t b = 0; b < NB; ++b) any = any || t.at(a, b, c, d, x, y);
                    seen.insert(any);
                }
            if (seen.size() > 1) return false;
        }

    for (std::size_t x = 0; x < NX; ++x)
        for (std::size_t y = 0; y < NY; ++y) {
            bool context_nonempty = false;
            for (std::size_t a = 0; a < NA; ++a)
                for (std::size_t b = 0; b < NB; ++b) {
                    bool any = false;
                    for (std::size_t c = 0; c < NC; ++c)
                        for (std::size_t d = 0; d < ND; ++d) any = any || t.at(a, b, c, d, x, y);
                    if (any != beh.possible(a, b, x, y)) return false;
                    context_nonempty = context_nonempty || any;
                }
            if (!context_nonempty) return false;
        }
    return true;
}

bool replay_branch(const Behavior& beh, const Cell& target, const TraceBranch& branch) {
    const auto& cfg = beh.config();
    if (branch.c_index >= cfg.num_c() || branch.d_index >= cfg.num_d()) return false;
    Dims n(cfg);
    // Start from the full table so that every absent cell the argument relies on must be cited.
    std::vector<bool> state(cfg.num_cells(), true);
    auto idx_of = [&](const Cell& c) {
        return n.at(cfg.a_index(c.a), cfg.b_index(c.b), cfg.x_index(c.x), cfg.y_index(c.y));
    };

    for (const auto& step : branch.steps) {
        switch (step.kind) {
        case EliminationKind::Impossible:
        case EliminationKind::ReadingA:
        case EliminationKind::ReadingB: {
            if (step.killed.size() != 1) return false;
            const Cell& c = step.killed.front();
            auto why = initial_reason(beh, branch.c_index, branch.d_index, cfg.a_index(c.a), cfg.b_index(c.b),
                                      cfg.x_index(c.x), cfg.y_index(c.y));
            if (why != step.kind || !state[idx_of(c)]) return false;
            state[idx_of(c)] = false;
            break;
        }
        case EliminationKind::AgencyX: {
            std::size_t ib = cfg.b_index(step.value), iy = cfg.y_index(step.own_setting),
                        ie = cfg.x_index(step.empty_setting);
            for (std::size_t ia = 0; ia < n.na; ++ia)
                if (state[n.at(ia, ib, ie, iy)]) return false;
            for (const auto& c : step.killed) {
                if (c.b != step.value || c.y != step.own_setting || c.x == step.empty_setting) return false;
                if (!state[idx_of(c)]) return false;
                state[idx_of(c)] = false;
            }
            break;
        }
        case EliminationKind::AgencyY: {
            std::size_t ia = cfg.a_index(step.value), ix = cfg.x_index(step.own_setting),
                        ie = cfg.y_index(step.empty_setting);
            for (std::size_t ib = 0; ib < n.nb; ++ib)
                if (state[n.at(ia, ib, ix, ie)]) return false;
            for (const auto& c : step.killed) {
                if (c.a != step.value || c.x != step.own_setting || c.y == step.empty_setting) return false;
                if (!state[idx_of(c)]) return false;
                state[idx_of(c)] = false;
            }
            break;
        }
        }
    }
    return !state[idx_of(target)];
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string describe(const Cell& c) {
    return "(A=" + std::to_string(c.a) + ",B=" + std::to_string(c.b) + ",X=" + std::to_string(c.x) +
           ",Y=" + std::to_string(c.y) + ")";
}

std::string describe_cells(const std::vector<Cell>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) s += ", ";
        s += describe(cells[i]);
    }
    return s;
}

std::string branch_case(const ScenarioConfig& cfg, const TraceBranch& br) {
    std::string s = "Case";
    if (cfg.friend_a) s += " C=" + std::to_string(cfg.a_values[br.c_index]);
    if (cfg.friend_a && cfg.friend_b) s += ",";
    if (cfg.friend_b) s += " D=" + std::to_string(cfg.b_values[br.d_index]);
    if (!cfg.friend_a && !cfg.friend_b) s += " (no friends)";
    return s;
}

}  // namespace

nlohmann::json trace_to_json(const Behavior& beh, const ProofTrace& trace) {
    const auto& cfg = beh.config();
    auto cell_json = [](const Cell& c) { return nlohmann::json{c.a, c.b, c.x, c.y}; };
    nlohmann::json branches = nlohmann::json::array();
    for (const auto& br : trace.branches) {
        nlohmann::json steps = nlohmann::json::array();
        for (const auto& s : br.steps) {
            nlohmann::json killed = nlohmann::json::array();
            for (const auto& c : s.killed) killed.push_back(cell_json(c));
            nlohmann::json js{{"kind", to_string(s.kind)}, {"cells", killed}};
            if (s.kind == EliminationKind::AgencyX || s.kind == EliminationKind::AgencyY) {
                js["value"] = s.value;
                js["own_setting"] = s.own_setting;
                js["empty_setting"] = s.empty_setting;
            }
            steps.push_back(std::move(js));
        }
        nlohmann::json jb{{"steps", steps}};
        jb["c"] = cfg.friend_a ? nlohmann::json(cfg.a_values[br.c_index]) : nlohmann::json(nullptr);
        jb["d"] = cfg.friend_b ? nlohmann::json(cfg.b_values[br.d_index]) : nlohmann::json(nullptr);
        branches.push_back(std::move(jb));
    }
    return {{"target", cell_json(trace.target)}, {"branches", branches}};
}

std::string trace_to_text(const Behavior& beh, const ProofTrace& trace) {
    const auto& cfg = beh.config();
    std::ostringstream os;
    os << describe(trace.target) << " is possible, but no value of the friends' outcomes can accompany it.\n";
    for (const auto& br : trace.branches) {
        os << branch_case(cfg, br) << ":\n";
        for (const auto& s : br.steps) {
            switch (s.kind) {
            case EliminationKind::Impossible:
                os << "  " << describe(s.killed.front()) << " is impossible.\n";
                break;
            case EliminationKind::ReadingA:
                os << "  reading at X=" << *cfg.read_x << " forces A=C=" << cfg.a_values[br.c_index] << ", so "
                   << describe(s.killed.front()) << " is excluded.\n";
                break;
            case EliminationKind::ReadingB:
                os << "  reading at Y=" << *cfg.read_y << " forces B=D=" << cfg.b_values[br.d_index] << ", so "
                   << describe(s.killed.front()) << " is excluded.\n";
                break;
            case EliminationKind::AgencyX:
                os << "  hence B=" << s.value << " is impossible at X=" << s.empty_setting << ",Y=" << s.own_setting
                   << "; X cannot change possibilities outside its future light cone, which eliminates "
                   << describe_cells(s.killed) << ".\n";
                break;
            case EliminationKind::AgencyY:
                os << "  hence A=" << s.value << " is impossible at X=" << s.own_setting << ",Y=" << s.empty_setting
                   << "; Y cannot change possibilities outside its future light cone, which eliminates "
                   << describe_cells(s.killed) << ".\n";
                break;
            }
        }
    }
    os << "All values of the friends' outcomes are exhausted: contradiction.\n";
    return os.str();
}

nlohmann::json extended_table_to_json(const ExtendedTable& t) {
    const auto& cfg = t.config();
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t a = 0; a < cfg.num_a(); ++a)
        for (std::size_t b = 0; b < cfg.num_b(); ++b)
            for (std::size_t c = 0; c < cfg.num_c(); ++c)
                for (std::size_t d = 0; d < cfg.num_d(); ++d)
                    for (std::size_t x = 0; x < cfg.num_x(); ++x)
                        for (std::size_t y = 0; y < cfg.num_y(); ++y) {
                            if (!t.at(a, b, c, d, x, y)) continue;
                            nlohmann::json cv = cfg.friend_a ? nlohmann::json(cfg.a_values[c]) : nlohmann::json(nullptr);
                            nlohmann::json dv = cfg.friend_b ? nlohmann::json(cfg.b_values[d]) : nlohmann::json(nullptr);
                            entries.push_back({cfg.a_values[a], cfg.b_values[b], cv, dv, cfg.x_values[x],
                                               cfg.y_values[y]});
                        }
    return {{"config", config_to_json(cfg)}, {"entries", entries}};
}

}  // namespace plf
