#include "doctest.h"

#include "plf/depth1.hpp"
#include "plf/quantum.hpp"
#include "plf/scenario.hpp"
#include "support.hpp"

using namespace plf;

TEST_CASE("a single required atom yields its own world") {
    Depth1Problem p({{"Q", {"true", "false"}}}, {Clause::required(parse_formula("Q"))});
    auto r = solve_depth1(p);
    REQUIRE(r.satisfiable());
    ValuationGrid grid(p.domains());
    // Nothing else constrains the set, so the maximal model keeps both points.
    CHECK(r.model->size() == 2);
    CHECK(std::count_if(r.model->begin(), r.model->end(),
                        [&](std::size_t i) { return grid.describe(i) == "Q=true"; }) == 1);
    CHECK(verify_witness(p, *r.model));
    CHECK(verify_witness(p, {grid.index({{0}})}));
}

TEST_CASE("clause classification") {
    CHECK(Clause::from_modal(parse_formula("[]a")).kind == ClauseKind::MustAll);
    CHECK(Clause::from_modal(parse_formula("~<>a")).kind == ClauseKind::Forbidden);
    CHECK(Clause::from_modal(parse_formula("<>a")).kind == ClauseKind::Required);
    CHECK(Clause::from_modal(parse_formula("<>a -> <>(a & b)")).kind == ClauseKind::Conditional);
    CHECK_THROWS_AS(Clause::from_modal(parse_formula("a")), FragmentError);
    CHECK_THROWS_AS(Clause::from_modal(parse_formula("<><>a")), FragmentError);
    CHECK_THROWS_AS(Clause::from_modal(parse_formula("<>a | <>b")), FragmentError);

    for (const char* s : {"[](a -> b)", "~<>(a & b)", "<>a", "<>a -> <>b"}) {
        Formula f = parse_formula(s);
        CHECK(Clause::from_modal(f).to_modal() == f);
    }

    auto doms = testing::boolean_domains(2);
    auto p = Depth1Problem::from_formulas(doms, {parse_formula("<>v0=1 & ~<>v1=1 & []v0=1")});
    REQUIRE(p.clauses().size() == 3);
    CHECK(p.clauses()[0].kind == ClauseKind::Required);
    CHECK(p.clauses()[1].kind == ClauseKind::Forbidden);
    CHECK(p.clauses()[2].kind == ClauseKind::MustAll);
    CHECK_THROWS_AS(Depth1Problem(doms, {Clause::required(parse_formula("w=1"))}), FragmentError);
    CHECK_THROWS_AS(Depth1Problem(doms, {Clause::required(parse_formula("<>v0=1"))}), FragmentError);
}

TEST_CASE("deflation propagates through conditionals") {
    // <>a=1 forces a conditional chain that empties it.
    std::vector<AtomDomain> doms{{"a", {"0", "1"}}, {"b", {"0", "1"}}};
    Depth1Problem p(doms, {Clause::required(parse_formula("a=1")), Clause::forbidden(parse_formula("b=1")),
                           Clause::conditional(parse_formula("a=1"), parse_formula("b=1"), "chain")});
    auto r = solve_depth1(p);
    REQUIRE_FALSE(r.satisfiable());
    CHECK(r.core->required_clause == 0);
    bool saw_chain = false;
    for (const auto& s : r.core->steps) saw_chain = saw_chain || (s.deflation && p.clauses()[s.clause].label == "chain");
    CHECK(saw_chain);

    auto relaxed = p.without_label("chain");
    CHECK(relaxed.clauses().size() == 2);
    CHECK(solve_depth1(relaxed).satisfiable());
}

TEST_CASE("Hardy constraints are unsatisfiable; dropping E4 restores a model") {
    Behavior beh = hardy_behavior();
    Depth1Problem p = encode(beh);
    auto r = solve_depth1(p);
    REQUIRE_FALSE(r.satisfiable());
    CHECK(p.clauses()[r.core->required_clause].label == "cell(1,1,2,2)");

    Depth1Problem relaxed = p.without_label("cell(1,1,1,1)");
    auto s = solve_depth1(relaxed);
    REQUIRE(s.satisfiable());
    CHECK_FALSE(s.model->empty());
    CHECK(verify_witness(relaxed, *s.model));
    // The witness is not a model of the unrelaxed problem.
    CHECK_FALSE(verify_witness(p, *s.model));
}

TEST_CASE("property: solver verdict matches exhaustive subset search") {
    testing::Rng rng(101);
    int sat = 0;
    for (int i = 0; i < 400; ++i) {
        auto p = testing::random_problem(rng, 1 + i % 3);
        auto r = solve_depth1(p);
        REQUIRE(r.satisfiable() == testing::brute_force_sat(p));
        sat += r.satisfiable();
        if (r.satisfiable()) REQUIRE(verify_witness(p, *r.model));
    }
    // Both outcomes are exercised.
    CHECK(sat > 20);
    CHECK(sat < 380);
}

TEST_CASE("property: solver verdict matches naive deflation up to six variables") {
    testing::Rng rng(202);
    for (int i = 0; i < 300; ++i) {
        auto p = testing::random_problem(rng, 1 + i % 6);
        auto r = solve_depth1(p);
        REQUIRE(r.satisfiable() == testing::naive_deflation_sat(p));
        if (r.satisfiable()) {
            REQUIRE(verify_witness(p, *r.model));
            ValuationGrid grid(p.domains());
            PointSet s = grid.empty_set();
            for (auto i : *r.model) s.set(i);
            REQUIRE(is_solution(p, s));
        }
    }
}

TEST_CASE("property: solution family is closed under union") {
    testing::Rng rng(303);
    int checked = 0;
    for (int i = 0; i < 300 && checked < 200; ++i) {
        auto p = testing::random_problem(rng, 2 + i % 2);
        ValuationGrid grid(p.domains());
        std::vector<PointSet> sols;
        for (unsigned long mask = 0; mask < (1ul << grid.size()); ++mask) {
            PointSet s(grid.size(), mask);
            if (is_solution(p, s)) sols.push_back(s);
        }
        for (std::size_t a = 0; a < sols.size(); ++a)
            for (std::size_t b = a; b < sols.size(); ++b) REQUIRE(is_solution(p, sols[a] | sols[b]));
        if (!sols.empty()) {
            ++checked;
            // The solver's model is the union of all solutions.
            PointSet all = grid.empty_set();
            for (const auto& s : sols) all |= s;
            auto r = solve_depth1(p);
            REQUIRE(r.satisfiable());
            PointSet got = grid.empty_set();
            for (auto k : *r.model) got.set(k);
            REQUIRE(got == all);
        }
    }
    CHECK(checked > 50);
}

TEST_CASE("exactly-one-value formula and witness model shape") {
    AtomDomain d{"F", {"0", "1"}};
    CHECK(render(exactly_one_value(d)) == "[](F=0 & ~F=1 | ~F=0 & F=1)");

    std::vector<AtomDomain> doms{{"a", {"0", "1", "2"}}};
    Depth1Problem p(doms, {Clause::required(parse_formula("a=2"))});
    KripkeModel m = witness_model(p, {2});
    CHECK(m.worlds() == std::vector<std::string>{"w0", "w1"});
    CHECK(evaluate(m, "w0", parse_formula("<>a=2 & []~a=0")));
    CHECK(evaluate(m, "w0", exactly_one_value(doms[0])));
}
