#include "doctest.h"

#include "plf/kripke.hpp"
#include "support.hpp"

using namespace plf;

namespace {

KripkeModel single_dead_end() { return KripkeModel({"w"}, {}, {}); }

KripkeModel two_worlds() { return KripkeModel({"w0", "w1"}, {{"w0", "w1"}}, {{Atom("Q", "true"), {"w1"}}}); }

}  // namespace

TEST_CASE("truth conditions on small models") {
    auto dead = single_dead_end();
    // Box is vacuous without successors, so T and D both fail here.
    CHECK_FALSE(evaluate(dead, "w", parse_formula("[]Q -> Q")));
    CHECK_FALSE(evaluate(dead, "w", parse_formula("[]Q -> <>Q")));
    CHECK(evaluate(dead, "w", parse_formula("[]Q")));
    CHECK_FALSE(evaluate(dead, "w", parse_formula("<>Q | <>~Q")));

    auto m = two_worlds();
    // w0 does not see itself, so T fails there even with a successor.
    CHECK_FALSE(evaluate(m, "w0", parse_formula("[]Q -> Q")));
    CHECK(evaluate(m, "w0", parse_formula("<>Q")));
    CHECK_FALSE(evaluate(m, "w1", parse_formula("<>Q")));
    CHECK(evaluate(m, "w0", parse_formula("~Q & []Q")));
    CHECK(evaluate(m, "w1", parse_formula("Q <-> Q=true")));
    CHECK(evaluate(m, "w0", parse_formula("Q -> R")));
    CHECK_THROWS_AS(evaluate(m, "w9", parse_formula("Q")), UnknownWorld);
}

TEST_CASE("validity") {
    auto m = two_worlds();
    CHECK(valid(m, parse_formula("Q | ~Q")));
    CHECK_FALSE(valid(KripkeModel({"u", "v"}, {}, {{Atom("Q", "true"), {"u"}}}), parse_formula("Q")));

    KripkeModel reflexive({"u", "v"}, {{"u", "u"}, {"v", "v"}, {"u", "v"}}, {{Atom("Q", "true"), {"v"}}});
    CHECK(valid(reflexive, parse_formula("[]Q -> Q")));
    CHECK_FALSE(valid(single_dead_end(), parse_formula("[]Q -> Q")));
}

TEST_CASE("model construction rejects bad inputs") {
    CHECK_THROWS_AS(KripkeModel({}, {}, {}), FormatError);
    CHECK_THROWS_AS(KripkeModel({"a", "a"}, {}, {}), FormatError);
    CHECK_THROWS_AS(KripkeModel({"a"}, {{"a", "b"}}, {}), UnknownWorld);
    CHECK_THROWS_AS(KripkeModel({"a"}, {}, {{Atom("Q", "true"), {"z"}}}), UnknownWorld);
}

TEST_CASE("JSON model files") {
    auto j = nlohmann::json::parse(R"({"worlds": ["w0","w1"], "relation": [["w0","w1"]], "valuation": {"A=1": ["w1"]}})");
    KripkeModel m = model_from_json(j);
    CHECK(evaluate(m, "w0", parse_formula("<>A=1")));
    CHECK(model_from_json(model_to_json(m)).valuation() == m.valuation());

    CHECK_THROWS_AS(model_from_json(nlohmann::json::parse(R"({"worlds": ["w0"], "extra": 1})")), FormatError);
    CHECK_THROWS_AS(model_from_json(nlohmann::json::parse(R"({"worlds": ["w0"], "valuation": {"A=": ["w0"]}})")),
                    FormatError);
    CHECK_THROWS_AS(model_from_json(nlohmann::json::parse(R"({"worlds": ["w0"], "relation": [["w0"]]})")),
                    FormatError);
    CHECK_THROWS_AS(model_from_json(nlohmann::json::parse(R"({"worlds": ["w0"], "relation": [["w0","w5"]]})")),
                    FormatError);
    CHECK_THROWS_AS(model_from_json(nlohmann::json::parse(R"({"worlds": []})")), FormatError);
    CHECK_THROWS_AS(load_model("/nonexistent/model.json"), FormatError);
}

TEST_CASE("property: box is dual to diamond") {
    testing::Rng rng(3);
    std::vector<Atom> atoms{{"P", "true"}, {"Q", "true"}, {"A", "1"}};
    for (int i = 0; i < 500; ++i) {
        auto m = testing::random_model(rng, 1 + i % 5, atoms);
        Formula f = testing::random_formula(rng, atoms, 3, true);
        Formula boxed = Formula::box(f);
        Formula dual = Formula::negation(Formula::diamond(Formula::negation(f)));
        for (const auto& w : m.worlds()) REQUIRE(evaluate(m, w, boxed) == evaluate(m, w, dual));
    }
}
