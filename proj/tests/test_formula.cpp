#include "doctest.h"

#include "plf/formula.hpp"
#include "support.hpp"

using namespace plf;

namespace {

Formula at(const char* v, const char* val = "true") { return Formula::atom(v, val); }

}  // namespace

TEST_CASE("parse builds the expected trees") {
    CHECK(parse_formula("<>(A=1 & B=1)") == Formula::diamond(Formula::conjunction(at("A", "1"), at("B", "1"))));
    CHECK(parse_formula("p & q -> r") == Formula::implication(Formula::conjunction(at("p"), at("q")), at("r")));

    // Reading rule with the A=C shorthand spelled out.
    Formula reading = parse_formula("[]((X=1) -> ((A=0)&(C=0)) | ((A=1)&(C=1)))");
    Formula expected = Formula::box(Formula::implication(
        at("X", "1"), Formula::disjunction(Formula::conjunction(at("A", "0"), at("C", "0")),
                                           Formula::conjunction(at("A", "1"), at("C", "1")))));
    CHECK(reading == expected);
}

TEST_CASE("precedence and associativity") {
    CHECK(parse_formula("a & b | c") == Formula::disjunction(Formula::conjunction(at("a"), at("b")), at("c")));
    CHECK(parse_formula("a -> b -> c") == Formula::implication(at("a"), Formula::implication(at("b"), at("c"))));
    CHECK(parse_formula("a <-> b <-> c") == Formula::equivalence(Formula::equivalence(at("a"), at("b")), at("c")));
    CHECK(parse_formula("a | b -> c <-> d") ==
          Formula::equivalence(Formula::implication(Formula::disjunction(at("a"), at("b")), at("c")), at("d")));
    CHECK(parse_formula("~<>[]a & b") ==
          Formula::conjunction(Formula::negation(Formula::diamond(Formula::box(at("a")))), at("b")));
    CHECK(parse_formula("a & b & c") == Formula::conjunction_of({at("a"), at("b"), at("c")}));
}

TEST_CASE("whitespace is insignificant and bare atoms mean =true") {
    CHECK(parse_formula("  A = 1\t&\nQ ") == parse_formula("A=1&Q"));
    CHECK(parse_formula("Q") == parse_formula("Q=true"));
    CHECK(parse_atom("A_2=x_1") == Atom("A_2", "x_1"));
}

TEST_CASE("render uses minimal parentheses") {
    CHECK(render(Formula::diamond(at("A", "1"))) == "<>A=1");
    CHECK(render(Formula::negation(Formula::diamond(at("A", "0")))) == "~<>A=0");
    CHECK(render(Formula::conjunction(at("p"), Formula::disjunction(at("q"), at("r")))) == "p & (q | r)");
    CHECK(render(Formula::implication(Formula::implication(at("a"), at("b")), at("c"))) == "(a -> b) -> c");
    CHECK(render(Formula::implication(at("a"), Formula::implication(at("b"), at("c")))) == "a -> b -> c");
    CHECK(render(Formula::equivalence(at("a"), Formula::equivalence(at("b"), at("c")))) == "a <-> (b <-> c)");
    CHECK(render(Formula::negation(Formula::conjunction(at("a"), at("b")))) == "~(a & b)");
}

TEST_CASE("syntax errors report offset and expectations") {
    SUBCASE("dangling operator") {
        try {
            parse_formula("A=1 &");
            FAIL("expected SyntaxError");
        } catch (const SyntaxError& e) {
            CHECK(e.offset() == 5);
            CHECK(std::find(e.expected().begin(), e.expected().end(), "variable") != e.expected().end());
        }
    }
    SUBCASE("unclosed parenthesis") {
        try {
            parse_formula("(a | b");
            FAIL("expected SyntaxError");
        } catch (const SyntaxError& e) {
            CHECK(e.offset() == 6);
            CHECK(std::find(e.expected().begin(), e.expected().end(), ")") != e.expected().end());
        }
    }
    SUBCASE("bad characters and tokens") {
        CHECK_THROWS_AS(parse_formula("a ^ b"), SyntaxError);
        CHECK_THROWS_AS(parse_formula("1=0"), SyntaxError);
        CHECK_THROWS_AS(parse_formula("A="), SyntaxError);
        CHECK_THROWS_AS(parse_formula(""), SyntaxError);
        CHECK_THROWS_AS(parse_formula("a b"), SyntaxError);
        CHECK_THROWS_AS(parse_formula("a < b"), SyntaxError);
        CHECK_THROWS_AS(parse_formula("\xE2\x97\x87p"), SyntaxError);  // the diamond glyph itself
        CHECK_THROWS_AS(parse_atom("A=1 & B"), SyntaxError);
    }
    SUBCASE("nesting limit") {
        CHECK_THROWS_AS(parse_formula(std::string(5000, '(') + "a" + std::string(5000, ')')), SyntaxError);
        CHECK_THROWS_AS(parse_formula(std::string(5000, '~') + "a"), SyntaxError);
    }
}

TEST_CASE("atoms reject malformed names") {
    CHECK_THROWS_AS(Atom("1A", "0"), std::invalid_argument);
    CHECK_THROWS_AS(Atom("A", ""), std::invalid_argument);
    CHECK_THROWS_AS(Atom("A-b", "0"), std::invalid_argument);
}

TEST_CASE("modal depth and variables") {
    Formula f = parse_formula("<>(A=1 & []B=0) -> C");
    CHECK(f.modal_depth() == 2);
    CHECK(f.variables() == std::set<std::string>{"A", "B", "C"});
    CHECK(parse_formula("A & ~B").is_modality_free());
}

TEST_CASE("property: parse(render(f)) == f on random trees") {
    testing::Rng rng(7);
    std::vector<Atom> atoms{{"A", "0"}, {"A", "1"}, {"p", "true"}, {"Long_name2", "v_9"}};
    for (int i = 0; i < 2000; ++i) {
        Formula f = testing::random_formula(rng, atoms, 6, true);
        INFO(render(f));
        REQUIRE(parse_formula(render(f)) == f);
    }
}

TEST_CASE("property: parser is total on noise") {
    testing::Rng rng(11);
    const std::vector<std::string> pieces{"~", "&", "|", "->", "<->", "<>", "[]", "(", ")", "=", "A", "1", "q_2",
                                          " ", "<", "-", ">", "[", "]", "#", "\xff", "\xc3\xa9"};
    std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1), len(0, 16);
    std::uniform_int_distribution<int> byte(0, 255);
    for (int i = 0; i < 20000; ++i) {
        std::string s;
        if (i % 2 == 0) {
            for (auto n = len(rng); n > 0; --n) s += pieces[pick(rng)];
        } else {
            for (auto n = len(rng); n > 0; --n) s += static_cast<char>(byte(rng));
        }
        try {
            Formula f = parse_formula(s);
            CHECK(parse_formula(render(f)) == f);
        } catch (const SyntaxError& e) {
            CHECK(e.offset() <= s.size());
        }
    }
}
