#include <random>

#include "doctest.h"
#include "rulemon/enumerate.hpp"
#include "rulemon/formula.hpp"

using namespace rulemon;

TEST_CASE("parse: disjunction with eventually") {
    FormulaPtr f = parse_formula("a | F b");
    REQUIRE(f->op == Op::Or);
    CHECK(f->left().op == Op::Atom);
    CHECK(f->left().atom == "a");
    CHECK(f->right().op == Op::Eventually);
    CHECK(f->right().left().op == Op::Atom);
    CHECK(f->right().left().atom == "b");
}

TEST_CASE("parse: single atom") {
    FormulaPtr f = parse_formula("a");
    CHECK(f->op == Op::Atom);
    CHECK(f->atom == "a");
}

TEST_CASE("parse: nested disjunctions under always") {
    FormulaPtr f = parse_formula("G((a|b)|(c|d))");
    REQUIRE(f->op == Op::Always);
    const Formula& root = f->left();
    REQUIRE(root.op == Op::Or);
    CHECK(root.left().op == Op::Or);
    CHECK(root.left().left().atom == "a");
    CHECK(root.left().right().atom == "b");
    CHECK(root.right().op == Op::Or);
    CHECK(root.right().left().atom == "c");
    CHECK(root.right().right().atom == "d");
}

TEST_CASE("parse: precedence ladder") {
    // prefix > & > U > |
    FormulaPtr f = parse_formula("a & b U c | X d");
    REQUIRE(f->op == Op::Or);
    CHECK(f->left().op == Op::Until);
    CHECK(f->left().left().op == Op::And);
    CHECK(f->right().op == Op::Next);
}

TEST_CASE("parse: U is right-associative") {
    FormulaPtr f = parse_formula("a U b U c");
    REQUIRE(f->op == Op::Until);
    CHECK(f->left().op == Op::Atom);
    CHECK(f->right().op == Op::Until);
}

TEST_CASE("parse: errors carry a position") {
    CHECK_THROWS_AS(parse_formula(""), FormulaError);
    CHECK_THROWS_AS(parse_formula("(a | b"), FormulaError);
    CHECK_THROWS_AS(parse_formula("a )"), FormulaError);
    CHECK_THROWS_AS(parse_formula("a b"), FormulaError);
    CHECK_THROWS_AS(parse_formula("Q a"), FormulaError);
    try {
        parse_formula("a | | b");
        FAIL("expected a parse error");
    } catch (const FormulaError& e) {
        CHECK(e.position() == 4);
    }
}

TEST_CASE("nnf: negated eventually becomes always") {
    FormulaPtr f = normalize_nnf(*parse_formula("!(F a)"));
    REQUIRE(f->op == Op::Always);
    CHECK(f->left().op == Op::NegAtom);
    CHECK(f->left().atom == "a");
}

TEST_CASE("nnf: double negation cancels") {
    FormulaPtr f = normalize_nnf(*parse_formula("!!a"));
    CHECK(f->op == Op::Atom);
    CHECK(f->atom == "a");
}

TEST_CASE("nnf: next operators swap strength under negation") {
    FormulaPtr xf = normalize_nnf(*parse_formula("!(X a)"));
    REQUIRE(xf->op == Op::WeakNext);
    CHECK(xf->left().op == Op::NegAtom);
    FormulaPtr wf = normalize_nnf(*parse_formula("!(W a)"));
    REQUIRE(wf->op == Op::Next);
}

TEST_CASE("nnf: de morgan dualities") {
    FormulaPtr f = normalize_nnf(*parse_formula("!(a | (b & c))"));
    REQUIRE(f->op == Op::And);
    CHECK(f->left().op == Op::NegAtom);
    CHECK(f->right().op == Op::Or);
}

TEST_CASE("nnf: negated until has no form in the grammar") {
    CHECK_THROWS_AS(normalize_nnf(*parse_formula("!(a U b)")), FormulaError);
    CHECK_THROWS_AS(normalize_nnf(*parse_formula("!true")), FormulaError);
    CHECK_THROWS_AS(normalize_nnf(*parse_formula("!END")), FormulaError);
}

TEST_CASE("post order: children before parents, dense indices") {
    FormulaPtr f = parse_formula("a | F b");
    SubformulaTable table = index_post_order(*f);
    REQUIRE(table.size() == 4);
    CHECK(table.at(0).atom == "a");
    CHECK(table.at(1).atom == "b");
    CHECK(table.at(2).op == Op::Eventually);
    CHECK(table.at(3).op == Op::Or);
    for (int i = 0; i < table.size(); ++i) CHECK(table.at(i).post_index == i);
}

TEST_CASE("post order: single atom") {
    FormulaPtr f = parse_formula("a");
    CHECK(index_post_order(*f).size() == 1);
}

TEST_CASE("post order: nine nodes for the nested benchmark formula") {
    FormulaPtr f = parse_formula("F((a & X b) | (c & W d))");
    SubformulaTable table = index_post_order(*f);
    CHECK(table.size() == 9);
    CHECK(table.at(8).op == Op::Eventually);
}

TEST_CASE("property: parse(print(f)) round-trips") {
    std::mt19937_64 rng(7);
    std::vector<std::string> atoms{"a", "b", "c"};
    for (int i = 0; i < 500; ++i) {
        FormulaPtr f = gen_random_formula(1 + static_cast<int>(rng() % 12), atoms, rng);
        FormulaPtr reparsed = parse_formula(print_formula(*f));
        CHECK(structurally_equal(*f, *reparsed));
    }
}

TEST_CASE("property: normalize_nnf is idempotent") {
    std::mt19937_64 rng(11);
    std::vector<std::string> atoms{"a", "b"};
    for (int i = 0; i < 300; ++i) {
        FormulaPtr f = gen_random_formula(1 + static_cast<int>(rng() % 10), atoms, rng);
        FormulaPtr once = normalize_nnf(*f);
        FormulaPtr twice = normalize_nnf(*once);
        CHECK(structurally_equal(*once, *twice));
    }
}

TEST_CASE("property: post-order indices are topological") {
    std::mt19937_64 rng(13);
    std::vector<std::string> atoms{"a", "b"};
    for (int i = 0; i < 200; ++i) {
        FormulaPtr f = gen_random_formula(1 + static_cast<int>(rng() % 10), atoms, rng);
        index_post_order(*f);
        struct Walk {
            static void check(const Formula& n) {
                if (n.lhs) {
                    CHECK(n.lhs->post_index < n.post_index);
                    check(*n.lhs);
                }
                if (n.rhs) {
                    CHECK(n.rhs->post_index < n.post_index);
                    check(*n.rhs);
                }
            }
        };
        Walk::check(*f);
    }
}
