#include "dsl.hpp"
#include "generators.hpp"
#include "reference.hpp"

#include <doctest.h>

using namespace trapgen;
using namespace trapgen::testing;

TEST_CASE("poly_eval") {
    CHECK(poly_eval(X(1, 2) + K(3), vec({1})) == 5);
    CHECK(poly_eval(Polynomial(), vec({7, 8})) == 0);
    CHECK(poly_eval(X(2, q(1, 2)) - X(1), vec({1, 3})) == q(1, 2));
}

TEST_CASE("poly_eval rejects vectors that miss a dimension") {
    CHECK_THROWS_AS(poly_eval(X(3), vec({1, 2})), MalformedInput);
}

TEST_CASE("poly_lcd") {
    CHECK(poly_lcd(X(1, q(1, 2)) + K(q(1, 3))) == 6);
    CHECK(poly_lcd(X(1, 2) + K(5)) == 1);
    CHECK(poly_lcd(Polynomial()) == 1);
    CHECK(poly_lcd(X(2, q(3, 4)) + X(1, q(5, 6))) == 12);
}

TEST_CASE("poly_combine") {
    CHECK(poly_combine(1, X(1), -1, X(1)) == Polynomial());
    CHECK(poly_combine(1, X(2) + K(1), -1, X(1)) == X(2) - X(1) + K(1));
    CHECK(poly_combine(q(1, 2), X(1, 2), 0, Polynomial()) == X(1));
}

TEST_CASE("polynomials drop zero terms and stay sorted") {
    Polynomial p = X(3) + X(1) - X(3);
    CHECK(p == X(1));
    CHECK(p.dim() == 1);
    Polynomial r = X(2) + X(1) + X(3);
    REQUIRE(r.terms().size() == 3);
    CHECK(r.terms()[0].var.index == 1);
    CHECK(r.terms()[2].var.index == 3);
    CHECK(r.without(Dimension(2)) == X(1) + X(3));
    CHECK(K(4).dim() == 0);
}

TEST_CASE("formula_eval") {
    Formula f = Formula::conj({Formula::atom({X(1), RelOp::Lt, K(5)}), Formula::atom({X(1), RelOp::Geq, K(0)})});
    CHECK(formula_eval(f, vec({3})));
    CHECK_FALSE(formula_eval(Formula::negate(Formula::atom({X(1), RelOp::Eq, X(1)})), vec({4})));
    Formula g = Formula::disj({Formula::atom({X(1, 2), RelOp::Lt, X(2)}), Formula::atom({X(2), RelOp::Eq, K(0)})});
    CHECK(formula_eval(g, vec({1, 3})));
    CHECK_FALSE(formula_eval(g, vec({2, 3})));
}

TEST_CASE("empty conjunctions and disjunctions are rejected") {
    CHECK_THROWS_AS(Formula::conj({}), MalformedInput);
    CHECK_THROWS_AS(Formula::disj({}), MalformedInput);
}

TEST_CASE("region_eval") {
    CHECK(region_eval(Region::positive(), vec({1})));
    CHECK_FALSE(region_eval(Region::negative(), vec({1})));
    Trapezoid t = trap({bound(2, RelOp::Lt, X(1) + K(1)), bound(1, RelOp::Leq, K(0))});
    CHECK(region_eval(Region::positive(t), vec({0, 0})));
    CHECK_FALSE(region_eval(Region::positive(t), vec({0, 1})));
    CHECK(region_eval(Region::negative(t), vec({0, 1})));
}

TEST_CASE("trapezoid construction") {
    SUBCASE("pairs a lower and an upper bound") {
        Trapezoid t = trap({bound(1, RelOp::Geq, K(0)), bound(1, RelOp::Leq, K(3))});
        REQUIRE(t.intervals().size() == 1);
        CHECK(t.intervals()[0].shape() == Interval::Shape::Pair);
    }
    SUBCASE("orders intervals by descending dimension") {
        Trapezoid t = trap({bound(1, RelOp::Lt, K(0)), bound(3, RelOp::Eq, X(2)), bound(2, RelOp::Gt, X(1))});
        REQUIRE(t.intervals().size() == 3);
        CHECK(t.intervals()[0].var().index == 3);
        CHECK(t.intervals()[2].var().index == 1);
        CHECK(t.dim() == 3);
    }
    SUBCASE("rejects two upper bounds on one variable") {
        CHECK_THROWS_AS(trap({bound(1, RelOp::Lt, K(0)), bound(1, RelOp::Leq, K(3))}), MalformedInput);
    }
    SUBCASE("rejects an equality mixed with an inequality") {
        CHECK_THROWS_AS(trap({bound(1, RelOp::Eq, K(0)), bound(1, RelOp::Leq, K(3))}), MalformedInput);
    }
    SUBCASE("rejects bounds that are not normalized") {
        CHECK_THROWS_AS(trap({bound(1, RelOp::Lt, X(2))}), MalformedInput);
    }
    SUBCASE("rejects intervals out of order") {
        std::vector<Interval> is{Interval::single(bound(1, RelOp::Lt, K(0))), Interval::single(bound(2, RelOp::Lt, K(0)))};
        CHECK_THROWS_AS(Trapezoid{is}, MalformedInput);
    }
}

TEST_CASE("var table keeps integers before rationals") {
    VarTable t;
    t.add("x", VarType::Integer);
    t.add("q", VarType::Rational);
    CHECK_THROWS_AS(t.add("y", VarType::Integer), MalformedInput);
    CHECK_THROWS_AS(t.add("q", VarType::Rational), MalformedInput);
    CHECK(t.find("q")->index == 2);
    CHECK_FALSE(t.find("nope"));
}

TEST_CASE("vector consistency") {
    VarTable t;
    t.add("x", VarType::Integer);
    t.add("q", VarType::Rational);
    CHECK(vec({1, q(1, 2)}).is_consistent(t));
    CHECK_FALSE(vec({q(1, 2), 1}).is_consistent(t));
    CHECK_FALSE(vec({1}).is_consistent(t));
}

TEST_CASE("rational parsing") {
    CHECK(*parse_rational("-3/6") == q(-1, 2));
    CHECK(*parse_rational("12") == 12);
    CHECK_FALSE(parse_rational("1/0"));
    CHECK_FALSE(parse_rational("1/-2"));
    CHECK_FALSE(parse_rational("abc"));
    CHECK_FALSE(parse_rational(""));
}

TEST_CASE("library evaluators agree with the reference evaluators") {
    Rng rng(11);
    for (int i = 0; i < 300; ++i) {
        VarTable vars = random_vars(rng, 3);
        Formula f = random_formula(rng, vars.size(), 3);
        Vector v(vars.size());
        for (std::size_t d = 1; d <= vars.size(); ++d) {
            v[Dimension(d)] = vars.is_integer(Dimension(d)) ? Rational(uniform_int(rng, -5, 5)) : random_rational(rng, -5, 5, 3);
        }
        REQUIRE(formula_eval(f, v) == ref_formula(f, v));
    }
}
