#include "dsl.hpp"
#include "generators.hpp"
#include "reference.hpp"

#include "trapgen/sampler.hpp"

#include <doctest.h>

#include <map>
#include <set>

using namespace trapgen;
using namespace trapgen::testing;

TEST_CASE("config validation") {
    SamplerConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.unbounded_width = 0;
    CHECK_THROWS_AS(cfg.validate(), MalformedInput);
    cfg.unbounded_width = 5;
    cfg.open_granularity = 1;
    CHECK_THROWS_AS(cfg.validate(), MalformedInput);
}

TEST_CASE("uniform draws stay in range and hit every value") {
    SamplerState s(1);
    std::map<long, int> hits;
    for (int i = 0; i < 6000; ++i) {
        Integer k = s.uniform(-2, 3);
        REQUIRE(k >= -2);
        REQUIRE(k <= 3);
        ++hits[k.get_si()];
    }
    CHECK(hits.size() == 6);
    for (const auto& [k, n] : hits) {
        CHECK(n > 800);
        CHECK(n < 1200);
    }
    Integer big = Integer(1) << 100;
    for (int i = 0; i < 100; ++i) {
        Integer k = s.uniform(-big, big);
        CHECK(k >= -big);
        CHECK(k <= big);
    }
    CHECK(s.uniform(7, 7) == 7);
}

TEST_CASE("empty trapezoid on one integer variable") {
    SamplerConfig cfg;
    cfg.unbounded_width = 10;
    SamplerState s(2);
    VarTable x = ints({"x"});
    for (int i = 0; i < 200; ++i) {
        Vector v = sample_trapezoid(Trapezoid(), x, cfg, s);
        CHECK(is_integral(v[Dimension(1)]));
        CHECK(abs(v[Dimension(1)]) <= 10);
    }
}

TEST_CASE("integer pair interval is covered uniformly") {
    VarTable x = ints({"x"});
    Trapezoid t = trap({bound(1, RelOp::Geq, K(0)), bound(1, RelOp::Leq, K(3))});
    SamplerState s(3);
    std::map<long, int> hits;
    for (int i = 0; i < 10000; ++i) {
        ++hits[sample_trapezoid(t, x, {}, s)[Dimension(1)].get_num().get_si()];
    }
    CHECK(hits.size() == 4);
    for (const auto& [k, n] : hits) {
        CHECK(k >= 0);
        CHECK(k <= 3);
        CHECK(n > 2200);
    }
}

TEST_CASE("strict bounds are respected") {
    SamplerState s(4);
    VarTable x = ints({"x"});
    Trapezoid t = trap({bound(1, RelOp::Gt, K(q(1, 2))), bound(1, RelOp::Lt, K(3))});
    std::set<long> seen;
    for (int i = 0; i < 500; ++i) {
        seen.insert(sample_trapezoid(t, x, {}, s)[Dimension(1)].get_num().get_si());
    }
    CHECK(seen == std::set<long>{1, 2});

    VarTable r = rats({"q"});
    SamplerConfig cfg;
    cfg.open_granularity = 4;
    Trapezoid open = trap({bound(1, RelOp::Gt, K(0)), bound(1, RelOp::Lt, K(1))});
    std::set<Rational> values;
    for (int i = 0; i < 500; ++i) {
        values.insert(sample_trapezoid(open, r, cfg, s)[Dimension(1)]);
    }
    CHECK(values == std::set<Rational>{q(1, 4), q(1, 2), q(3, 4)});
}

TEST_CASE("collapsed interval after restriction") {
    VarTable xy = ints({"x", "y"});
    Trapezoid t = trap({bound(2, RelOp::Geq, X(1)), bound(2, RelOp::Leq, X(1) + K(q(1, 2)))});
    SamplerState s(5);
    for (int i = 0; i < 500; ++i) {
        Vector v = sample_trapezoid(t, xy, {}, s);
        CHECK(v[Dimension(2)] == v[Dimension(1)]);
    }
}

TEST_CASE("sample_original maps through the basis") {
    VarTable x = ints({"x"});
    ChangeOfBasis sigma;
    sigma.set(Dimension(1), X(1, 2) - K(1));
    CHECK(cob_apply_vector(sigma, vec({3})) == vec({5}));
    RestrictionResult res{Trapezoid(), sigma, vec({1})};
    SamplerState s(6);
    for (int i = 0; i < 300; ++i) {
        Rational v = sample_original(res, x, {}, s)[Dimension(1)];
        CHECK(mod_floor(v.get_num(), 2) == 1);
    }
    RestrictionResult id{trap({bound(1, RelOp::Eq, K(4))}), ChangeOfBasis(), vec({4})};
    CHECK(sample_original(id, x, {}, s) == vec({4}));
}

TEST_CASE("sample_complement") {
    VarTable x = ints({"x"});
    SamplerConfig cfg;
    cfg.unbounded_width = 20;
    SamplerState s(7);
    for (int i = 0; i < 300; ++i) {
        Rational v = sample_complement(trap({bound(1, RelOp::Leq, K(3))}), x, cfg, s)[Dimension(1)];
        CHECK(v >= 4);
        CHECK(v <= 24);
    }
    bool below = false, above = false;
    for (int i = 0; i < 300; ++i) {
        Rational v = sample_complement(trap({bound(1, RelOp::Eq, K(5))}), x, cfg, s)[Dimension(1)];
        CHECK(v != 5);
        below = below || v < 5;
        above = above || v > 5;
    }
    CHECK(below);
    CHECK(above);
    CHECK_THROWS_AS(sample_complement(Trapezoid(), x, cfg, s), UnsatisfiableComplement);
}

TEST_CASE("complement samples falsify the trapezoid") {
    Rng rng(8);
    SamplerState s(8);
    for (int i = 0; i < 100; ++i) {
        TrapezoidCase tc = random_trapezoid(rng, 4, 2, 6);
        if (tc.trapezoid.empty()) {
            continue;
        }
        for (int k = 0; k < 50; ++k) {
            Vector w = sample_complement(tc.trapezoid, tc.vars, {}, s);
            CHECK(w.is_consistent(tc.vars));
            CHECK_FALSE(ref_trapezoid(tc.trapezoid, w));
        }
    }
}

TEST_CASE("sampling is reproducible for a seed") {
    Rng rng(9);
    TrapezoidCase tc = random_trapezoid(rng, 5, 3, 6);
    TrapezoidSampler sampler(restrict(tc.trapezoid, tc.reference, tc.vars), tc.vars, {});
    SamplerState a(42), b(42), c(43);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        Vector va = sampler.draw(a);
        CHECK(va == sampler.draw(b));
        differs = differs || va != sampler.draw(c);
    }
    CHECK(differs);
}

TEST_CASE("restricted samples never backtrack and satisfy the original") {
    Rng rng(10);
    SamplerState s(10);
    for (int i = 0; i < 60; ++i) {
        TrapezoidCase tc = random_trapezoid(rng, 4, 3, 6);
        TrapezoidSampler sampler(restrict(tc.trapezoid, tc.reference, tc.vars), tc.vars, {});
        for (int k = 0; k < 300; ++k) {
            Vector w = sampler.draw(s);
            REQUIRE(w.is_consistent(tc.vars));
            REQUIRE(ref_trapezoid(tc.trapezoid, w));
        }
    }
}

TEST_CASE("unrestricted integer trapezoids can need backtracking") {
    // x/2 + 1/4 <= y <= x/2 + 3/4 has no integer y for even x.
    VarTable xy = ints({"x", "y"});
    Trapezoid t = trap({bound(2, RelOp::Geq, X(1, q(1, 2)) + K(q(1, 4))), bound(2, RelOp::Leq, X(1, q(1, 2)) + K(q(3, 4))),
                        bound(1, RelOp::Geq, K(0)), bound(1, RelOp::Leq, K(9))});
    SamplerState s(11);
    bool failed = false;
    for (int i = 0; i < 100 && !failed; ++i) {
        try {
            sample_trapezoid(t, xy, {}, s);
        } catch (const BacktrackViolation&) {
            failed = true;
        }
    }
    CHECK(failed);
    TrapezoidSampler fixed(restrict(t, vec({1, 1}), xy), xy, {});
    for (int i = 0; i < 500; ++i) {
        CHECK(ref_trapezoid(t, fixed.draw(s)));
    }
}

TEST_CASE("sampler rejects trapezoids wider than the variable table") {
    SamplerState s(12);
    CHECK_THROWS_AS(sample_trapezoid(trap({bound(2, RelOp::Lt, K(0))}), ints({"x"}), {}, s), MalformedInput);
}
