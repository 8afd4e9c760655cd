// Copyright (c) trapgen contributors.
// SPDX-License-Identifier: Apache-2.0
#include "generators.hpp"

namespace trapgen::testing {

std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

VarTable random_vars(Rng& rng, std::size_t max_vars, bool allow_rational) {
    static const char* names[] = {"x", "y", "z", "w", "u", "v", "s", "t", "p", "q", "r", "m"};
    std::size_t n = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<std::int64_t>(max_vars)));
    std::size_t ints = allow_rational ? static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(n))) : n;
    VarTable vars;
    for (std::size_t i = 0; i < n; ++i) {
        vars.add(names[i], i < ints ? VarType::Integer : VarType::Rational);
    }
    return vars;
}

Rational random_rational(Rng& rng, std::int64_t lo, std::int64_t hi, std::int64_t max_den) {
    std::int64_t q = uniform_int(rng, 1, max_den);
    Rational r{Integer(uniform_int(rng, lo * q, hi * q)), Integer(q)};
    r.canonicalize();
    return r;
}

Polynomial random_poly(Rng& rng, std::size_t dims, std::int64_t coeff_bound, std::int64_t max_den) {
    Polynomial p(random_rational(rng, -coeff_bound, coeff_bound, max_den));
    for (std::size_t d = 1; d <= dims; ++d) {
        if (uniform_int(rng, 0, 2) != 0) {
            p += Polynomial::variable(Dimension(d), random_rational(rng, -coeff_bound, coeff_bound, max_den));
        }
    }
    return p;
}

Formula random_formula(Rng& rng, std::size_t dims, int depth, std::int64_t coeff_bound) {
    int pick = depth <= 0 ? 0 : static_cast<int>(uniform_int(rng, 0, 9));
    if (pick < 3) {
        static const RelOp ops[] = {RelOp::Eq, RelOp::Lt, RelOp::Leq, RelOp::Gt, RelOp::Geq};
        // Equalities are rare on a grid; keep them but make them less frequent.
        RelOp op = ops[uniform_int(rng, 0, 12) == 0 ? 0 : uniform_int(rng, 1, 4)];
        Polynomial lhs = random_poly(rng, dims, coeff_bound, 2);
        Polynomial rhs = uniform_int(rng, 0, 1) ? random_poly(rng, dims, coeff_bound, 2)
                                                : Polynomial(random_rational(rng, -coeff_bound, coeff_bound, 2));
        return Formula::atom({lhs, op, rhs});
    }
    if (pick == 3) {
        return Formula::negate(random_formula(rng, dims, depth - 1, coeff_bound));
    }
    std::vector<Formula> children;
    std::int64_t k = uniform_int(rng, 2, 3);
    for (std::int64_t i = 0; i < k; ++i) {
        children.push_back(random_formula(rng, dims, depth - 1, coeff_bound));
    }
    return pick < 7 ? Formula::conj(std::move(children)) : Formula::disj(std::move(children));
}

DivisibilityConstraint random_divisibility(Rng& rng, std::size_t max_dims, std::int64_t max_m,
                                           std::int64_t coeff_bound) {
    for (;;) {
        Integer m = uniform_int(rng, 1, max_m);
        std::size_t dims = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<std::int64_t>(max_dims)));
        Polynomial e(Rational(uniform_int(rng, -coeff_bound, coeff_bound)));
        Integer g = m;
        for (std::size_t d = 1; d <= dims; ++d) {
            std::int64_t c = uniform_int(rng, -coeff_bound, coeff_bound);
            if (d == dims && c == 0) {
                c = uniform_int(rng, 0, 1) ? 1 : -1;
            }
            e += Polynomial::variable(Dimension(d), c);
            g = gcd(g, Integer(c));
        }
        if (mpz_divisible_p(e.constant().get_num_mpz_t(), g.get_mpz_t())) {
            return {m, e};
        }
    }
}

TrapezoidCase random_trapezoid(Rng& rng, std::size_t n, std::size_t integer_vars, std::int64_t max_den) {
    static const char* names[] = {"a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l"};
    TrapezoidCase tc;
    tc.reference = Vector(n);
    for (std::size_t i = 0; i < n; ++i) {
        bool integer = i < integer_vars;
        tc.vars.add(names[i], integer ? VarType::Integer : VarType::Rational);
        tc.reference[Dimension(i + 1)] = integer ? Rational(uniform_int(rng, -5, 5)) : random_rational(rng, -5, 5, 4);
    }

    std::vector<VariableBound> bounds;
    // One denominator per bound, so lcd(P) stays within max_den when the
    // reference is integral.
    Integer den = 1;
    auto make = [&](Dimension d, RelOp op, const Rational& target) {
        Polynomial p = random_poly(rng, d.index - 1, 3 * den.get_si(), 1) / Rational(den);
        p += Polynomial(target - poly_eval(p, tc.reference));
        bounds.push_back({d, op, std::move(p)});
    };
    auto slack = [&](bool strict) {
        Rational s{Integer(uniform_int(rng, strict ? 1 : 0, 2 * den.get_si())), den};
        s.canonicalize();
        return s;
    };
    for (std::size_t i = 1; i <= n; ++i) {
        Dimension d(i);
        const Rational& vd = tc.reference[d];
        den = uniform_int(rng, 1, max_den);
        std::int64_t shape = uniform_int(rng, 0, 19);
        bool lo_strict = uniform_int(rng, 0, 2) == 0;
        bool hi_strict = uniform_int(rng, 0, 2) == 0;
        if (shape < 2) {
            continue;
        }
        if (shape < 5) {
            make(d, RelOp::Eq, vd);
        } else if (shape < 8) {
            make(d, lo_strict ? RelOp::Gt : RelOp::Geq, vd - slack(lo_strict));
        } else if (shape < 11) {
            make(d, hi_strict ? RelOp::Lt : RelOp::Leq, vd + slack(hi_strict));
        } else {
            make(d, lo_strict ? RelOp::Gt : RelOp::Geq, vd - slack(lo_strict));
            make(d, hi_strict ? RelOp::Lt : RelOp::Leq, vd + slack(hi_strict));
        }
    }
    tc.trapezoid = Trapezoid::from_bounds(std::move(bounds));
    return tc;
}

} // namespace trapgen::testing
