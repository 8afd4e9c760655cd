// Copyright (c) trapgen contributors.
// SPDX-License-Identifier: Apache-2.0
#include "trapgen/restrictor.hpp"

#include <cstdlib>

namespace trapgen {

void ChangeOfBasis::set(Dimension d, Polynomial e) {
    if (e.dim() != d.index) {
        throw MalformedInput("change of basis must preserve dimension " + std::to_string(d.index));
    }
    const Rational a = e.coeff(d);
    if (a <= 0 || !is_integral(a)) {
        throw MalformedInput("change of basis needs a positive integer leading coefficient");
    }
    if (e == Polynomial::variable(d)) {
        subst_.erase(d);
    } else {
        subst_.insert_or_assign(d, std::move(e));
    }
}

Polynomial ChangeOfBasis::image(Dimension d) const {
    auto it = subst_.find(d);
    return it == subst_.end() ? Polynomial::variable(d) : it->second;
}

bool divisibility_holds(const DivisibilityConstraint& dc, const Vector& v) {
    Rational e = poly_eval(dc.expr, v);
    return is_integral(e) && mpz_divisible_p(e.get_num_mpz_t(), dc.modulus.get_mpz_t()) != 0;
}

Interval bound_fix(const Interval& interval, const VarTable& vars) {
    if (!vars.is_integer(interval.var()) || interval.shape() == Interval::Shape::Equality) {
        return interval;
    }
    auto fix = [](VariableBound b) {
        if (!is_strict(b.op)) {
            return b;
        }
        Rational step(1, poly_lcd(b.poly));
        step.canonicalize();
        if (b.op == RelOp::Lt) {
            b.poly -= Polynomial(step);
            b.op = RelOp::Leq;
        } else {
            b.poly += Polynomial(step);
            b.op = RelOp::Geq;
        }
        return b;
    };
    if (interval.shape() == Interval::Shape::Pair) {
        return Interval::pair(fix(*interval.lower()), fix(*interval.upper()));
    }
    return Interval::single(fix(interval.bounds().front()));
}

Integer invmod(const Integer& a, const Integer& m) {
    if (m <= 0) {
        throw MalformedInput("invmod: modulus must be positive");
    }
    if (m == 1) {
        return 0;
    }
    // Invariant: old_r = old_s * a (mod m), r = s * a (mod m).
    Integer old_r = mod_floor(a, m), r = m;
    Integer old_s = 1, s = 0;
    while (r != 0) {
        Integer q = old_r / r;
        Integer t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1) {
        throw MalformedInput("invmod: " + a.get_str() + " is not invertible modulo " + m.get_str());
    }
    return mod_floor(old_s, m);
}

Polynomial cob_apply_poly(const ChangeOfBasis& sigma, const Polynomial& p) {
    if (sigma.is_identity()) {
        return p;
    }
    Polynomial out(p.constant());
    for (const auto& t : p.terms()) {
        out += sigma.image(t.var) * t.coeff;
    }
    return out;
}

namespace {

ChangeOfBasis tcob(const Integer& m, const Polynomial& e) {
    if (e.is_constant()) {
        const Rational& c = e.constant();
        if (!is_integral(c) || mpz_divisible_p(c.get_num_mpz_t(), m.get_mpz_t()) == 0) {
            throw UnsolvableDivisibility("(" + m.get_str() + " | " + c.get_str() + ") has no solution");
        }
        return {};
    }
    // e = f + c*x with dim(f) < dim(x).
    Dimension x(e.dim());
    Integer c = e.coeff(x).get_num();
    Polynomial f = e.without(x);
    Integer g = gcd(abs(c), m);
    Integer c1 = c / g;
    Integer m1 = m / g;
    ChangeOfBasis sigma = tcob(g, f);
    Polynomial f1 = cob_apply_poly(sigma, f) / Rational(g);
    Integer inv = invmod(mod_floor(c1, m1), m1);
    sigma.set(x, Polynomial::variable(x, Rational(m1)) - f1 * Rational(inv));
    return sigma;
}

} // namespace

ChangeOfBasis tcob_for_divisibility(const DivisibilityConstraint& dc) {
    if (dc.modulus < 1) {
        throw MalformedInput("divisibility modulus must be positive");
    }
    if (poly_lcd(dc.expr) != 1) {
        throw MalformedInput("divisibility expression must have integer coefficients");
    }
    return tcob(dc.modulus, dc.expr);
}

VariableBound cob_apply_bound(const ChangeOfBasis& sigma, const VariableBound& b) {
    if (sigma.is_identity()) {
        return b;
    }
    // a*x + Q op sigma(P)  =>  x op (sigma(P) - Q) / a, with a > 0.
    Polynomial e = sigma.image(b.var);
    Rational a = e.coeff(b.var);
    return {b.var, b.op, (cob_apply_poly(sigma, b.poly) - e.without(b.var)) / a};
}

Interval cob_apply_interval(const ChangeOfBasis& sigma, const Interval& interval) {
    if (interval.shape() == Interval::Shape::Pair) {
        return Interval::pair(cob_apply_bound(sigma, *interval.lower()), cob_apply_bound(sigma, *interval.upper()));
    }
    return Interval::single(cob_apply_bound(sigma, interval.bounds().front()));
}

Trapezoid cob_apply_trapezoid(const ChangeOfBasis& sigma, const Trapezoid& t) {
    if (sigma.is_identity()) {
        return t;
    }
    std::vector<Interval> out;
    out.reserve(t.intervals().size());
    for (const auto& i : t.intervals()) {
        out.push_back(cob_apply_interval(sigma, i));
    }
    return Trapezoid(std::move(out));
}

ChangeOfBasis cob_compose(const ChangeOfBasis& acc, const ChangeOfBasis& next) {
    ChangeOfBasis out;
    for (const auto* s : {&acc, &next}) {
        for (const auto& [d, e] : s->substitutions()) {
            out.set(d, cob_apply_poly(next, acc.image(d)));
        }
    }
    return out;
}

Vector cob_apply_vector(const ChangeOfBasis& sigma, const Vector& eta) {
    Vector v = eta;
    for (const auto& [d, e] : sigma.substitutions()) {
        v[d] = poly_eval(e, eta);
    }
    return v;
}

Vector cob_invert_apply(const ChangeOfBasis& sigma, const Vector& v) {
    // Triangular: solve ascending, each E_i only mentions eta_1..eta_i.
    Vector eta = v;
    for (const auto& [d, e] : sigma.substitutions()) {
        if (!v.covers(d)) {
            throw MalformedInput("cob_invert_apply: vector misses dimension " + std::to_string(d.index));
        }
        Rational a = e.coeff(d);
        Rational value = (v[d] - poly_eval(e.without(d), eta)) / a;
        if (!is_integral(value)) {
            throw SpanViolation("vector is outside the span of the change of basis at dimension " +
                                std::to_string(d.index));
        }
        eta[d] = std::move(value);
    }
    return eta;
}

namespace {

void require_integer_dims(const Polynomial& p, const VarTable& vars) {
    for (const auto& t : p.terms()) {
        if (!vars.is_integer(t.var)) {
            throw MalformedInput("integer variable bounded by rational dimension " + std::to_string(t.var.index));
        }
    }
}

Trapezoid intersect_relation(const Trapezoid& t, const LinearRelation& rel, const Vector& v, IntersectStats* stats) {
    Region r = normalize_relation(rel, v);
    if (!r.is_positive()) {
        throw InternalError("domain restriction is false at the reference vector");
    }
    return trapezoid_intersect(t, r.body, v, stats);
}

RestrictStep unchanged(const Interval& interval, const Trapezoid& rest, const ChangeOfBasis& acc, const Vector& v) {
    return {interval, rest, acc, v, ChangeOfBasis{}};
}

} // namespace

RestrictStep integer_equality_step(const Interval& interval, const Trapezoid& rest, const ChangeOfBasis& acc,
                                   const Vector& v, const VarTable& vars) {
    if (interval.shape() != Interval::Shape::Equality || !vars.is_integer(interval.var())) {
        return unchanged(interval, rest, acc, v);
    }
    const VariableBound& eq = *interval.equality();
    Integer d = poly_lcd(eq.poly);
    if (d == 1) {
        return unchanged(interval, rest, acc, v);
    }
    require_integer_dims(eq.poly, vars);
    Polynomial scaled = eq.poly * Rational(d);
    ChangeOfBasis step = tcob_for_divisibility({d, scaled});
    Interval fixed = Interval::single({eq.var, RelOp::Eq, cob_apply_poly(step, scaled) / Rational(d)});
    return {std::move(fixed), cob_apply_trapezoid(step, rest), cob_compose(acc, step), cob_invert_apply(step, v),
            step};
}

RestrictStep interval_restrict_step(const Interval& interval, const Trapezoid& rest, const ChangeOfBasis& acc,
                                    const Vector& v, const VarTable& vars, IntersectStats* stats) {
    if (interval.shape() != Interval::Shape::Pair) {
        return unchanged(interval, rest, acc, v);
    }
    const VariableBound& lower = *interval.lower();
    const VariableBound& upper = *interval.upper();
    const bool integer = vars.is_integer(interval.var());

    if (!integer || poly_lcd(lower.poly) == 1 || poly_lcd(upper.poly) == 1) {
        // An empty open interval is possible when lo = hi and either side is strict.
        RelOp op = (is_strict(lower.op) || is_strict(upper.op)) ? RelOp::Lt : RelOp::Leq;
        return {interval, intersect_relation(rest, {lower.poly, op, upper.poly}, v, stats), acc, v, {}};
    }

    require_integer_dims(lower.poly, vars);
    require_integer_dims(upper.poly, vars);
    Rational lo_v = poly_eval(lower.poly, v);
    Rational hi_v = poly_eval(upper.poly, v);
    if (lo_v + 1 <= hi_v) {
        return {interval, intersect_relation(rest, {lower.poly + 1, RelOp::Leq, upper.poly}, v, stats), acc, v, {}};
    }

    // Only x[v] fits: pin the lower bound to x[v] at v, then make it integral everywhere.
    Polynomial tight = lower.poly + Polynomial(v.at(interval.var()) - lo_v);
    Integer d = poly_lcd(tight);
    Polynomial scaled = tight * Rational(d);
    ChangeOfBasis step = tcob_for_divisibility({d, scaled});
    Polynomial new_lower = cob_apply_poly(step, scaled) / Rational(d);
    Polynomial new_upper = cob_apply_poly(step, upper.poly);
    Vector v2 = cob_invert_apply(step, v);
    Trapezoid moved = cob_apply_trapezoid(step, rest);
    Trapezoid restricted = intersect_relation(moved, {new_lower, RelOp::Leq, new_upper}, v2, stats);
    Interval fixed = Interval::pair({lower.var, lower.op, std::move(new_lower)}, {upper.var, upper.op, std::move(new_upper)});
    return {std::move(fixed), std::move(restricted), cob_compose(acc, step), std::move(v2), std::move(step)};
}

RestrictionResult restrict(const Trapezoid& t, const Vector& v, const VarTable& vars, IntersectStats* stats) {
    if (!v.is_consistent(vars)) {
        throw MalformedInput("restrict: reference vector is not type-consistent");
    }
    if (!t.holds_at(v)) {
        throw MalformedInput("restrict: reference vector does not satisfy the trapezoid");
    }
    std::vector<Interval> done;
    Trapezoid rest = t;
    ChangeOfBasis acc;
    Vector ref = v;

    auto carry_up = [&done](const ChangeOfBasis& step) {
        if (step.is_identity()) {
            return;
        }
        // Already-restricted higher intervals must follow the new basis of the dimensions below them.
        for (auto& i : done) {
            i = cob_apply_interval(step, i);
        }
    };

    while (!rest.empty()) {
        std::vector<Interval> tail(rest.intervals().begin() + 1, rest.intervals().end());
        Interval head = bound_fix(rest.intervals().front(), vars);
        Trapezoid lower(std::move(tail));

        RestrictStep ie = integer_equality_step(head, lower, acc, ref, vars);
        carry_up(ie.applied);
        RestrictStep ir = interval_restrict_step(ie.interval, ie.rest, ie.basis, ie.reference, vars, stats);
        carry_up(ir.applied);

        done.push_back(std::move(ir.interval));
        rest = std::move(ir.rest);
        acc = std::move(ir.basis);
        ref = std::move(ir.reference);
    }
    return {Trapezoid(std::move(done)), std::move(acc), std::move(ref)};
}

} // namespace trapgen
