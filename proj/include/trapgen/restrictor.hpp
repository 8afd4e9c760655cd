// Copyright (c) trapgen contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Restriction turns a trapezoid into one that can be sampled in ascending
// dimension order without ever meeting an empty interval, even for integer
// variables. It may shrink the trapezoid (domain restrictions) and change the
// basis of the integer variables; the accumulated change of basis maps
// samples of the restricted trapezoid back into the original space.
#pragma once

#include "trapgen/core.hpp"
#include "trapgen/generalizer.hpp"

#include <map>

namespace trapgen {

/// Dimension-preserving substitution x_i -> E_i with E_i = a_i x_i + Q_i,
/// a_i a positive integer and dim(Q_i) < i. Unlisted dimensions map to themselves.
class ChangeOfBasis {
public:
    ChangeOfBasis() = default;

    /// Throws MalformedInput unless e has the triangular shape above.
    void set(Dimension d, Polynomial e);

    /// E_d (x_d itself for identity entries).
    Polynomial image(Dimension d) const;

    const std::map<Dimension, Polynomial>& substitutions() const { return subst_; }
    bool is_identity() const { return subst_.empty(); }

    friend bool operator==(const ChangeOfBasis&, const ChangeOfBasis&) = default;

private:
    std::map<Dimension, Polynomial> subst_;
};

/// m | E with m >= 1 and E integral.
struct DivisibilityConstraint {
    Integer modulus;
    Polynomial expr;
};

bool divisibility_holds(const DivisibilityConstraint& dc, const Vector& v);

struct RestrictionResult {
    Trapezoid trapezoid;
    ChangeOfBasis basis;
    Vector reference; // in the restricted basis: basis[reference] is the original reference
};

/// Strict bounds on an integer variable become inclusive: x < P  ->  x <= P - 1/lcd(P),
/// P < x  ->  P + 1/lcd(P) <= x. Exact, because P only takes values in (1/lcd(P))Z
/// when every variable it mentions is an integer.
Interval bound_fix(const Interval& interval, const VarTable& vars);

/// Multiplicative inverse of a modulo m via the extended Euclidean algorithm.
/// Defined as 0 when m = 1. Throws MalformedInput when gcd(a, m) != 1.
Integer invmod(const Integer& a, const Integer& m);

/// Change of basis sigma with m | every coefficient of sigma(E) and every
/// solution of (m | E) in span(sigma). Throws UnsolvableDivisibility.
ChangeOfBasis tcob_for_divisibility(const DivisibilityConstraint& dc);

Polynomial cob_apply_poly(const ChangeOfBasis& sigma, const Polynomial& p);
VariableBound cob_apply_bound(const ChangeOfBasis& sigma, const VariableBound& b);
Interval cob_apply_interval(const ChangeOfBasis& sigma, const Interval& interval);
Trapezoid cob_apply_trapezoid(const ChangeOfBasis& sigma, const Trapezoid& t);

/// result(x_i) = next(acc(x_i)); on vectors result[eta] = acc[next[eta]].
ChangeOfBasis cob_compose(const ChangeOfBasis& acc, const ChangeOfBasis& next);

/// sigma[eta] = (E_1[eta], ..., E_n[eta]).
Vector cob_apply_vector(const ChangeOfBasis& sigma, const Vector& eta);

/// The eta with sigma[eta] = v. Substituted dimensions are integer dimensions,
/// so a non-integral component means v is outside span(sigma): SpanViolation.
Vector cob_invert_apply(const ChangeOfBasis& sigma, const Vector& v);

/// State threaded through one restriction step. `applied` is the change of
/// basis introduced by this step alone (identity when none).
struct RestrictStep {
    Interval interval;
    Trapezoid rest;
    ChangeOfBasis basis;
    Vector reference;
    ChangeOfBasis applied;
};

/// x_n = P on an integer variable with lcd(P) = D > 1: change basis so that
/// D | D*P holds identically, leaving x_n = sigma(D*P)/D integral everywhere.
RestrictStep integer_equality_step(const Interval& interval, const Trapezoid& rest, const ChangeOfBasis& acc,
                                   const Vector& v, const VarTable& vars);

/// Restricts the lower dimensions so a lower/upper pair is never empty (and
/// always contains an integer for integer variables).
RestrictStep interval_restrict_step(const Interval& interval, const Trapezoid& rest, const ChangeOfBasis& acc,
                                    const Vector& v, const VarTable& vars, IntersectStats* stats = nullptr);

/// Single pass from the highest interval down: bound fixing, integer equality,
/// interval restriction. `v` must be consistent and satisfy `t`.
RestrictionResult restrict(const Trapezoid& t, const Vector& v, const VarTable& vars,
                           IntersectStats* stats = nullptr);

} // namespace trapgen
