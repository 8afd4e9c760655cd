// Copyright (c) trapgen contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Generalizes a reference vector relative to a Boolean combination of linear
// relations into a region (a trapezoid or its complement). For every formula
// F and reference v the result R satisfies:
//
//   F[v] = R[v]
//   F[v]  implies  R[w] => F[w] for all w   (under-approximation of F)
//   !F[v] implies  F[w] => R[w] for all w   (under-approximation of !F)
//
// Every bound in the body of a produced region holds at v.
#pragma once

#include "trapgen/core.hpp"

#include <cstdint>
#include <optional>

namespace trapgen {

/// Normalizes one linear relation around the reference vector.
Region normalize_relation(const LinearRelation& rel, const Vector& v);

/// Result of intersecting two bounds on the same variable.
///  - `kept` is the bound retained on the variable;
///  - `paired` is set when the two bounds were one lower and one upper bound,
///    in which case both survive and no residual is produced;
///  - `residual` is the side relation over lower dimensions that the caller
///    normalizes and intersects with the rest.
struct BoundIntersection {
    VariableBound kept;
    std::optional<VariableBound> paired;
    std::optional<LinearRelation> residual;
};

/// Both bounds must be on the same variable, normalized and true at v.
BoundIntersection intersect_same_var(const VariableBound& b1, const VariableBound& b2, const Vector& v);

/// Counters collected while reducing bound sets to trapezoids.
struct IntersectStats {
    std::uint64_t rewrites = 0;         // same-variable rewrites performed
    std::uint64_t measure_checks = 0;   // termination-measure checks passed
};

/// Fixed point of same-variable intersection over the union of both bound sets.
/// All bounds must hold at v. Every rewrite is checked to strictly decrease the
/// sum of bound dimensions; a non-decreasing step throws InternalError.
Trapezoid trapezoid_intersect(const Trapezoid& a, const Trapezoid& b, const Vector& v,
                              IntersectStats* stats = nullptr);

Region region_complement(const Region& r);

/// Positive/positive intersects the trapezoids; otherwise the left negative
/// operand wins, then the right one.
Region region_intersect(const Region& a, const Region& b, const Vector& v, IntersectStats* stats = nullptr);

/// Structural generalization: atoms normalize, `and` intersects, `not`
/// complements, `or` is ~(~R1 n ~R2). N-ary nodes fold left to right.
Region generalize(const Formula& f, const Vector& v, IntersectStats* stats = nullptr);

} // namespace trapgen
