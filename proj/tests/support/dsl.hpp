// Copyright (c) trapgen contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Short constructors for writing expected values in tests.
#pragma once

#include "trapgen/core.hpp"

namespace trapgen::testing {

inline Rational q(long n, long d = 1) {
    Rational r{Integer(n), Integer(d)};
    r.canonicalize();
    return r;
}

inline Polynomial X(std::size_t d, const Rational& c = 1) { return Polynomial::variable(Dimension(d), c); }
inline Polynomial K(const Rational& c) { return Polynomial(c); }

inline Vector vec(std::initializer_list<Rational> values) { return Vector(std::vector<Rational>(values)); }

inline VariableBound bound(std::size_t d, RelOp op, Polynomial p) { return {Dimension(d), op, std::move(p)}; }

inline Trapezoid trap(std::vector<VariableBound> bounds) { return Trapezoid::from_bounds(std::move(bounds)); }

inline VarTable ints(std::initializer_list<const char*> names) {
    VarTable t;
    for (const char* n : names) {
        t.add(n, VarType::Integer);
    }
    return t;
}

inline VarTable rats(std::initializer_list<const char*> names) {
    VarTable t;
    for (const char* n : names) {
        t.add(n, VarType::Rational);
    }
    return t;
}

} // namespace trapgen::testing
