// Copyright (c) trapgen contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Exact-arithmetic representation of linear polynomials, vectors, variable
// bounds, intervals, trapezoids, regions and Boolean formulas over linear
// relations. Everything here is an immutable value once built.
#pragma once

#include "trapgen/error.hpp"
#include "trapgen/rational.hpp"

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace trapgen {

/// 1-based variable index. Dimension order is the variable order used by
/// every normalized bound: a bound on x_n mentions only x_1 .. x_{n-1}.
struct Dimension {
    std::size_t index = 1;

    constexpr Dimension() = default;
    constexpr explicit Dimension(std::size_t i) : index(i) {}

    friend constexpr auto operator<=>(Dimension, Dimension) = default;
};

enum class VarType { Integer, Rational };

/// Declared variables. Position is dimension. Integer variables always precede
/// rational ones, so a bound on an integer variable never mentions a rational.
class VarTable {
public:
    struct Entry {
        std::string name;
        VarType type;
        friend bool operator==(const Entry&, const Entry&) = default;
    };

    VarTable() = default;

    /// Throws MalformedInput on a duplicate name or an integer declared after a rational.
    Dimension add(std::string name, VarType type);

    std::size_t size() const { return entries_.size(); }
    const std::string& name(Dimension d) const { return entries_.at(d.index - 1).name; }
    VarType type(Dimension d) const { return entries_.at(d.index - 1).type; }
    bool is_integer(Dimension d) const { return type(d) == VarType::Integer; }
    std::optional<Dimension> find(std::string_view name) const;
    const std::vector<Entry>& entries() const { return entries_; }

    friend bool operator==(const VarTable&, const VarTable&) = default;

private:
    std::vector<Entry> entries_;
};

/// Total assignment of a value to each declared dimension.
class Vector {
public:
    Vector() = default;
    explicit Vector(std::size_t size) : values_(size) {}
    explicit Vector(std::vector<Rational> values) : values_(std::move(values)) {}

    std::size_t size() const { return values_.size(); }
    bool covers(Dimension d) const { return d.index >= 1 && d.index <= values_.size(); }

    const Rational& operator[](Dimension d) const { return values_[d.index - 1]; }
    Rational& operator[](Dimension d) { return values_[d.index - 1]; }

    /// Checked access; MalformedInput if d is not assigned.
    const Rational& at(Dimension d) const;

    const std::vector<Rational>& values() const { return values_; }

    /// Every integer dimension holds an integral value.
    bool is_consistent(const VarTable& vars) const;

    friend bool operator==(const Vector&, const Vector&) = default;

private:
    std::vector<Rational> values_;
};

/// c_0 + sum c_i x_i with nonzero c_i, terms kept in ascending dimension.
class Polynomial {
public:
    struct Term {
        Dimension var;
        Rational coeff;
        friend bool operator==(const Term&, const Term&) = default;
    };

    Polynomial() = default;
    explicit Polynomial(Rational constant) : constant_(std::move(constant)) {}
    Polynomial(long constant) : constant_(constant) {} // NOLINT(google-explicit-constructor)

    static Polynomial variable(Dimension d, const Rational& coeff = 1);

    const std::vector<Term>& terms() const { return terms_; }
    const Rational& constant() const { return constant_; }
    Rational coeff(Dimension d) const;

    /// Largest dimension with a nonzero coefficient; 0 for constants.
    std::size_t dim() const { return terms_.empty() ? 0 : terms_.back().var.index; }
    bool is_constant() const { return terms_.empty(); }

    /// Copy without the x_d term.
    Polynomial without(Dimension d) const;

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Rational& k);
    Polynomial& operator/=(const Rational& k);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Rational& k) { return a *= k; }
    friend Polynomial operator*(const Rational& k, Polynomial a) { return a *= k; }
    friend Polynomial operator/(Polynomial a, const Rational& k) { return a /= k; }
    Polynomial operator-() const { return *this * Rational(-1); }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    std::vector<Term> terms_;
    Rational constant_{0};
};

/// Exact value of P at v. MalformedInput if v misses a dimension of P.
Rational poly_eval(const Polynomial& p, const Vector& v);

/// Least common multiple of the denominators of every coefficient and the constant.
Integer poly_lcd(const Polynomial& p);

/// a*P + b*Q, zero coefficients dropped.
Polynomial poly_combine(const Rational& a, const Polynomial& p, const Rational& b, const Polynomial& q);

enum class RelOp { Eq, Lt, Leq, Gt, Geq };

bool holds(RelOp op, const Rational& lhs, const Rational& rhs);
inline bool is_strict(RelOp op) { return op == RelOp::Lt || op == RelOp::Gt; }
inline bool is_upper(RelOp op) { return op == RelOp::Lt || op == RelOp::Leq; }
inline bool is_lower(RelOp op) { return op == RelOp::Gt || op == RelOp::Geq; }
/// The operator obtained by swapping the operands: a op b <=> b mirror(op) a.
RelOp mirror(RelOp op);
std::string_view to_string(RelOp op);

struct LinearRelation {
    Polynomial lhs;
    RelOp op = RelOp::Eq;
    Polynomial rhs;
    friend bool operator==(const LinearRelation&, const LinearRelation&) = default;
};

bool relation_eval(const LinearRelation& rel, const Vector& v);

class Formula {
public:
    enum class Kind { And, Or, Not, Atom };

    static Formula atom(LinearRelation rel);
    static Formula conj(std::vector<Formula> children);
    static Formula disj(std::vector<Formula> children);
    static Formula negate(Formula child);

    Kind kind() const { return kind_; }
    const std::vector<Formula>& children() const { return children_; }
    const LinearRelation& relation() const { return *atom_; }

    /// Largest dimension mentioned anywhere in the formula.
    std::size_t dim() const;

    friend bool operator==(const Formula&, const Formula&) = default;

private:
    Formula(Kind kind, std::vector<Formula> children, std::optional<LinearRelation> atom)
        : kind_(kind), children_(std::move(children)), atom_(std::move(atom)) {}

    Kind kind_;
    std::vector<Formula> children_;
    std::optional<LinearRelation> atom_;
};

bool formula_eval(const Formula& f, const Vector& v);

/// x_var op poly. Normalized when dim(poly) < var.
struct VariableBound {
    Dimension var;
    RelOp op = RelOp::Eq;
    Polynomial poly;

    bool is_normalized() const { return poly.dim() < var.index; }
    bool holds_at(const Vector& v) const;

    friend bool operator==(const VariableBound&, const VariableBound&) = default;
};

/// All bounds on one variable: a lone bound, a lower/upper pair, or an equality.
class Interval {
public:
    enum class Shape { Single, Pair, Equality };

    /// Equality bounds give an Equality interval, anything else a Single one.
    static Interval single(VariableBound b);
    static Interval pair(VariableBound lower, VariableBound upper);

    Dimension var() const { return var_; }
    Shape shape() const;

    const std::optional<VariableBound>& lower() const { return lower_; }
    const std::optional<VariableBound>& upper() const { return upper_; }
    const std::optional<VariableBound>& equality() const { return equality_; }

    /// Constituent bounds: equality, or lower then upper.
    std::vector<VariableBound> bounds() const;
    bool holds_at(const Vector& v) const;

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    Interval() = default;

    Dimension var_;
    std::optional<VariableBound> lower_;
    std::optional<VariableBound> upper_;
    std::optional<VariableBound> equality_;
};

/// Intervals in strictly descending dimension; absent dimensions are unbound.
class Trapezoid {
public:
    Trapezoid() = default;
    /// Throws MalformedInput unless intervals are strictly descending with normalized bounds.
    explicit Trapezoid(std::vector<Interval> intervals);

    /// Groups bounds per variable. Throws MalformedInput if a variable gets more
    /// than one upper, one lower, or an equality mixed with anything else.
    static Trapezoid from_bounds(std::vector<VariableBound> bounds);

    const std::vector<Interval>& intervals() const { return intervals_; }
    bool empty() const { return intervals_.empty(); }
    std::vector<VariableBound> bounds() const;
    const Interval* find(Dimension d) const;
    std::size_t dim() const { return intervals_.empty() ? 0 : intervals_.front().var().index; }

    bool holds_at(const Vector& v) const;

    friend bool operator==(const Trapezoid&, const Trapezoid&) = default;

private:
    std::vector<Interval> intervals_;
};

struct Region {
    enum class Sign { Positive, Negative };

    Sign sign = Sign::Positive;
    Trapezoid body;

    static Region positive(Trapezoid t = {}) { return {Sign::Positive, std::move(t)}; }
    static Region negative(Trapezoid t = {}) { return {Sign::Negative, std::move(t)}; }
    bool is_positive() const { return sign == Sign::Positive; }

    friend bool operator==(const Region&, const Region&) = default;
};

bool region_eval(const Region& r, const Vector& v);

// Debug printing with positional names x1, x2, ...
std::ostream& operator<<(std::ostream& os, const Polynomial& p);
std::ostream& operator<<(std::ostream& os, const VariableBound& b);
std::ostream& operator<<(std::ostream& os, const Trapezoid& t);
std::ostream& operator<<(std::ostream& os, const Region& r);
std::ostream& operator<<(std::ostream& os, const Vector& v);

} // namespace trapgen
