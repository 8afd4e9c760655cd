// Copyright (c) trapgen contributors.
// SPDX-License-Identifier: Apache-2.0
#include "trapgen/core.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>

namespace trapgen {

std::optional<Rational> parse_rational(std::string_view text) {
    std::size_t i = 0;
    if (i < text.size() && text[i] == '-') {
        ++i;
    }
    auto digits = [&](std::size_t from) {
        std::size_t j = from;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
            ++j;
        }
        return j;
    };
    std::size_t end_num = digits(i);
    if (end_num == i) {
        return std::nullopt;
    }
    Integer num(std::string(text.substr(i, end_num - i)), 10);
    if (text[0] == '-') {
        num = -num;
    }
    if (end_num == text.size()) {
        return Rational(num);
    }
    if (text[end_num] != '/') {
        return std::nullopt;
    }
    std::size_t end_den = digits(end_num + 1);
    if (end_den == end_num + 1 || end_den != text.size()) {
        return std::nullopt;
    }
    Integer den(std::string(text.substr(end_num + 1)), 10);
    if (den == 0) {
        return std::nullopt;
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// ---------------------------------------------------------------------------
// VarTable / Vector

Dimension VarTable::add(std::string name, VarType type) {
    if (find(name)) {
        throw MalformedInput("duplicate variable '" + name + "'");
    }
    if (type == VarType::Integer && !entries_.empty() && entries_.back().type == VarType::Rational) {
        throw MalformedInput("integer variable '" + name + "' declared after rational variable '" +
                             entries_.back().name + "'");
    }
    entries_.push_back({std::move(name), type});
    return Dimension(entries_.size());
}

std::optional<Dimension> VarTable::find(std::string_view name) const {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].name == name) {
            return Dimension(i + 1);
        }
    }
    return std::nullopt;
}

const Rational& Vector::at(Dimension d) const {
    if (!covers(d)) {
        throw MalformedInput("vector of size " + std::to_string(values_.size()) + " has no dimension " +
                             std::to_string(d.index));
    }
    return values_[d.index - 1];
}

bool Vector::is_consistent(const VarTable& vars) const {
    if (values_.size() != vars.size()) {
        return false;
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (vars.is_integer(Dimension(i + 1)) && !is_integral(values_[i])) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial Polynomial::variable(Dimension d, const Rational& coeff) {
    Polynomial p;
    if (coeff != 0) {
        p.terms_.push_back({d, coeff});
    }
    return p;
}

Rational Polynomial::coeff(Dimension d) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), d,
                               [](const Term& t, Dimension key) { return t.var < key; });
    if (it != terms_.end() && it->var == d) {
        return it->coeff;
    }
    return 0;
}

Polynomial Polynomial::without(Dimension d) const {
    Polynomial p = *this;
    std::erase_if(p.terms_, [d](const Term& t) { return t.var == d; });
    return p;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    std::vector<Term> merged;
    merged.reserve(terms_.size() + o.terms_.size());
    auto a = terms_.begin();
    auto b = o.terms_.begin();
    while (a != terms_.end() || b != o.terms_.end()) {
        if (b == o.terms_.end() || (a != terms_.end() && a->var < b->var)) {
            merged.push_back(std::move(*a++));
        } else if (a == terms_.end() || b->var < a->var) {
            merged.push_back(*b++);
        } else {
            Rational c = a->coeff + b->coeff;
            if (c != 0) {
                merged.push_back({a->var, std::move(c)});
            }
            ++a;
            ++b;
        }
    }
    terms_ = std::move(merged);
    constant_ += o.constant_;
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) { return *this += -o; }

Polynomial& Polynomial::operator*=(const Rational& k) {
    if (k == 0) {
        terms_.clear();
        constant_ = 0;
        return *this;
    }
    for (auto& t : terms_) {
        t.coeff *= k;
    }
    constant_ *= k;
    return *this;
}

Polynomial& Polynomial::operator/=(const Rational& k) {
    if (k == 0) {
        throw MalformedInput("polynomial division by zero");
    }
    return *this *= Rational(1) / k;
}

Rational poly_eval(const Polynomial& p, const Vector& v) {
    Rational acc = p.constant();
    for (const auto& t : p.terms()) {
        acc += t.coeff * v.at(t.var);
    }
    return acc;
}

Integer poly_lcd(const Polynomial& p) {
    Integer d = p.constant().get_den();
    for (const auto& t : p.terms()) {
        d = lcm(d, t.coeff.get_den());
    }
    return d;
}

Polynomial poly_combine(const Rational& a, const Polynomial& p, const Rational& b, const Polynomial& q) {
    return p * a + q * b;
}

// ---------------------------------------------------------------------------
// Relations and formulas

bool holds(RelOp op, const Rational& lhs, const Rational& rhs) {
    switch (op) {
    case RelOp::Eq: return lhs == rhs;
    case RelOp::Lt: return lhs < rhs;
    case RelOp::Leq: return lhs <= rhs;
    case RelOp::Gt: return lhs > rhs;
    case RelOp::Geq: return lhs >= rhs;
    }
    return false;
}

RelOp mirror(RelOp op) {
    switch (op) {
    case RelOp::Eq: return RelOp::Eq;
    case RelOp::Lt: return RelOp::Gt;
    case RelOp::Leq: return RelOp::Geq;
    case RelOp::Gt: return RelOp::Lt;
    case RelOp::Geq: return RelOp::Leq;
    }
    return op;
}

std::string_view to_string(RelOp op) {
    switch (op) {
    case RelOp::Eq: return "=";
    case RelOp::Lt: return "<";
    case RelOp::Leq: return "<=";
    case RelOp::Gt: return ">";
    case RelOp::Geq: return ">=";
    }
    return "?";
}

bool relation_eval(const LinearRelation& rel, const Vector& v) {
    return holds(rel.op, poly_eval(rel.lhs, v), poly_eval(rel.rhs, v));
}

Formula Formula::atom(LinearRelation rel) { return Formula(Kind::Atom, {}, std::move(rel)); }

Formula Formula::conj(std::vector<Formula> children) {
    if (children.empty()) {
        throw MalformedInput("'and' needs at least one operand");
    }
    return Formula(Kind::And, std::move(children), std::nullopt);
}

Formula Formula::disj(std::vector<Formula> children) {
    if (children.empty()) {
        throw MalformedInput("'or' needs at least one operand");
    }
    return Formula(Kind::Or, std::move(children), std::nullopt);
}

Formula Formula::negate(Formula child) {
    std::vector<Formula> c;
    c.push_back(std::move(child));
    return Formula(Kind::Not, std::move(c), std::nullopt);
}

std::size_t Formula::dim() const {
    if (kind_ == Kind::Atom) {
        return std::max(atom_->lhs.dim(), atom_->rhs.dim());
    }
    std::size_t d = 0;
    for (const auto& c : children_) {
        d = std::max(d, c.dim());
    }
    return d;
}

bool formula_eval(const Formula& f, const Vector& v) {
    switch (f.kind()) {
    case Formula::Kind::Atom: return relation_eval(f.relation(), v);
    case Formula::Kind::Not: return !formula_eval(f.children().front(), v);
    case Formula::Kind::And:
        // Evaluate every child so a missing dimension is reported regardless of order.
        return std::ranges::count_if(f.children(), [&](const Formula& c) { return !formula_eval(c, v); }) == 0;
    case Formula::Kind::Or:
        return std::ranges::count_if(f.children(), [&](const Formula& c) { return formula_eval(c, v); }) > 0;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Bounds, intervals, trapezoids, regions

bool VariableBound::holds_at(const Vector& v) const { return holds(op, v.at(var), poly_eval(poly, v)); }

Interval Interval::single(VariableBound b) {
    if (!b.is_normalized()) {
        throw MalformedInput("bound is not normalized");
    }
    Interval i;
    i.var_ = b.var;
    if (b.op == RelOp::Eq) {
        i.equality_ = std::move(b);
    } else if (is_upper(b.op)) {
        i.upper_ = std::move(b);
    } else {
        i.lower_ = std::move(b);
    }
    return i;
}

Interval Interval::pair(VariableBound lower, VariableBound upper) {
    if (lower.var != upper.var || !is_lower(lower.op) || !is_upper(upper.op)) {
        throw MalformedInput("interval pair needs a lower and an upper bound on the same variable");
    }
    if (!lower.is_normalized() || !upper.is_normalized()) {
        throw MalformedInput("bound is not normalized");
    }
    Interval i;
    i.var_ = lower.var;
    i.lower_ = std::move(lower);
    i.upper_ = std::move(upper);
    return i;
}

Interval::Shape Interval::shape() const {
    if (equality_) {
        return Shape::Equality;
    }
    return (lower_ && upper_) ? Shape::Pair : Shape::Single;
}

std::vector<VariableBound> Interval::bounds() const {
    std::vector<VariableBound> out;
    for (const auto* b : {&equality_, &lower_, &upper_}) {
        if (*b) {
            out.push_back(**b);
        }
    }
    return out;
}

bool Interval::holds_at(const Vector& v) const {
    for (const auto* b : {&equality_, &lower_, &upper_}) {
        if (*b && !(*b)->holds_at(v)) {
            return false;
        }
    }
    return true;
}

Trapezoid::Trapezoid(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
    for (std::size_t i = 1; i < intervals_.size(); ++i) {
        if (!(intervals_[i].var() < intervals_[i - 1].var())) {
            throw MalformedInput("trapezoid intervals must be strictly descending by dimension");
        }
    }
}

Trapezoid Trapezoid::from_bounds(std::vector<VariableBound> bounds) {
    std::ranges::stable_sort(bounds, [](const VariableBound& a, const VariableBound& b) { return b.var < a.var; });
    std::vector<Interval> intervals;
    for (std::size_t i = 0; i < bounds.size();) {
        std::size_t j = i;
        std::optional<VariableBound> lo, hi, eq;
        for (; j < bounds.size() && bounds[j].var == bounds[i].var; ++j) {
            auto& slot = bounds[j].op == RelOp::Eq ? eq : (is_upper(bounds[j].op) ? hi : lo);
            if (slot) {
                throw MalformedInput("more than one bound of the same kind on dimension " +
                                     std::to_string(bounds[i].var.index));
            }
            slot = bounds[j];
        }
        if (eq && (lo || hi)) {
            throw MalformedInput("equality mixed with inequalities on dimension " +
                                 std::to_string(bounds[i].var.index));
        }
        if (eq) {
            intervals.push_back(Interval::single(std::move(*eq)));
        } else if (lo && hi) {
            intervals.push_back(Interval::pair(std::move(*lo), std::move(*hi)));
        } else {
            intervals.push_back(Interval::single(lo ? std::move(*lo) : std::move(*hi)));
        }
        i = j;
    }
    return Trapezoid(std::move(intervals));
}

std::vector<VariableBound> Trapezoid::bounds() const {
    std::vector<VariableBound> out;
    for (const auto& i : intervals_) {
        auto b = i.bounds();
        out.insert(out.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
    }
    return out;
}

const Interval* Trapezoid::find(Dimension d) const {
    for (const auto& i : intervals_) {
        if (i.var() == d) {
            return &i;
        }
    }
    return nullptr;
}

bool Trapezoid::holds_at(const Vector& v) const {
    return std::ranges::all_of(intervals_, [&](const Interval& i) { return i.holds_at(v); });
}

bool region_eval(const Region& r, const Vector& v) {
    bool inside = r.body.holds_at(v);
    return r.is_positive() ? inside : !inside;
}

// ---------------------------------------------------------------------------
// Debug printing

std::ostream& operator<<(std::ostream& os, const Polynomial& p) {
    bool first = true;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        if (!first) {
            os << " + ";
        }
        os << it->coeff << "*x" << it->var.index;
        first = false;
    }
    if (first || p.constant() != 0) {
        if (!first) {
            os << " + ";
        }
        os << p.constant();
    }
    return os;
}

std::ostream& operator<<(std::ostream& os, const VariableBound& b) {
    return os << "x" << b.var.index << " " << to_string(b.op) << " " << b.poly;
}

std::ostream& operator<<(std::ostream& os, const Trapezoid& t) {
    os << "{";
    bool first = true;
    for (const auto& b : t.bounds()) {
        os << (first ? "" : ", ") << b;
        first = false;
    }
    return os << "}";
}

std::ostream& operator<<(std::ostream& os, const Region& r) {
    return os << (r.is_positive() ? "+" : "~") << r.body;
}

std::ostream& operator<<(std::ostream& os, const Vector& v) {
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        os << (i ? " " : "") << v.values()[i];
    }
    return os << ")";
}

} // namespace trapgen
