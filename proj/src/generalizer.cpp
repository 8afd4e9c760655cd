// Copyright (c) trapgen contributors.
// SPDX-License-Identifier: Apache-2.0
#include "trapgen/generalizer.hpp"

#include <functional>
#include <map>

namespace trapgen {

namespace {

RelOp negate_inequality(RelOp op) {
    switch (op) {
    case RelOp::Lt: return RelOp::Geq;
    case RelOp::Leq: return RelOp::Gt;
    case RelOp::Gt: return RelOp::Leq;
    case RelOp::Geq: return RelOp::Lt;
    case RelOp::Eq: break;
    }
    throw InternalError("equality has no single-bound negation");
}

Region singleton(Region::Sign sign, VariableBound b) {
    std::vector<Interval> intervals;
    intervals.push_back(Interval::single(std::move(b)));
    return {sign, Trapezoid(std::move(intervals))};
}

} // namespace

Region normalize_relation(const LinearRelation& rel, const Vector& v) {
    // Difference with zero: p op 0, op in {=, <, <=}.
    Polynomial p;
    RelOp op = rel.op;
    if (op == RelOp::Gt || op == RelOp::Geq) {
        p = rel.rhs - rel.lhs;
        op = mirror(op);
    } else {
        p = rel.lhs - rel.rhs;
    }

    if (p.is_constant()) {
        return holds(op, p.constant(), 0) ? Region::positive() : Region::negative();
    }

    // Isolate the leading variable: c*x_n + rest op 0  =>  x_n op' -rest/c.
    Dimension n(p.dim());
    Rational c = p.coeff(n);
    VariableBound bound{n, op, -p.without(n) / c};
    if (op != RelOp::Eq && c < 0) {
        bound.op = mirror(op);
    }

    const Rational& xv = v.at(n);
    Rational pv = poly_eval(bound.poly, v);
    if (holds(bound.op, xv, pv)) {
        return singleton(Region::Sign::Positive, std::move(bound));
    }
    if (bound.op == RelOp::Eq) {
        bound.op = xv > pv ? RelOp::Gt : RelOp::Lt;
    } else {
        bound.op = negate_inequality(bound.op);
    }
    return singleton(Region::Sign::Negative, std::move(bound));
}

namespace {

// Tries to keep `a` over `b` (same direction). Returns the residual when the
// side condition holds at v.
std::optional<LinearRelation> try_keep_upper(const VariableBound& a, const VariableBound& b, const Vector& v) {
    Rational av = poly_eval(a.poly, v);
    Rational bv = poly_eval(b.poly, v);
    if (is_strict(a.op) || !is_strict(b.op)) {
        if (av <= bv) {
            return LinearRelation{a.poly, RelOp::Leq, b.poly};
        }
    } else if (av < bv) {
        return LinearRelation{a.poly, RelOp::Lt, b.poly};
    }
    return std::nullopt;
}

std::optional<LinearRelation> try_keep_lower(const VariableBound& a, const VariableBound& b, const Vector& v) {
    Rational av = poly_eval(a.poly, v);
    Rational bv = poly_eval(b.poly, v);
    if (is_strict(a.op) || !is_strict(b.op)) {
        if (bv <= av) {
            return LinearRelation{b.poly, RelOp::Leq, a.poly};
        }
    } else if (bv < av) {
        return LinearRelation{b.poly, RelOp::Lt, a.poly};
    }
    return std::nullopt;
}

} // namespace

BoundIntersection intersect_same_var(const VariableBound& b1, const VariableBound& b2, const Vector& v) {
    if (b1.var != b2.var) {
        throw MalformedInput("intersect_same_var: bounds are on different variables");
    }
    // x = P with x op Q  =>  P op Q.
    if (b1.op == RelOp::Eq) {
        return {b1, std::nullopt, LinearRelation{b1.poly, b2.op, b2.poly}};
    }
    if (b2.op == RelOp::Eq) {
        return {b2, std::nullopt, LinearRelation{b2.poly, b1.op, b1.poly}};
    }
    if (is_upper(b1.op) != is_upper(b2.op)) {
        return {b1, b2, std::nullopt};
    }
    auto try_keep = is_upper(b1.op) ? try_keep_upper : try_keep_lower;
    if (auto r = try_keep(b1, b2, v)) {
        return {b1, std::nullopt, std::move(r)};
    }
    if (auto r = try_keep(b2, b1, v)) {
        return {b2, std::nullopt, std::move(r)};
    }
    throw InternalError("no intersection rule applies; are both bounds true at the reference vector?");
}

namespace {

class BoundReducer {
public:
    BoundReducer(const Vector& v, IntersectStats* stats) : v_(v), stats_(stats) {}

    void add(VariableBound b) {
        if (!b.is_normalized()) {
            throw MalformedInput("trapezoid_intersect: bound is not normalized");
        }
        pending_[b.var].push_back(std::move(b));
    }

    Trapezoid run() {
        std::vector<Interval> out;
        while (!pending_.empty()) {
            auto node = pending_.extract(pending_.begin());
            current_ = node.key();
            eq_.reset();
            lo_.reset();
            hi_.reset();
            for (auto& b : node.mapped()) {
                merge(std::move(b));
            }
            done_measure_ += current_.index * ((eq_ ? 1 : 0) + (lo_ ? 1 : 0) + (hi_ ? 1 : 0));
            if (eq_) {
                out.push_back(Interval::single(std::move(*eq_)));
            } else if (lo_ && hi_) {
                out.push_back(Interval::pair(std::move(*lo_), std::move(*hi_)));
            } else {
                out.push_back(Interval::single(lo_ ? std::move(*lo_) : std::move(*hi_)));
            }
        }
        return Trapezoid(std::move(out));
    }

private:
    using Slot = std::optional<VariableBound>;

    // Sum of the dimensions of every bound still in the system.
    std::size_t measure() const {
        std::size_t m = done_measure_;
        for (const auto& [d, bs] : pending_) {
            m += d.index * bs.size();
        }
        for (const Slot* s : {&eq_, &lo_, &hi_}) {
            m += *s ? current_.index : 0;
        }
        return m;
    }

    void merge(VariableBound b) {
        if (b.op == RelOp::Eq) {
            if (eq_) {
                rewrite(eq_, std::move(b));
                return;
            }
            eq_ = std::move(b);
            for (Slot* s : {&lo_, &hi_}) {
                if (*s) {
                    VariableBound other = std::move(**s);
                    s->reset();
                    rewrite(eq_, std::move(other));
                }
            }
            return;
        }
        if (eq_) {
            rewrite(eq_, std::move(b));
            return;
        }
        Slot& slot = is_upper(b.op) ? hi_ : lo_;
        if (slot) {
            rewrite(slot, std::move(b));
        } else {
            slot = std::move(b);
        }
    }

    // Replaces {*slot, b} by the kept bound plus the normalized residual.
    void rewrite(Slot& slot, VariableBound b) {
        // Count `b` as present: it was removed from pending_ by extract().
        std::size_t before = measure() + current_.index;
        BoundIntersection r = intersect_same_var(*slot, b, v_);
        if (r.paired || !r.residual) {
            throw InternalError("same-direction bounds did not produce a residual");
        }
        slot = std::move(r.kept);
        Region side = normalize_relation(*r.residual, v_);
        if (!side.is_positive()) {
            throw InternalError("intersection residual is false at the reference vector");
        }
        for (auto& rb : side.body.bounds()) {
            if (!(rb.var < current_)) {
                throw InternalError("intersection residual does not lower the dimension");
            }
            pending_[rb.var].push_back(std::move(rb));
        }
        std::size_t after = measure();
        if (after >= before) {
            throw InternalError("termination measure did not decrease (" + std::to_string(before) + " -> " +
                                std::to_string(after) + ")");
        }
        if (stats_) {
            ++stats_->rewrites;
            ++stats_->measure_checks;
        }
    }

    const Vector& v_;
    IntersectStats* stats_;
    std::map<Dimension, std::vector<VariableBound>, std::greater<>> pending_;
    Dimension current_;
    Slot eq_, lo_, hi_;
    std::size_t done_measure_ = 0;
};

} // namespace

Trapezoid trapezoid_intersect(const Trapezoid& a, const Trapezoid& b, const Vector& v, IntersectStats* stats) {
    if (a.empty()) {
        return b;
    }
    if (b.empty()) {
        return a;
    }
    BoundReducer reducer(v, stats);
    for (const auto* t : {&a, &b}) {
        for (auto& bound : t->bounds()) {
            reducer.add(std::move(bound));
        }
    }
    return reducer.run();
}

Region region_complement(const Region& r) {
    return {r.is_positive() ? Region::Sign::Negative : Region::Sign::Positive, r.body};
}

Region region_intersect(const Region& a, const Region& b, const Vector& v, IntersectStats* stats) {
    if (a.is_positive() && b.is_positive()) {
        return Region::positive(trapezoid_intersect(a.body, b.body, v, stats));
    }
    return a.is_positive() ? b : a;
}

Region generalize(const Formula& f, const Vector& v, IntersectStats* stats) {
    switch (f.kind()) {
    case Formula::Kind::Atom: return normalize_relation(f.relation(), v);
    case Formula::Kind::Not: return region_complement(generalize(f.children().front(), v, stats));
    case Formula::Kind::And: {
        Region acc = generalize(f.children().front(), v, stats);
        for (std::size_t i = 1; i < f.children().size(); ++i) {
            acc = region_intersect(acc, generalize(f.children()[i], v, stats), v, stats);
        }
        return acc;
    }
    case Formula::Kind::Or: {
        Region acc = generalize(f.children().front(), v, stats);
        for (std::size_t i = 1; i < f.children().size(); ++i) {
            Region next = generalize(f.children()[i], v, stats);
            acc = region_complement(
                region_intersect(region_complement(acc), region_complement(next), v, stats));
        }
        return acc;
    }
    }
    throw InternalError("unknown formula kind");
}

} // namespace trapgen
