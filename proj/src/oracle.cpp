// Copyright (c) trapgen contributors.
// SPDX-License-Identifier: Apache-2.0
#include "trapgen/oracle.hpp"

#include "trapgen/sampler.hpp"

#include <thread>

namespace trapgen {

void GridSpec::validate() const {
    if (lo > hi) {
        throw MalformedInput("grid lo must not exceed hi");
    }
    if (denom < 1) {
        throw MalformedInput("grid denominator must be positive");
    }
}

Grid::Grid(const GridSpec& spec, const VarTable& vars) : spec_(spec) {
    spec.validate();
    const Integer limit = Integer(1) << 62;
    Integer total = 1;
    for (std::size_t i = 1; i <= vars.size(); ++i) {
        bool integer = vars.is_integer(Dimension(i));
        std::int64_t step = integer ? spec.denom : 1;
        Integer count = (Integer(spec.hi) - spec.lo) * spec.denom / step + 1;
        Integer scaled_lo = Integer(spec.lo) * spec.denom;
        total *= count;
        if (total > limit || abs(scaled_lo) > limit || Integer(spec.hi) * spec.denom > limit) {
            throw MalformedInput("grid too large");
        }
        lo_.push_back(scaled_lo.get_si());
        step_.push_back(step);
        extent_.push_back(count.get_ui());
    }
    size_ = total.get_ui();
}

namespace {

// Scaled coordinates of point `index`, dimension 1 most significant.
void decode(const Grid& g, std::uint64_t index, std::vector<std::int64_t>& k) {
    k.resize(g.dims());
    for (std::size_t i = g.dims(); i-- > 0;) {
        std::uint64_t digit = index % g.extent(i);
        index /= g.extent(i);
        k[i] = g.scaled_lo(i) + static_cast<std::int64_t>(digit) * g.scaled_step(i);
    }
}

// Advances to the next point in grid order.
void increment(const Grid& g, std::vector<std::int64_t>& k) {
    for (std::size_t i = g.dims(); i-- > 0;) {
        k[i] += g.scaled_step(i);
        std::int64_t last = g.scaled_lo(i) + static_cast<std::int64_t>(g.extent(i) - 1) * g.scaled_step(i);
        if (k[i] <= last) {
            return;
        }
        k[i] = g.scaled_lo(i);
    }
}

Vector to_vector(const std::vector<std::int64_t>& k, std::int64_t denom) {
    std::vector<Rational> values;
    values.reserve(k.size());
    for (std::int64_t ki : k) {
        Rational q{Integer(ki), Integer(denom)};
        q.canonicalize();
        values.push_back(std::move(q));
    }
    return Vector(std::move(values));
}

// Sign of P at a grid point, from N(k) = sum (c_i * L) k_i + c_0 * L * denom
// where L = lcd(P); N has the sign of P because L * denom > 0.
class ScaledPoly {
public:
    ScaledPoly(const Polynomial& p, std::int64_t denom, std::int64_t max_abs_k) {
        Integer l = poly_lcd(p);
        Integer a0 = Rational(p.constant() * l * denom).get_num();
        Integer bound = abs(a0);
        const Integer limit = Integer(1) << 62;
        exact_ = a0.fits_slong_p() && abs(a0) < limit;
        constant_ = exact_ ? a0.get_si() : 0;
        for (const auto& t : p.terms()) {
            Integer a = Rational(t.coeff * l).get_num();
            bound += abs(a) * max_abs_k;
            exact_ = exact_ && abs(a) < limit;
            terms_.emplace_back(t.var.index - 1, exact_ ? a.get_si() : 0);
        }
        exact_ = exact_ && bound < (Integer(1) << 120);
    }

    bool exact() const { return exact_; }

    __int128 value(const std::int64_t* k) const {
        __int128 acc = constant_;
        for (const auto& [i, a] : terms_) {
            acc += static_cast<__int128>(a) * k[i];
        }
        return acc;
    }

    int sign(const std::int64_t* k) const {
        __int128 acc = value(k);
        return (acc > 0) - (acc < 0);
    }

private:
    std::vector<std::pair<std::size_t, std::int64_t>> terms_;
    std::int64_t constant_ = 0;
    bool exact_ = true;
};

bool sign_holds(RelOp op, int s) {
    switch (op) {
    case RelOp::Eq: return s == 0;
    case RelOp::Lt: return s < 0;
    case RelOp::Leq: return s <= 0;
    case RelOp::Gt: return s > 0;
    case RelOp::Geq: return s >= 0;
    }
    return false;
}

struct ScaledAtom {
    ScaledPoly diff; // compared against zero
    RelOp op;
    bool eval(const std::int64_t* k) const { return sign_holds(op, diff.sign(k)); }
};

class ScaledFormula {
public:
    ScaledFormula(const Formula& f, std::int64_t denom, std::int64_t max_abs_k) {
        root_ = build(f, denom, max_abs_k);
    }

    bool exact() const { return exact_; }
    bool eval(const std::int64_t* k) const { return eval(root_, k); }

private:
    struct Node {
        Formula::Kind kind;
        std::vector<std::size_t> children;
        std::size_t atom = 0;
    };

    std::size_t build(const Formula& f, std::int64_t denom, std::int64_t max_abs_k) {
        Node n{f.kind(), {}, 0};
        if (f.kind() == Formula::Kind::Atom) {
            const auto& r = f.relation();
            atoms_.push_back({ScaledPoly(r.lhs - r.rhs, denom, max_abs_k), r.op});
            exact_ = exact_ && atoms_.back().diff.exact();
            n.atom = atoms_.size() - 1;
        } else {
            for (const auto& c : f.children()) {
                n.children.push_back(build(c, denom, max_abs_k));
            }
        }
        nodes_.push_back(std::move(n));
        return nodes_.size() - 1;
    }

    bool eval(std::size_t id, const std::int64_t* k) const {
        const Node& n = nodes_[id];
        switch (n.kind) {
        case Formula::Kind::Atom: return atoms_[n.atom].eval(k);
        case Formula::Kind::Not: return !eval(n.children.front(), k);
        case Formula::Kind::And:
            for (std::size_t c : n.children) {
                if (!eval(c, k)) {
                    return false;
                }
            }
            return true;
        case Formula::Kind::Or:
            for (std::size_t c : n.children) {
                if (eval(c, k)) {
                    return true;
                }
            }
            return false;
        }
        return false;
    }

    std::vector<Node> nodes_;
    std::vector<ScaledAtom> atoms_;
    std::size_t root_ = 0;
    bool exact_ = true;
};

class ScaledRegion {
public:
    ScaledRegion(const Region& r, std::int64_t denom, std::int64_t max_abs_k) : positive_(r.is_positive()) {
        for (const auto& b : r.body.bounds()) {
            bounds_.push_back({ScaledPoly(Polynomial::variable(b.var) - b.poly, denom, max_abs_k), b.op});
            exact_ = exact_ && bounds_.back().diff.exact();
        }
    }

    bool exact() const { return exact_; }

    bool eval(const std::int64_t* k) const {
        bool inside = true;
        for (const auto& b : bounds_) {
            if (!b.eval(k)) {
                inside = false;
                break;
            }
        }
        return positive_ ? inside : !inside;
    }

private:
    bool positive_;
    std::vector<ScaledAtom> bounds_;
    bool exact_ = true;
};

// Inverse of an integral triangular basis on small integer points; nullopt
// means the point left the safe range and the exact path must decide.
class IntegerInverse {
public:
    static std::optional<IntegerInverse> build(const ChangeOfBasis& sigma, std::size_t dims) {
        IntegerInverse inv;
        inv.rows_.resize(dims);
        for (const auto& [d, e] : sigma.substitutions()) {
            if (d.index > dims || poly_lcd(e) != 1) {
                return std::nullopt;
            }
            Row& row = inv.rows_[d.index - 1];
            if (!fits(e.constant())) {
                return std::nullopt;
            }
            row.constant = e.constant().get_num().get_si();
            for (const auto& t : e.terms()) {
                if (!fits(t.coeff)) {
                    return std::nullopt;
                }
                std::int64_t c = t.coeff.get_num().get_si();
                if (t.var == d) {
                    row.lead = c;
                } else {
                    row.rest.emplace_back(t.var.index - 1, c);
                }
            }
        }
        return inv;
    }

    // True when w = sigma(eta) for some integer eta.
    std::optional<bool> covers(const std::int64_t* w, std::vector<__int128>& eta) const {
        eta.assign(rows_.size(), 0);
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const Row& row = rows_[i];
            __int128 num = static_cast<__int128>(w[i]) - row.constant;
            for (const auto& [j, c] : row.rest) {
                num -= static_cast<__int128>(c) * eta[j];
            }
            if (num % row.lead != 0) {
                return false;
            }
            eta[i] = num / row.lead;
            if (eta[i] > kLimit || eta[i] < -kLimit) {
                return std::nullopt;
            }
        }
        return true;
    }

private:
    static constexpr std::int64_t kLimit = std::int64_t(1) << 40;

    struct Row {
        std::int64_t lead = 1;
        std::int64_t constant = 0;
        std::vector<std::pair<std::size_t, std::int64_t>> rest;
    };

    static bool fits(const Rational& q) { return abs(q.get_num()) < (Integer(1) << 20); }

    std::vector<Row> rows_;
};

std::int64_t max_abs_scaled(const GridSpec& spec) {
    return std::max(std::abs(spec.lo), std::abs(spec.hi)) * spec.denom;
}

InvariantReport check_range(const Formula& f, const Region& r, bool fv, const Grid& grid, std::uint64_t begin,
                            std::uint64_t end, const CheckOptions& opts) {
    InvariantReport rep;
    const std::int64_t denom = grid.spec().denom;
    ScaledFormula sf(f, denom, max_abs_scaled(grid.spec()));
    ScaledRegion sr(r, denom, max_abs_scaled(grid.spec()));
    const bool fast = opts.fast_eval && sf.exact() && sr.exact();

    std::vector<std::int64_t> k;
    decode(grid, begin, k);
    for (std::uint64_t idx = begin; idx < end; ++idx, increment(grid, k)) {
        bool fw, rw;
        if (fast) {
            fw = sf.eval(k.data());
            rw = sr.eval(k.data());
        } else {
            Vector w = to_vector(k, denom);
            fw = formula_eval(f, w);
            rw = region_eval(r, w);
        }
        ++rep.points_checked;
        // F[v]: R must under-approximate F. !F[v]: R must contain every model of F.
        bool bad = fv ? (rw && !fw) : (fw && !rw);
        if (bad) {
            ++rep.violation_count;
            if (rep.inv2_violations.size() < opts.max_violations) {
                rep.inv2_violations.push_back(to_vector(k, denom));
            }
        }
    }
    return rep;
}

} // namespace

Vector Grid::point(std::uint64_t index) const {
    if (index >= size_) {
        throw MalformedInput("grid index out of range");
    }
    std::vector<std::int64_t> k;
    decode(*this, index, k);
    return to_vector(k, spec_.denom);
}

void Grid::for_each(std::uint64_t begin, std::uint64_t end, const std::function<bool(const Vector&)>& fn) const {
    end = std::min(end, size_);
    if (begin >= end) {
        return;
    }
    std::vector<std::int64_t> k;
    decode(*this, begin, k);
    for (std::uint64_t idx = begin; idx < end; ++idx, increment(*this, k)) {
        if (!fn(to_vector(k, spec_.denom))) {
            return;
        }
    }
}

std::vector<Vector> grid_points(const GridSpec& spec, const VarTable& vars) {
    Grid g(spec, vars);
    std::vector<Vector> out;
    out.reserve(g.size());
    g.for_each(0, g.size(), [&](const Vector& w) {
        out.push_back(w);
        return true;
    });
    return out;
}

InvariantReport check_invariants(const Formula& f, const Vector& v, const Region& r, const VarTable& vars,
                                 const GridSpec& spec, const CheckOptions& opts) {
    Grid grid(spec, vars);
    const bool fv = formula_eval(f, v);

    const unsigned parts = std::max(1u, opts.partitions);
    std::vector<InvariantReport> partial(parts);
    auto bounds = [&](unsigned p) { return grid.size() * p / parts; };
    if (parts == 1) {
        partial[0] = check_range(f, r, fv, grid, 0, grid.size(), opts);
    } else {
        std::vector<std::thread> workers;
        for (unsigned p = 0; p < parts; ++p) {
            workers.emplace_back([&, p] { partial[p] = check_range(f, r, fv, grid, bounds(p), bounds(p + 1), opts); });
        }
        for (auto& t : workers) {
            t.join();
        }
    }

    InvariantReport rep;
    rep.reference_satisfies = fv;
    rep.inv1_ok = fv == region_eval(r, v);
    for (auto& p : partial) {
        rep.points_checked += p.points_checked;
        rep.violation_count += p.violation_count;
        for (auto& w : p.inv2_violations) {
            if (rep.inv2_violations.size() < opts.max_violations) {
                rep.inv2_violations.push_back(std::move(w));
            }
        }
    }
    return rep;
}

SpanReport check_divisibility_span(const DivisibilityConstraint& dc, const ChangeOfBasis& sigma,
                                   const VarTable& vars, const GridSpec& spec) {
    for (std::size_t i = 1; i <= vars.size(); ++i) {
        if (!vars.is_integer(Dimension(i))) {
            throw MalformedInput("span check needs integer variables only");
        }
    }
    SpanReport rep;
    auto divides = [&](const Rational& q) {
        return is_integral(q) && mpz_divisible_p(q.get_num_mpz_t(), dc.modulus.get_mpz_t()) != 0;
    };
    Polynomial image = cob_apply_poly(sigma, dc.expr);
    rep.divisible_ok = divides(image.constant());
    for (const auto& t : image.terms()) {
        rep.divisible_ok = rep.divisible_ok && divides(t.coeff);
    }

    Grid grid({spec.lo, spec.hi, 1}, vars);
    ScaledPoly e(dc.expr, 1, max_abs_scaled({spec.lo, spec.hi, 1}));
    const bool fast = e.exact() && poly_lcd(dc.expr) == 1 && dc.modulus.fits_slong_p();
    const std::int64_t m = fast ? dc.modulus.get_si() : 1;
    const auto inverse = IntegerInverse::build(sigma, vars.size());
    std::vector<__int128> eta;
    std::vector<std::int64_t> k;
    decode(grid, 0, k);
    for (std::uint64_t idx = 0; idx < grid.size(); ++idx, increment(grid, k)) {
        ++rep.points_checked;
        bool solution;
        if (fast) {
            solution = e.value(k.data()) % m == 0;
        } else {
            solution = divisibility_holds(dc, to_vector(k, 1));
        }
        if (!solution) {
            continue;
        }
        ++rep.solutions;
        if (inverse) {
            if (auto c = inverse->covers(k.data(), eta); c && *c) {
                continue;
            }
        }
        Vector w = to_vector(k, 1);
        bool covered = false;
        try {
            Vector eta = cob_invert_apply(sigma, w);
            covered = eta.is_consistent(vars) && cob_apply_vector(sigma, eta) == w;
        } catch (const SpanViolation&) {
            covered = false;
        }
        if (!covered) {
            ++rep.missed;
            if (rep.missed_examples.size() < 10) {
                rep.missed_examples.push_back(std::move(w));
            }
        }
    }
    return rep;
}

std::optional<Vector> naive_solve(const Formula& f, const VarTable& vars, const GridSpec& spec,
                                  std::uint64_t budget, std::uint64_t seed) {
    Grid grid(spec, vars);
    ScaledFormula sf(f, spec.denom, max_abs_scaled(spec));
    std::vector<std::int64_t> k;
    auto holds_at = [&](const std::vector<std::int64_t>& pt) {
        return sf.exact() ? sf.eval(pt.data()) : formula_eval(f, to_vector(pt, spec.denom));
    };
    SamplerState rng(seed);
    for (std::uint64_t i = 0; i < budget; ++i) {
        decode(grid, rng.below(grid.size()), k);
        if (holds_at(k)) {
            return to_vector(k, spec.denom);
        }
    }
    decode(grid, 0, k);
    for (std::uint64_t idx = 0; idx < grid.size(); ++idx, increment(grid, k)) {
        if (holds_at(k)) {
            return to_vector(k, spec.denom);
        }
    }
    return std::nullopt;
}

} // namespace trapgen
