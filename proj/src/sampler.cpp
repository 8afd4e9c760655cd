// Copyright (c) trapgen contributors.
// SPDX-License-Identifier: Apache-2.0
#include "trapgen/sampler.hpp"

namespace trapgen {

void SamplerConfig::validate() const {
    if (unbounded_width < 1) {
        throw MalformedInput("unbounded width must be at least 1");
    }
    if (open_granularity < 2) {
        throw MalformedInput("open granularity must be at least 2");
    }
}

std::uint64_t SamplerState::below(std::uint64_t n) {
    // Reject the low (2^64 mod n) outputs so the remainder is unbiased.
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        std::uint64_t r = engine_();
        if (r >= threshold) {
            return r % n;
        }
    }
}

Integer SamplerState::uniform(const Integer& lo, const Integer& hi) {
    Integer range = hi - lo + 1;
    if (mpz_sizeinbase(range.get_mpz_t(), 2) <= 64 && range.fits_ulong_p()) {
        Integer r;
        std::uint64_t k = below(range.get_ui());
        mpz_set_ui(r.get_mpz_t(), k);
        return lo + r;
    }
    const std::size_t bits = mpz_sizeinbase(range.get_mpz_t(), 2);
    for (;;) {
        Integer r = 0;
        for (std::size_t filled = 0; filled < bits; filled += 64) {
            Integer word;
            mpz_set_ui(word.get_mpz_t(), engine_());
            r = (r << 64) + word;
        }
        mpz_fdiv_r_2exp(r.get_mpz_t(), r.get_mpz_t(), bits);
        if (r < range) {
            return lo + r;
        }
    }
}

namespace {

struct Endpoint {
    Rational value;
    bool strict;
};

Rational lattice(const Rational& a, const Rational& b, bool open, const SamplerConfig& cfg, SamplerState& state) {
    const Integer& g = cfg.open_granularity;
    Integer k = open ? state.uniform(1, g - 1) : state.uniform(0, g);
    Rational frac(k, g);
    frac.canonicalize();
    return a + (b - a) * frac;
}

Rational draw_rational(const std::optional<Endpoint>& lo, const std::optional<Endpoint>& hi, const SamplerConfig& cfg,
                       SamplerState& state) {
    const Rational w(cfg.unbounded_width);
    if (lo && hi) {
        if (lo->value > hi->value || (lo->value == hi->value && (lo->strict || hi->strict))) {
            throw BacktrackViolation("empty rational interval [" + lo->value.get_str() + ", " + hi->value.get_str() +
                                     "]");
        }
        if (lo->value == hi->value) {
            return lo->value;
        }
        return lattice(lo->value, hi->value, lo->strict || hi->strict, cfg, state);
    }
    if (lo) {
        return lattice(lo->value, lo->value + w, lo->strict, cfg, state);
    }
    if (hi) {
        return lattice(hi->value - w, hi->value, hi->strict, cfg, state);
    }
    return lattice(-w, w, false, cfg, state);
}

Integer draw_integer(const std::optional<Endpoint>& lo, const std::optional<Endpoint>& hi, const SamplerConfig& cfg,
                     SamplerState& state) {
    const Integer& w = cfg.unbounded_width;
    std::optional<Integer> l, u;
    if (lo) {
        l = lo->strict ? Integer(floor_of(lo->value) + 1) : ceil_of(lo->value);
    }
    if (hi) {
        u = hi->strict ? Integer(ceil_of(hi->value) - 1) : floor_of(hi->value);
    }
    if (l && u) {
        if (*l > *u) {
            throw BacktrackViolation("no integer in [" + lo->value.get_str() + ", " + hi->value.get_str() + "]");
        }
        return state.uniform(*l, *u);
    }
    if (l) {
        return state.uniform(*l, *l + w);
    }
    if (u) {
        return state.uniform(*u - w, *u);
    }
    return state.uniform(-w, w);
}

Rational draw_value(Dimension d, const std::optional<Endpoint>& lo, const std::optional<Endpoint>& hi,
                    const VarTable& vars, const SamplerConfig& cfg, SamplerState& state) {
    if (vars.is_integer(d)) {
        return Rational(draw_integer(lo, hi, cfg, state));
    }
    return draw_rational(lo, hi, cfg, state);
}

Rational draw_interval(const Interval* interval, Dimension d, const Vector& partial, const VarTable& vars,
                       const SamplerConfig& cfg, SamplerState& state) {
    if (interval == nullptr) {
        return draw_value(d, std::nullopt, std::nullopt, vars, cfg, state);
    }
    if (interval->equality()) {
        Rational value = poly_eval(interval->equality()->poly, partial);
        if (vars.is_integer(d) && !is_integral(value)) {
            throw BacktrackViolation("integer equality on dimension " + std::to_string(d.index) + " evaluates to " +
                                     value.get_str());
        }
        return value;
    }
    std::optional<Endpoint> lo, hi;
    if (interval->lower()) {
        lo = Endpoint{poly_eval(interval->lower()->poly, partial), is_strict(interval->lower()->op)};
    }
    if (interval->upper()) {
        hi = Endpoint{poly_eval(interval->upper()->poly, partial), is_strict(interval->upper()->op)};
    }
    return draw_value(d, lo, hi, vars, cfg, state);
}

template <typename Lookup>
Vector draw_ascending(Lookup&& lookup, const VarTable& vars, const SamplerConfig& cfg, SamplerState& state) {
    Vector v(vars.size());
    for (std::size_t i = 1; i <= vars.size(); ++i) {
        Dimension d(i);
        v[d] = draw_interval(lookup(d), d, v, vars, cfg, state);
    }
    return v;
}

void check_fits(const Trapezoid& t, const VarTable& vars) {
    if (t.dim() > vars.size()) {
        throw MalformedInput("trapezoid mentions dimension " + std::to_string(t.dim()) + " but only " +
                             std::to_string(vars.size()) + " variables are declared");
    }
}

} // namespace

Vector sample_trapezoid(const Trapezoid& t, const VarTable& vars, const SamplerConfig& cfg, SamplerState& state) {
    cfg.validate();
    check_fits(t, vars);
    // Intervals are stored descending; walk them from the back while going up.
    auto it = t.intervals().rbegin();
    return draw_ascending(
        [&](Dimension d) -> const Interval* {
            if (it != t.intervals().rend() && it->var() == d) {
                return &*it++;
            }
            return nullptr;
        },
        vars, cfg, state);
}

Vector sample_original(const RestrictionResult& res, const VarTable& vars, const SamplerConfig& cfg,
                       SamplerState& state) {
    return cob_apply_vector(res.basis, sample_trapezoid(res.trapezoid, vars, cfg, state));
}

Vector sample_complement(const Trapezoid& t, const VarTable& vars, const SamplerConfig& cfg, SamplerState& state) {
    cfg.validate();
    check_fits(t, vars);
    std::vector<VariableBound> bounds = t.bounds();
    if (bounds.empty()) {
        throw UnsatisfiableComplement("the complement of the empty trapezoid is unsatisfiable");
    }
    const VariableBound& chosen = bounds[state.below(bounds.size())];

    Vector v(vars.size());
    for (std::size_t i = 1; i <= vars.size(); ++i) {
        Dimension d(i);
        if (d != chosen.var) {
            v[d] = draw_value(d, std::nullopt, std::nullopt, vars, cfg, state);
            continue;
        }
        Endpoint at{poly_eval(chosen.poly, v), false};
        std::optional<Endpoint> lo, hi;
        switch (chosen.op) {
        case RelOp::Lt: lo = at; break;                               // x >= P
        case RelOp::Leq: lo = Endpoint{at.value, true}; break;        // x > P
        case RelOp::Gt: hi = at; break;                               // x <= P
        case RelOp::Geq: hi = Endpoint{at.value, true}; break;        // x < P
        case RelOp::Eq:
            (state.below(2) == 0 ? lo : hi) = Endpoint{at.value, true};
            break;
        }
        v[d] = draw_value(d, lo, hi, vars, cfg, state);
    }
    return v;
}

TrapezoidSampler::TrapezoidSampler(RestrictionResult res, VarTable vars, SamplerConfig cfg)
    : res_(std::move(res)), vars_(std::move(vars)), cfg_(std::move(cfg)), by_dim_(vars_.size(), -1) {
    cfg_.validate();
    check_fits(res_.trapezoid, vars_);
    const auto& intervals = res_.trapezoid.intervals();
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        by_dim_[intervals[i].var().index - 1] = static_cast<std::ptrdiff_t>(i);
    }
}

Vector TrapezoidSampler::draw(SamplerState& state) const {
    const auto& intervals = res_.trapezoid.intervals();
    Vector eta = draw_ascending(
        [&](Dimension d) -> const Interval* {
            std::ptrdiff_t i = by_dim_[d.index - 1];
            return i < 0 ? nullptr : &intervals[static_cast<std::size_t>(i)];
        },
        vars_, cfg_, state);
    return cob_apply_vector(res_.basis, eta);
}

} // namespace trapgen
