// Copyright (c) trapgen contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Randomized, type-consistent sampling of trapezoids and their complements.
//
// Random source: std::mt19937_64 seeded with SamplerConfig::seed. Its output
// sequence is fixed by the C++ standard; integer ranges are drawn by masked
// rejection on that stream, so a seed reproduces the same vectors on every
// conforming platform.
#pragma once

#include "trapgen/core.hpp"
#include "trapgen/restrictor.hpp"

#include <cstdint>
#include <random>

namespace trapgen {

struct SamplerConfig {
    std::uint64_t seed = 0;
    /// Window used on an unbounded side: [lo, lo + W], [hi - W, hi], or [-W, W].
    Integer unbounded_width = 1000;
    /// Rational draws use the lattice lo + (hi - lo) * k / G.
    Integer open_granularity = Integer(1) << 20;

    /// Throws MalformedInput if W < 1 or G < 2.
    void validate() const;
};

/// Explicit random state; one per sampling stream.
class SamplerState {
public:
    explicit SamplerState(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform on [0, n) for n >= 1.
    std::uint64_t below(std::uint64_t n);
    /// Uniform on [lo, hi]; lo <= hi.
    Integer uniform(const Integer& lo, const Integer& hi);

private:
    std::mt19937_64 engine_;
};

/// Draws a vector of vars.size() dimensions, ascending, evaluating each
/// interval at the values already drawn. Throws BacktrackViolation when an
/// interval evaluates empty (never for restricted trapezoids).
Vector sample_trapezoid(const Trapezoid& t, const VarTable& vars, const SamplerConfig& cfg, SamplerState& state);

/// Samples the restricted trapezoid and maps the draw back through the basis.
Vector sample_original(const RestrictionResult& res, const VarTable& vars, const SamplerConfig& cfg,
                       SamplerState& state);

/// Draws a vector that falsifies one uniformly chosen bound of `t`.
/// Throws UnsatisfiableComplement for the empty trapezoid.
Vector sample_complement(const Trapezoid& t, const VarTable& vars, const SamplerConfig& cfg, SamplerState& state);

/// Precomputed form of a restricted trapezoid for repeated sampling. Produces
/// exactly the same stream as sample_original for the same state.
class TrapezoidSampler {
public:
    TrapezoidSampler(RestrictionResult res, VarTable vars, SamplerConfig cfg);

    Vector draw(SamplerState& state) const;

    const RestrictionResult& restriction() const { return res_; }

private:
    RestrictionResult res_;
    VarTable vars_;
    SamplerConfig cfg_;
    std::vector<std::ptrdiff_t> by_dim_; // interval index for dimension d at d-1, -1 when unbound
};

} // namespace trapgen
