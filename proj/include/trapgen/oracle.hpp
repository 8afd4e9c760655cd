// Copyright (c) trapgen contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Brute-force checkers over finite grids: generalization invariants, span
// coverage of a change of basis, and a naive solver that produces reference
// vectors.
#pragma once

#include "trapgen/core.hpp"
#include "trapgen/restrictor.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace trapgen {

/// Box [lo, hi] per dimension. Integer dimensions take every integer in the
/// box, rational dimensions every multiple of 1/denom.
struct GridSpec {
    std::int64_t lo = -8;
    std::int64_t hi = 8;
    std::int64_t denom = 2;

    void validate() const;
};

/// Indexable cross product. Points are ordered lexicographically with
/// dimension 1 most significant.
class Grid {
public:
    Grid(const GridSpec& spec, const VarTable& vars);

    std::uint64_t size() const { return size_; }
    Vector point(std::uint64_t index) const;

    /// Calls fn on points [begin, end) in order; stops early when fn returns false.
    void for_each(std::uint64_t begin, std::uint64_t end, const std::function<bool(const Vector&)>& fn) const;

    // Scaled coordinates: value = k / denom.
    const GridSpec& spec() const { return spec_; }
    std::int64_t scaled_lo(std::size_t i) const { return lo_[i]; }
    std::int64_t scaled_step(std::size_t i) const { return step_[i]; }
    std::uint64_t extent(std::size_t i) const { return extent_[i]; }
    std::size_t dims() const { return extent_.size(); }

private:
    GridSpec spec_;
    std::vector<std::int64_t> lo_;
    std::vector<std::int64_t> step_;
    std::vector<std::uint64_t> extent_;
    std::uint64_t size_ = 1;
};

std::vector<Vector> grid_points(const GridSpec& spec, const VarTable& vars);

struct InvariantReport {
    bool inv1_ok = false;
    bool reference_satisfies = false;  // F[v]: models were checked if true, countermodels if false
    std::vector<Vector> inv2_violations; // first violations in grid order, capped
    std::uint64_t violation_count = 0;
    std::uint64_t points_checked = 0;

    bool passed() const { return inv1_ok && violation_count == 0; }
    friend bool operator==(const InvariantReport&, const InvariantReport&) = default;
};

struct CheckOptions {
    std::size_t max_violations = 10;
    /// Grid partitions, each checked on its own thread; merged in grid order.
    unsigned partitions = 1;
    /// Evaluate grid points with scaled 64-bit integers where that is exact.
    bool fast_eval = true;
};

InvariantReport check_invariants(const Formula& f, const Vector& v, const Region& r, const VarTable& vars,
                                 const GridSpec& spec, const CheckOptions& opts = {});

struct SpanReport {
    bool divisible_ok = false;  // m divides every coefficient of sigma(E)
    std::uint64_t points_checked = 0;
    std::uint64_t solutions = 0;
    std::uint64_t missed = 0;
    std::vector<Vector> missed_examples; // capped at 10

    bool passed() const { return divisible_ok && missed == 0; }
};

/// Every variable of `vars` must be an integer variable.
SpanReport check_divisibility_span(const DivisibilityConstraint& dc, const ChangeOfBasis& sigma,
                                   const VarTable& vars, const GridSpec& spec);

/// `budget` random grid probes, then a full scan in grid order. Returns the
/// first point satisfying f, if any.
std::optional<Vector> naive_solve(const Formula& f, const VarTable& vars, const GridSpec& spec,
                                  std::uint64_t budget, std::uint64_t seed = 0);

} // namespace trapgen
