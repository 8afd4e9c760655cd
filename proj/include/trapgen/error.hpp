// Copyright (c) trapgen contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace trapgen {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input that violates a documented precondition (missing dimension, wrong type, ...).
struct MalformedInput : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg), line(line), column(column) {}
    std::size_t line;
    std::size_t column;
};

/// (m | E) has no solution: gcd(m, coefficients) does not divide the constant.
struct UnsolvableDivisibility : Error {
    using Error::Error;
};

/// A vector outside span(sigma) was handed to the inverse of a change of basis.
struct SpanViolation : Error {
    using Error::Error;
};

/// The sampler met an interval with no admissible value.
struct BacktrackViolation : Error {
    using Error::Error;
};

struct UnsatisfiableComplement : Error {
    using Error::Error;
};

/// Broken internal invariant. Reaching this is a bug.
struct InternalError : Error {
    using Error::Error;
};

} // namespace trapgen
