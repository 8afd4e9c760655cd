// Copyright (c) trapgen contributors.
// SPDX-License-Identifier: Apache-2.0
//
// S-expression text format for problems, regions and vectors.
//
//   problem := decl*
//   decl    := (vars var+) | (assert formula) | (reference binding+)
//   var     := (name int) | (name rat)
//   formula := (and formula+) | (or formula+) | (not formula) | atom
//   atom    := (op poly poly)            op in = < <= > >=
//   poly    := lit | name | (+ poly+) | (- poly poly) | (- poly) | (* lit poly)
//   binding := (name lit)
//   lit     := p | -p | p/q
//
//   region  := (region + (bound*)) | (region - (bound*))
//   bound   := (op name poly)            the bounded variable comes first
//
// `;` starts a comment that runs to the end of the line.
#pragma once

#include "trapgen/core.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace trapgen {

struct Problem {
    VarTable vars;
    Formula formula;
    std::optional<Vector> reference;
};

/// Throws ParseError (with line and column) on syntax errors, undeclared or
/// duplicate variables, integer variables declared after rational ones,
/// partial or type-inconsistent reference vectors.
Problem parse_problem(std::string_view text);

/// Parses the output of render_region back into a region over `vars`.
Region parse_region(std::string_view text, const VarTable& vars);

/// Parses one render_vector line.
Vector parse_vector(std::string_view line, const VarTable& vars);

std::string render_polynomial(const Polynomial& p, const VarTable& vars);
std::string render_bound(const VariableBound& b, const VarTable& vars);
std::string render_region(const Region& r, const VarTable& vars);
std::string render_formula(const Formula& f, const VarTable& vars);
/// Values in ascending dimension, space separated; integers bare, rationals p/q.
std::string render_vector(const Vector& v);
std::string render_problem(const Problem& p);

} // namespace trapgen
