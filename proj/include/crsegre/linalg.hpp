#pragma once

#include <vector>

#include "crsegre/series.hpp"

namespace crsegre {

/// Dense matrix of series sharing a frame. Rows of possibly different lengths
/// are rejected on construction of operations.
using SeriesMatrix = std::vector<std::vector<Series>>;
using RatMatrix = std::vector<std::vector<GRat>>;

/// Laplace-expansion determinant with subset memoisation; fine for the small
/// matrices this toolkit meets (<= 6x6).
Series det(const SeriesMatrix& m);

/// Classical adjugate: adj(M) * M = det(M) * Id.
SeriesMatrix adjugate(const SeriesMatrix& m);

/// Rank of a rational matrix by Gaussian elimination.
int rank(RatMatrix m);

/// Largest r such that some r x r minor is not the zero series (at the
/// entries' truncation order). Random rational evaluations give fast lower
/// bounds; the verdict that no larger minor survives is confirmed by exact
/// minor expansion.
int generic_rank(const SeriesMatrix& m, std::uint64_t seed);

/// Evaluate every entry at a point and return the rational matrix.
RatMatrix eval_matrix(const SeriesMatrix& m, const std::vector<GRat>& point);

/// Solve the square linear system M * x = rhs over the series ring via
/// adjugate and exact division by det(M); throws if det(M) == 0 or any
/// division is inexact.
SeriesVector solve_cramer(const SeriesMatrix& m, const SeriesVector& rhs);

/// Fraction-free determinant for matrices of exact polynomials (entries are
/// re-stamped to an order large enough that no truncation occurs).
Series bareiss_det(SeriesMatrix m);

/// Resultant of f and g with respect to one variable, via the Sylvester
/// determinant; f and g are treated as exact polynomials. The result does
/// not involve `var`.
Series resultant_in(const Series& f, const Series& g, const std::string& var);

/// Degree in a single variable.
int degree_in(const Series& f, const std::string& var);

}  // namespace crsegre
