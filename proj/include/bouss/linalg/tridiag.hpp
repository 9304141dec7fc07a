#pragma once

#include <span>
#include <vector>

namespace bouss::linalg {

/// Thomas algorithm for lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i].
/// lower[0] and upper[n-1] are ignored.
std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs);

/// Periodic variant: lower[0] couples to x[n-1] and upper[n-1] to x[0]
/// (Sherman-Morrison on top of two Thomas solves). Requires n >= 3.
std::vector<double> solve_cyclic_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                             std::span<const double> upper, std::span<const double> rhs);

}  // namespace bouss::linalg
