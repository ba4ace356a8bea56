#ifndef ZMOMENTS_DIRICHLET_HPP
#define ZMOMENTS_DIRICHLET_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "zmoments/numeric.hpp"

namespace zmoments {

// Evaluation of Dirichlet polynomials P(1/2 + i t) = sum_n c(n) n^{-1/2 - i t}.
// Coefficients are passed densely: coeffs[n] = c(n), coeffs[0] ignored.

cdouble dirichlet_at(std::span<const double> coeffs, double t);

// P on every point of a uniform grid. Phases advance by complex rotation and
// are re-anchored at the start of each fixed-size block.
std::vector<cdouble> dirichlet_on_grid(std::span<const double> coeffs, const UniformGrid& grid);

}  // namespace zmoments

#endif  // ZMOMENTS_DIRICHLET_HPP
