#ifndef ZMOMENTS_CONSTRUCTION_HPP
#define ZMOMENTS_CONSTRUCTION_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "zmoments/sylvester.hpp"

namespace zmoments {

/// Parameter pack for the twisted first moment. Weights are kept in log form
/// because 20 k^3 a_l^2 overflows once a_l is a late Sylvester term.
struct ConstructionParams {
  Rational k;
  double k_value = 0.0;
  double T = 0.0;
  double theta = 0.0;
  bool desk_scale = false;
  double weight_constant = 20.0;
  double T0 = 0.0;
  double log_T = 0.0;
  double log_T0 = 0.0;
  ExponentPair exponents;
  // Index 0 of a holds the convention a_0 = k; b[0] is unused.
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> log_a;
  std::vector<double> log_b;
  std::vector<double> log_weight_A;  // log W_A[j], j >= 0
  std::vector<double> log_weight_B;  // log W_B[l], l >= 1
  std::vector<double> alpha;         // W_A[j] / log T0, +inf when out of range
  std::vector<double> beta;
  std::size_t active_A = 0;
  std::size_t active_B = 0;

  std::size_t terms() const { return a.size() - 1; }
  double weight_A(std::size_t j) const { return std::exp(log_weight_A.at(j)); }
  double weight_B(std::size_t l) const { return std::exp(log_weight_B.at(l)); }
  // floor(T0^{1/a_l}) and floor(T0^{1/b_l}).
  std::uint64_t cutoff_A(std::size_t l) const;
  std::uint64_t cutoff_B(std::size_t l) const;
};

struct BuildOptions {
  bool desk_scale = false;
  double weight_constant = 20.0;
  std::size_t sylvester_terms = kDefaultSylvesterTerms;
};

ConstructionParams build_params(const Rational& k, double T, double theta, const BuildOptions& options = {});

enum class CoefficientLabel { poly_A, poly_B, power_a, alpha_conv, beta_conv };
std::string_view to_string(CoefficientLabel label);

/// Dense non-negative coefficient vector, c[0] unused.
struct CoefficientVector {
  CoefficientLabel label = CoefficientLabel::poly_A;
  std::size_t ell = 0;
  std::vector<double> c;

  std::uint64_t limit() const { return c.empty() ? 0 : c.size() - 1; }
  double operator[](std::uint64_t n) const { return n < c.size() ? c[n] : 0.0; }
  std::span<const double> values() const { return c; }
  std::size_t nonzero() const;
  void write_csv(std::ostream& out) const;
};

// Entry cap for dense vectors (doubles); exceeding it raises ResourceLimit.
inline constexpr std::uint64_t kDefaultCoefficientCap = 40'000'000;

CoefficientVector trivial_vector(CoefficientLabel label, std::size_t ell);
CoefficientVector build_poly_A(const ConstructionParams& params, std::size_t ell);
CoefficientVector build_poly_B(const ConstructionParams& params, std::size_t ell);

// Dirichlet convolution of x and y restricted to n <= limit.
std::vector<double> truncated_convolution(std::span<const double> x, std::span<const double> y,
                                          std::uint64_t limit);

// (sum_{n <= T0^{1/a}} d_{k/a}(n) n^{-s})^a as a coefficient vector on n <= T0.
CoefficientVector power_truncated(double k, unsigned a, double T0,
                                  std::uint64_t cap = kDefaultCoefficientCap);

struct AlphaBeta {
  CoefficientVector alpha;
  CoefficientVector beta;
};

// alpha = [n <= T] * prod A_l, beta = prod B_l over active l. The optional
// limits restrict how many active polynomials are multiplied in.
AlphaBeta build_alpha_beta(const ConstructionParams& params, std::optional<std::size_t> max_active_A = {},
                           std::optional<std::size_t> max_active_B = {},
                           std::uint64_t cap = kDefaultCoefficientCap);

// f(p) = sum_{j>=0} sum_{l>=1} k^2/(a_j b_l) p^{-alpha_j - beta_l}.
double f_at_prime(const ConstructionParams& params, std::uint64_t p);
// Multiplicative extension to squarefree n; InvalidArgument otherwise.
double f_squarefree(const ConstructionParams& params, std::uint64_t n);

}  // namespace zmoments

#endif  // ZMOMENTS_CONSTRUCTION_HPP
