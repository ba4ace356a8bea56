#include "zmoments/construction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "zmoments/errors.hpp"
#include "zmoments/multiplicative.hpp"
#include "zmoments/numeric.hpp"

namespace zmoments {

namespace {

constexpr double kLogUnderflow = -745.0;

std::uint64_t checked_limit(double bound, std::uint64_t cap, const char* what) {
  if (!(bound < static_cast<double>(cap)))
    throw ResourceLimit(std::string(what) + ": support " + std::to_string(bound) + " exceeds the entry cap " +
                        std::to_string(cap) + "; use a smaller T");
  return static_cast<std::uint64_t>(bound);
}

std::vector<double> divisor_coefficients(double kappa, std::uint64_t n) {
  const DivisorTable table = sieve_divisor(kappa, n);
  const auto values = table.values();
  return {values.begin(), values.end()};
}

}  // namespace

std::uint64_t ConstructionParams::cutoff_A(std::size_t l) const {
  if (l == 0 || l > active_A) return 1;
  return root_floor_log(log_T0, a.at(l));
}

std::uint64_t ConstructionParams::cutoff_B(std::size_t l) const {
  if (l == 0 || l > active_B) return 1;
  return root_floor_log(log_T0, b.at(l));
}

ConstructionParams build_params(const Rational& k, double T, double theta, const BuildOptions& options) {
  if (k <= 1) throw InvalidArgument("build_params: k must exceed 1");
  if (!(T >= 100.0)) throw InvalidArgument("build_params: T must be at least 100");
  if (!(theta > 0.0 && theta < 1.0 / 3.0)) throw InvalidArgument("build_params: theta must lie in (0, 1/3)");
  if (theta >= 0.1 && !options.desk_scale)
    throw InvalidArgument("build_params: theta >= 1/10 requires the desk-scale flag");
  if (!(options.weight_constant > 0.0)) throw InvalidArgument("build_params: weight constant must be positive");

  ConstructionParams p;
  p.k = k;
  p.k_value = to_double(k);
  p.T = T;
  p.theta = theta;
  p.desk_scale = options.desk_scale;
  p.weight_constant = options.weight_constant;
  p.log_T = std::log(T);
  p.log_T0 = (1.0 - theta) * p.log_T;
  p.T0 = std::pow(T, 1.0 - theta);
  p.exponents = construction_exponents(k, options.sylvester_terms);

  const std::size_t n = options.sylvester_terms;
  p.a.assign(n + 1, 0.0);
  p.b.assign(n + 1, 0.0);
  p.log_a.assign(n + 1, 0.0);
  p.log_b.assign(n + 1, 0.0);
  p.a[0] = p.k_value;
  p.log_a[0] = std::log(p.k_value);
  for (std::size_t l = 1; l <= n; ++l) {
    p.a[l] = p.exponents.a.term_value(l);
    p.b[l] = p.exponents.b.term_value(l);
    p.log_a[l] = p.exponents.a.log_term(l);
    p.log_b[l] = p.exponents.b.log_term(l);
  }

  const double log_base = std::log(options.weight_constant) + 3.0 * std::log(p.k_value);
  const double log_log_T0 = std::log(p.log_T0);
  p.log_weight_A.assign(n + 1, 0.0);
  p.log_weight_B.assign(n + 1, -std::numeric_limits<double>::infinity());
  p.alpha.assign(n + 1, 0.0);
  p.beta.assign(n + 1, 0.0);
  for (std::size_t j = 0; j <= n; ++j) {
    // W_A[0] = 20k^3 carries no a_0^2 factor; a_0 = k only enters f(p).
    p.log_weight_A[j] = j == 0 ? log_base : log_base + 2.0 * p.log_a[j];
    p.alpha[j] = std::exp(p.log_weight_A[j] - log_log_T0);
  }
  for (std::size_t l = 1; l <= n; ++l) {
    p.log_weight_B[l] = log_base + 2.0 * p.log_b[l];
    p.beta[l] = std::exp(p.log_weight_B[l] - log_log_T0);
  }
  p.active_A = active_length_log(p.log_T0, p.exponents.a);
  p.active_B = active_length_log(p.log_T0, p.exponents.b);
  return p;
}

std::string_view to_string(CoefficientLabel label) {
  switch (label) {
    case CoefficientLabel::poly_A: return "poly_A";
    case CoefficientLabel::poly_B: return "poly_B";
    case CoefficientLabel::power_a: return "power_a";
    case CoefficientLabel::alpha_conv: return "alpha_conv";
    case CoefficientLabel::beta_conv: return "beta_conv";
  }
  return "unknown";
}

std::size_t CoefficientVector::nonzero() const {
  std::size_t count = 0;
  for (std::size_t n = 1; n < c.size(); ++n) count += c[n] != 0.0;
  return count;
}

void CoefficientVector::write_csv(std::ostream& out) const {
  out << "n,c\n";
  out.precision(17);
  for (std::size_t n = 1; n < c.size(); ++n)
    if (c[n] != 0.0) out << n << ',' << c[n] << '\n';
}

CoefficientVector trivial_vector(CoefficientLabel label, std::size_t ell) {
  return CoefficientVector{label, ell, {0.0, 1.0}};
}

CoefficientVector build_poly_A(const ConstructionParams& params, std::size_t ell) {
  if (ell == 0) throw InvalidArgument("build_poly_A: ell starts at 1");
  if (ell > params.active_A) return trivial_vector(CoefficientLabel::poly_A, ell);
  return {CoefficientLabel::poly_A, ell,
          divisor_coefficients(params.k_value / params.a[ell], params.cutoff_A(ell))};
}

CoefficientVector build_poly_B(const ConstructionParams& params, std::size_t ell) {
  if (ell == 0) throw InvalidArgument("build_poly_B: ell starts at 1");
  if (ell > params.active_B) return trivial_vector(CoefficientLabel::poly_B, ell);
  return {CoefficientLabel::poly_B, ell,
          divisor_coefficients(params.k_value / params.b[ell], params.cutoff_B(ell))};
}

std::vector<double> truncated_convolution(std::span<const double> x, std::span<const double> y,
                                          std::uint64_t limit) {
  if (x.size() < 2 || y.size() < 2) return {0.0};
  const double full = static_cast<double>(x.size() - 1) * static_cast<double>(y.size() - 1);
  const auto size = static_cast<std::uint64_t>(std::min(static_cast<double>(limit), full));
  std::vector<double> out(size + 1, 0.0);
  const std::uint64_t ymax = y.size() - 1;
  for (std::uint64_t i = 1; i < x.size() && i <= size; ++i) {
    if (x[i] == 0.0) continue;
    const std::uint64_t jmax = std::min(ymax, size / i);
    for (std::uint64_t j = 1; j <= jmax; ++j) out[i * j] += x[i] * y[j];
  }
  return out;
}

CoefficientVector power_truncated(double k, unsigned a, double T0, std::uint64_t cap) {
  if (a == 0) throw InvalidArgument("power_truncated: a must be at least 1");
  if (!(T0 >= 1.0)) throw InvalidArgument("power_truncated: T0 must be at least 1");
  const std::uint64_t limit = checked_limit(std::floor(T0 * (1.0 + 1e-14)), cap, "power_truncated");
  const std::uint64_t m = root_floor(T0, static_cast<double>(a));
  const std::vector<double> base = divisor_coefficients(k / a, m);
  std::vector<double> acc = base;
  for (unsigned i = 1; i < a; ++i) acc = truncated_convolution(acc, base, limit);
  return {CoefficientLabel::power_a, a, std::move(acc)};
}

AlphaBeta build_alpha_beta(const ConstructionParams& params, std::optional<std::size_t> max_active_A,
                           std::optional<std::size_t> max_active_B, std::uint64_t cap) {
  const std::size_t la = std::min(params.active_A, max_active_A.value_or(params.active_A));
  const std::size_t lb = std::min(params.active_B, max_active_B.value_or(params.active_B));

  double alpha_bound = std::floor(params.T);
  for (std::size_t l = 1; l <= la; ++l) alpha_bound *= static_cast<double>(params.cutoff_A(l));
  const std::uint64_t alpha_limit = checked_limit(alpha_bound, cap, "build_alpha_beta");

  AlphaBeta out;
  out.alpha.label = CoefficientLabel::alpha_conv;
  out.alpha.c.assign(static_cast<std::size_t>(std::floor(params.T)) + 1, 1.0);
  out.alpha.c[0] = 0.0;
  for (std::size_t l = 1; l <= la; ++l)
    out.alpha.c = truncated_convolution(out.alpha.c, build_poly_A(params, l).c, alpha_limit);

  out.beta = trivial_vector(CoefficientLabel::beta_conv, 0);
  for (std::size_t l = 1; l <= lb; ++l)
    out.beta.c = truncated_convolution(out.beta.c, build_poly_B(params, l).c, cap);
  return out;
}

double f_at_prime(const ConstructionParams& params, std::uint64_t p) {
  if (p < 2) throw InvalidArgument("f_at_prime: p must be a prime");
  const double log_p = std::log(static_cast<double>(p));
  const double log_k2 = 2.0 * std::log(params.k_value);
  KahanSum acc;
  for (std::size_t j = 0; j < params.a.size(); ++j) {
    if (-(params.alpha[j] + params.beta[1]) * log_p < kLogUnderflow) break;
    for (std::size_t l = 1; l < params.b.size(); ++l) {
      const double log_term =
          log_k2 - params.log_a[j] - params.log_b[l] - (params.alpha[j] + params.beta[l]) * log_p;
      if (log_term < kLogUnderflow) break;
      acc += std::exp(log_term);
    }
  }
  return acc.value();
}

double f_squarefree(const ConstructionParams& params, std::uint64_t n) {
  if (n == 0) throw InvalidArgument("f_squarefree: n must be positive");
  double product = 1.0;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) throw InvalidArgument("f_squarefree: n is not squarefree");
    product *= f_at_prime(params, p);
  }
  if (n > 1) product *= f_at_prime(params, n);
  return product;
}

}  // namespace zmoments
