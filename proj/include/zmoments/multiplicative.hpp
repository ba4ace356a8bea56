#ifndef ZMOMENTS_MULTIPLICATIVE_HPP
#define ZMOMENTS_MULTIPLICATIVE_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace zmoments {

/// Analytic constants used by the prime-sum audits.
struct AnalyticConstants {
  static constexpr double euler_gamma = 0.57721566490153286060651209008240243;
  // Meissel-Mertens constant B1 in sum_{p<=x} 1/p = log log x + B1 + o(1).
  static constexpr double mertens_B1 = 0.26149721284764278375542683860869585;

  static double gamma_function(double x);
  static double log_gamma_function(double x);
};

/// Primes up to `limit` with smallest-prime-factor and Moebius tables.
class PrimeTable {
 public:
  explicit PrimeTable(std::uint64_t limit);

  std::uint64_t limit() const { return limit_; }
  std::span<const std::uint32_t> primes() const { return primes_; }
  bool is_prime(std::uint64_t n) const { return n >= 2 && n <= limit_ && spf_[n] == n; }
  // Smallest prime factor of n (n in [2, limit]).
  std::uint32_t smallest_factor(std::uint64_t n) const { return spf_[n]; }
  int mu(std::uint64_t n) const { return mu_[n]; }

 private:
  std::uint64_t limit_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> primes_;
  std::vector<std::int8_t> mu_;
};

/// d_k(n) for real k > 0 and 1 <= n <= limit, i.e. the Dirichlet coefficients
/// of zeta(s)^k. Index 0 is unused and holds 0.
class DivisorTable {
 public:
  DivisorTable(double k, std::vector<double> values);

  double k() const { return k_; }
  std::uint64_t limit() const { return values_.size() - 1; }
  double operator[](std::uint64_t n) const { return values_[n]; }
  std::span<const double> values() const { return values_; }

  // Flat little-endian cache: "DKTB", k (f64), N (u64), then d_k(1..N) (f64).
  void save(const std::filesystem::path& path) const;
  static DivisorTable load(const std::filesystem::path& path);

 private:
  double k_;
  std::vector<double> values_;
};

// d_k(p^a) = binomial(k + a - 1, a); independent of p.
double prime_power_coeff(double k, std::uint64_t p, unsigned a);

DivisorTable sieve_divisor(double k, std::uint64_t n_max);
DivisorTable sieve_divisor(double k, const PrimeTable& primes);

// sum_{n<=N} d_k(n)^2 / n with compensated summation.
double diagonal_sum(double k, std::uint64_t n_max);
double diagonal_sum(const DivisorTable& table, std::uint64_t n_max);

struct DiagonalAsymptotic {
  double value = 0.0;           // (log N)^{k^2} / Gamma(k^2+1) * truncated Euler product
  double log_value = 0.0;
  double euler_product = 0.0;   // prod_{p <= cutoff} of the local factors
  double log_tail_bound = 0.0;  // bound on |log| of the omitted factors p > cutoff
};

DiagonalAsymptotic diagonal_asymptotic(double k, double n_max, std::uint64_t prime_cutoff);

// Local factor (1 - 1/p)^{k^2} (1 + sum_{a>=1} d_k(p^a)^2 / p^a), in log form.
double log_diagonal_euler_factor(double k, double p);

// sum_{p <= x} 1/p.
double mertens_prime_sum(double x);
double mertens_prime_sum(const PrimeTable& primes, double x);

struct PrimeDeficit {
  double value = 0.0;      // sum_{p<=x} (1/p - p^{-1-alpha})
  double bound = 0.0;      // 1 + log(alpha log x) + gamma
  bool in_regime = true;   // alpha >= 1 / log x
};

PrimeDeficit prime_deficit_sum(double x, double alpha);
PrimeDeficit prime_deficit_sum(const PrimeTable& primes, double x, double alpha);

}  // namespace zmoments

#endif  // ZMOMENTS_MULTIPLICATIVE_HPP
