#include "zmoments/multiplicative.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "zmoments/errors.hpp"
#include "zmoments/numeric.hpp"

namespace zmoments {

double AnalyticConstants::gamma_function(double x) { return std::tgamma(x); }
double AnalyticConstants::log_gamma_function(double x) { return std::lgamma(x); }

PrimeTable::PrimeTable(std::uint64_t limit) : limit_(limit) {
  if (limit >= (std::uint64_t{1} << 32)) throw ResourceLimit("prime table limit exceeds 2^32");
  spf_.assign(limit + 1, 0);
  mu_.assign(limit + 1, 0);
  if (limit >= 1) mu_[1] = 1;
  // Linear sieve: every composite is struck exactly once by its smallest prime.
  for (std::uint64_t n = 2; n <= limit; ++n) {
    if (spf_[n] == 0) {
      spf_[n] = static_cast<std::uint32_t>(n);
      primes_.push_back(static_cast<std::uint32_t>(n));
      mu_[n] = -1;
    }
    for (std::uint32_t p : primes_) {
      const std::uint64_t m = n * p;
      if (p > spf_[n] || m > limit) break;
      spf_[m] = p;
      mu_[m] = (p == spf_[n]) ? 0 : static_cast<std::int8_t>(-mu_[n]);
    }
  }
}

DivisorTable::DivisorTable(double k, std::vector<double> values)
    : k_(k), values_(std::move(values)) {
  if (values_.size() < 2) throw InvalidArgument("divisor table needs at least one entry");
}

double prime_power_coeff(double k, std::uint64_t /*p*/, unsigned a) {
  double c = 1.0;
  for (unsigned i = 0; i < a; ++i) c *= (k + i) / (i + 1.0);
  return c;
}

DivisorTable sieve_divisor(double k, std::uint64_t n_max) {
  if (n_max == 0) throw InvalidArgument("sieve_divisor: N must be >= 1");
  return sieve_divisor(k, PrimeTable(n_max));
}

DivisorTable sieve_divisor(double k, const PrimeTable& primes) {
  if (!(k > 0.0)) throw InvalidArgument("sieve_divisor: k must be positive");
  const std::uint64_t n_max = primes.limit();
  if (n_max == 0) throw InvalidArgument("sieve_divisor: N must be >= 1");
  std::vector<double> coeff(65);
  for (unsigned a = 0; a < coeff.size(); ++a) coeff[a] = prime_power_coeff(k, 2, a);

  std::vector<double> values(n_max + 1, 0.0);
  values[1] = 1.0;
  for (std::uint64_t n = 2; n <= n_max; ++n) {
    const std::uint64_t p = primes.smallest_factor(n);
    std::uint64_t m = n / p;
    unsigned e = 1;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    values[n] = values[m] * coeff[e];
  }
  return DivisorTable(k, std::move(values));
}

namespace {

constexpr char kMagic[4] = {'D', 'K', 'T', 'B'};
static_assert(std::endian::native == std::endian::little,
              "divisor cache format assumes a little-endian host");

}  // namespace

void DivisorTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot open divisor cache for writing: " + path.string());
  const std::uint64_t n = limit();
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(&k_), sizeof(double));
  out.write(reinterpret_cast<const char*>(&n), sizeof(std::uint64_t));
  out.write(reinterpret_cast<const char*>(values_.data() + 1),
            static_cast<std::streamsize>(n * sizeof(double)));
  if (!out) throw InvalidArgument("failed writing divisor cache: " + path.string());
}

DivisorTable DivisorTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open divisor cache: " + path.string());
  char magic[4];
  double k = 0.0;
  std::uint64_t n = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&k), sizeof(double));
  in.read(reinterpret_cast<char*>(&n), sizeof(std::uint64_t));
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw InvalidArgument("not a divisor cache file: " + path.string());
  if (n == 0 || n > (std::uint64_t{1} << 32)) throw InvalidArgument("corrupt divisor cache size");
  std::vector<double> values(n + 1, 0.0);
  in.read(reinterpret_cast<char*>(values.data() + 1), static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw InvalidArgument("truncated divisor cache: " + path.string());
  return DivisorTable(k, std::move(values));
}

double diagonal_sum(double k, std::uint64_t n_max) {
  if (n_max == 0) throw InvalidArgument("diagonal_sum: N must be >= 1");
  return diagonal_sum(sieve_divisor(k, n_max), n_max);
}

double diagonal_sum(const DivisorTable& table, std::uint64_t n_max) {
  n_max = std::min(n_max, table.limit());
  KahanSum acc;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    const double d = table[n];
    acc += d * d / static_cast<double>(n);
  }
  return acc.value();
}

double log_diagonal_euler_factor(double k, double p) {
  const double x = 1.0 / p;
  KahanSum series;
  double coeff = 1.0;  // d_k(p^a)
  double xa = 1.0;
  for (unsigned a = 1; a < 10000; ++a) {
    coeff *= (k + a - 1.0) / a;
    xa *= x;
    const double term = coeff * coeff * xa;
    series += term;
    if (term < 1e-19 * series.value() && a > 2) break;
  }
  return k * k * std::log1p(-x) + std::log1p(series.value());
}

DiagonalAsymptotic diagonal_asymptotic(double k, double n_max, std::uint64_t prime_cutoff) {
  if (prime_cutoff < 2) throw InvalidArgument("diagonal_asymptotic: prime cutoff must be >= 2");
  if (!(n_max > 1.0)) throw InvalidArgument("diagonal_asymptotic: N must exceed 1");
  const PrimeTable primes(prime_cutoff);
  KahanSum log_product;
  double tail_constant = 0.0;
  for (std::uint32_t p : primes.primes()) {
    const double lf = log_diagonal_euler_factor(k, p);
    log_product += lf;
    if (2 * static_cast<std::uint64_t>(p) > prime_cutoff || primes.primes().size() < 8)
      tail_constant = std::max(tail_constant, static_cast<double>(p) * p * std::abs(lf));
  }
  DiagonalAsymptotic out;
  const double k2 = k * k;
  // sum_{p > c} C/p^2 < C/c, with C doubled over the observed upper-half maximum.
  out.log_tail_bound = 2.0 * tail_constant / static_cast<double>(prime_cutoff);
  out.euler_product = std::exp(log_product.value());
  out.log_value = k2 * std::log(std::log(n_max)) - std::lgamma(k2 + 1.0) + log_product.value();
  out.value = std::exp(out.log_value);
  return out;
}

double mertens_prime_sum(double x) {
  if (!(x >= 2.0)) throw InvalidArgument("mertens_prime_sum: x must be >= 2");
  return mertens_prime_sum(PrimeTable(static_cast<std::uint64_t>(std::floor(x))), x);
}

double mertens_prime_sum(const PrimeTable& primes, double x) {
  KahanSum acc;
  for (std::uint32_t p : primes.primes()) {
    if (p > x) break;
    acc += 1.0 / p;
  }
  return acc.value();
}

PrimeDeficit prime_deficit_sum(double x, double alpha) {
  if (!(x >= 2.0)) throw InvalidArgument("prime_deficit_sum: x must be >= 2");
  return prime_deficit_sum(PrimeTable(static_cast<std::uint64_t>(std::floor(x))), x, alpha);
}

PrimeDeficit prime_deficit_sum(const PrimeTable& primes, double x, double alpha) {
  if (!(alpha > 0.0)) throw InvalidArgument("prime_deficit_sum: alpha must be positive");
  KahanSum acc;
  for (std::uint32_t p : primes.primes()) {
    if (p > x) break;
    // 1/p - p^{-1-alpha} = -expm1(-alpha log p) / p
    acc += -std::expm1(-alpha * std::log(static_cast<double>(p))) / p;
  }
  PrimeDeficit out;
  out.value = acc.value();
  const double logx = std::log(x);
  out.bound = 1.0 + std::log(alpha * logx) + AnalyticConstants::euler_gamma;
  out.in_regime = alpha * logx >= 1.0;
  return out;
}

}  // namespace zmoments
