#include <filesystem>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "zmoments/errors.hpp"
#include "zmoments/multiplicative.hpp"

using namespace zmoments;

TEST_CASE("d_2 is the divisor count and d_1 is 1") {
  const auto d2 = sieve_divisor(2.0, 100);
  for (std::uint64_t n = 1; n <= 100; ++n) {
    int count = 0;
    for (std::uint64_t m = 1; m <= n; ++m) count += n % m == 0;
    CHECK(d2[n] == doctest::Approx(count));
  }
  const auto d1 = sieve_divisor(1.0, 50);
  for (std::uint64_t n = 1; n <= 50; ++n) CHECK(d1[n] == doctest::Approx(1.0));
}

TEST_CASE("sieve matches the log-derivative recursion for real k") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> kd(0.05, 4.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double k = kd(rng);
    const auto table = sieve_divisor(k, 300);
    const auto ref = oracle::divisor_by_log_derivative(k, 300);
    for (std::uint64_t n = 1; n <= 300; ++n) CHECK(table[n] == doctest::Approx(ref[n]).epsilon(1e-11));
  }
}

TEST_CASE("prime power coefficients are binomials") {
  CHECK(prime_power_coeff(0.5, 2, 2) == doctest::Approx(0.375));  // (1/2)(3/2)/2
  CHECK(prime_power_coeff(3.0, 5, 2) == doctest::Approx(6.0));
}

TEST_CASE("prime table") {
  PrimeTable pt(100);
  CHECK(pt.primes().size() == 25);
  CHECK(pt.mu(30) == -1);
  CHECK(pt.mu(12) == 0);
  CHECK(pt.smallest_factor(91) == 7);
}

TEST_CASE("divisor cache round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "zmoments_unit_cache";
  std::filesystem::create_directories(dir);
  const auto path = dir / "dk.dktb";
  const auto table = sieve_divisor(1.25, 500);
  table.save(path);
  const auto back = DivisorTable::load(path);
  CHECK(back.k() == 1.25);
  REQUIRE(back.limit() == 500);
  for (std::uint64_t n = 1; n <= 500; ++n) CHECK(back[n] == table[n]);
  std::filesystem::remove_all(dir);
}

TEST_CASE("diagonal sum for k = 1 is the harmonic sum") {
  double h = 0.0;
  for (int n = 1; n <= 1000; ++n) h += 1.0 / n;
  CHECK(diagonal_sum(1.0, 1000) == doctest::Approx(h).epsilon(1e-14));
}

TEST_CASE("Mertens sum is close to log log x + B1") {
  const double x = 1e6;
  CHECK(mertens_prime_sum(x) == doctest::Approx(std::log(std::log(x)) + AnalyticConstants::mertens_B1).epsilon(1e-3));
}

TEST_CASE("prime deficit stays below its bound in regime") {
  const auto d = prime_deficit_sum(1e5, 0.5);
  CHECK(d.in_regime);
  CHECK(d.value <= d.bound);
  CHECK(d.value > 0.0);
}

TEST_CASE("invalid divisor input") {
  CHECK_THROWS_AS(sieve_divisor(-1.0, 10), InvalidArgument);
  CHECK_THROWS_AS(sieve_divisor(1.0, 0), InvalidArgument);
}
