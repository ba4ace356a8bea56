#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "zmoments/construction.hpp"
#include "zmoments/errors.hpp"
#include "zmoments/multiplicative.hpp"

using namespace zmoments;

namespace {
ConstructionParams desk(const char* k, double T) {
  BuildOptions o;
  o.desk_scale = true;
  return build_params(parse_rational(k), T, 0.3, o);
}
}  // namespace

TEST_CASE("parameters at k = 3/2, T = 5000") {
  const auto p = desk("3/2", 5000.0);
  CHECK(p.T0 == doctest::Approx(std::pow(5000.0, 0.7)));
  CHECK(p.a[0] == 1.5);
  CHECK(p.a[1] == 4.0);
  CHECK(p.b[1] == 2.0);
  CHECK(p.active_A == 1);
  CHECK(p.active_B == 3);
  CHECK(p.log_weight_A[0] == doctest::Approx(std::log(20.0 * 1.5 * 1.5 * 1.5)));
  CHECK(p.log_weight_B[1] == doctest::Approx(std::log(20.0 * 1.5 * 1.5 * 1.5 * 4.0)));
  CHECK(p.cutoff_A(1) == static_cast<std::uint64_t>(std::floor(std::pow(p.T0, 0.25))));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(desk("1", 5000.0), InvalidArgument);
  CHECK_THROWS_AS(desk("1.5", 50.0), InvalidArgument);
  CHECK_THROWS_AS(build_params(Rational(3, 2), 5000.0, 0.3), InvalidArgument);  // no desk flag
  CHECK_NOTHROW(build_params(Rational(3, 2), 5000.0, 0.05));
}

TEST_CASE("huge k keeps log weights finite") {
  const auto p = desk("5", 1e4);
  for (double w : p.log_weight_A) CHECK(std::isfinite(w));
  for (std::size_t l = 1; l < p.log_weight_B.size(); ++l) CHECK(std::isfinite(p.log_weight_B[l]));
}

TEST_CASE("polynomial coefficients are d_{k/a}") {
  const auto p = desk("3/2", 5000.0);
  const auto A = build_poly_A(p, 1);
  const auto ref = oracle::divisor_by_log_derivative(1.5 / 4.0, A.limit());
  for (std::uint64_t n = 1; n <= A.limit(); ++n) CHECK(A[n] == doctest::Approx(ref[n]).epsilon(1e-12));
}

TEST_CASE("truncated convolution against brute force") {
  std::vector<double> x(40), y(30);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& v : x) v = u(rng);
  for (auto& v : y) v = u(rng);
  x[0] = y[0] = 0.0;
  const auto z = truncated_convolution(x, y, 500);
  for (std::uint64_t n = 1; n <= 500; ++n) {
    double ref = 0.0;
    for (std::uint64_t d = 1; d < x.size(); ++d)
      if (n % d == 0 && n / d < y.size()) ref += x[d] * y[n / d];
    CHECK(z[n] == doctest::Approx(ref).epsilon(1e-13));
  }
}

TEST_CASE("truncated power of a single polynomial") {
  // (1 + 2^{-s})^2 = 1 + 2 * 2^{-s} + 4^{-s} for d_{k/a}(2) = k/a = 1
  const auto v = power_truncated(2.0, 2, 4.0);
  CHECK(v[1] == doctest::Approx(1.0));
  CHECK(v[2] == doctest::Approx(2.0));
  CHECK(v[4] == doctest::Approx(1.0));
}

TEST_CASE("alpha and beta vectors are non-negative with the expected support") {
  const auto p = desk("3/2", 5000.0);
  const auto ab = build_alpha_beta(p);
  double support = std::floor(p.T);
  for (std::size_t l = 1; l <= p.active_A; ++l) support *= static_cast<double>(p.cutoff_A(l));
  CHECK(static_cast<double>(ab.alpha.limit()) <= support);
  CHECK(static_cast<double>(ab.alpha.limit()) <= p.T * p.T);
  CHECK(ab.alpha[1] == 1.0);
  CHECK(ab.beta[1] == 1.0);
  for (double c : ab.beta.values()) CHECK(c >= 0.0);
}

TEST_CASE("coefficient cap raises a resource limit") {
  CHECK_THROWS_AS(power_truncated(2.0, 2, 1e6, 1000), ResourceLimit);
}

TEST_CASE("f is multiplicative on squarefree n and bounded by k^2") {
  const auto p = desk("3/2", 5000.0);
  for (std::uint64_t q : {2u, 3u, 5u, 7u, 11u}) CHECK(f_at_prime(p, q) <= 2.25);
  CHECK(f_squarefree(p, 30) == doctest::Approx(f_at_prime(p, 2) * f_at_prime(p, 3) * f_at_prime(p, 5)));
  CHECK_THROWS_AS(f_squarefree(p, 12), InvalidArgument);
}
