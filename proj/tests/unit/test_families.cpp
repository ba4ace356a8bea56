#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "zmoments/errors.hpp"
#include "zmoments/families.hpp"
#include "zmoments/sylvester.hpp"

using namespace zmoments;

TEST_CASE("characters mod 3 and 7") {
  const CharacterTable t3(3);
  CHECK(t3.count() == 2);
  // the non-principal character is the Legendre symbol
  CHECK(t3.value(1, 1).real() == doctest::Approx(1.0));
  CHECK(t3.value(1, 2).real() == doctest::Approx(-1.0));
  CHECK(t3.value(1, 3) == cdouble(0.0, 0.0));
  const CharacterTable t7(7);
  for (std::uint64_t j = 1; j < 6; ++j) {
    cdouble s = 0.0;
    for (std::uint64_t n = 1; n <= 6; ++n) s += t7.value(j, n);
    CHECK(std::abs(s) < 1e-12);
  }
}

TEST_CASE("character of the generator mod 11 has order dividing 10") {
  const CharacterTable t(11);
  for (std::uint64_t j = 0; j < 10; ++j) {
    const std::int64_t e = t.exponent(j, t.generator());
    CHECK((e * 10) % 10 == 0);
    CHECK(e == static_cast<std::int64_t>(j));
  }
}

TEST_CASE("orthogonality is exact for prime moduli below 60") {
  for (std::uint64_t q = 3; q < 60; ++q) {
    if (!is_prime_u64(q)) continue;
    const CharacterTable t(q);
    for (std::uint64_t i = 0; i < q - 1; ++i)
      for (std::uint64_t j = 0; j < q - 1; ++j) CHECK(t.orthogonal(i, j));
  }
}

TEST_CASE("composite moduli are rejected") {
  CHECK_THROWS_AS(CharacterTable(15), InvalidArgument);
  CHECK_THROWS_AS(I_q(221, Rational(3, 2)), InvalidArgument);
  CHECK_THROWS_AS(I_q(10007, Rational(3, 2)), ResourceLimit);
}

TEST_CASE("Hurwitz zeta at 1/2") {
  // zeta(1/2, 1) = zeta(1/2) and zeta(1/2, 1/2) = (sqrt 2 - 1) zeta(1/2)
  const double z = -1.4603545088095868;
  CHECK(hurwitz_half(1.0) == doctest::Approx(z).epsilon(1e-13));
  CHECK(hurwitz_half(0.5) == doctest::Approx((std::sqrt(2.0) - 1.0) * z).epsilon(1e-13));
}

TEST_CASE("L(1/2) symmetries") {
  const CharacterTable t5(5);
  // Legendre symbol mod 5 is j = 2
  CHECK(std::abs(L_half(t5, 2).imag()) < 1e-14);
  const CharacterTable t(31);
  for (std::uint64_t j = 1; j < 30; ++j) CHECK(std::abs(L_half(t, t.conjugate(j)) - std::conj(L_half(t, j))) < 1e-12);
  CHECK_THROWS_AS(L_half(t, 0), InvalidArgument);
  const auto all = L_half_all(t);
  for (std::uint64_t j = 1; j < 30; ++j) CHECK(std::abs(all[j] - L_half(t, j)) < 1e-12);
}

TEST_CASE("L(1/2) agrees with the approximate functional equation") {
  for (std::uint64_t q : {7u, 23u, 101u}) {
    const CharacterTable t(q);
    for (std::uint64_t j = 1; j < q - 1; j += 3) {
      std::vector<oracle::cd> chi(q);
      for (std::uint64_t n = 0; n < q; ++n) chi[n] = t.value(j, n);
      CHECK(std::abs(L_half(t, j) - oracle::L_half_afe(chi)) < 1e-9);
    }
  }
}

TEST_CASE("trivial polynomials reduce I(q) to the first moment") {
  const auto r = I_q(101, Rational(3, 2), 0.05);
  const CharacterTable t(101);
  cdouble s = 0.0;
  for (std::uint64_t j = 1; j < 100; ++j) s += L_half(t, j);
  CHECK(std::abs(r.value - s) < 1e-10);
  CHECK(r.rows.size() == 99);
}

TEST_CASE("I(q) is real with non-trivial polynomials") {
  for (std::uint64_t q : {101u, 211u, 401u}) {
    const auto r = I_q(q, Rational(3, 2), 0.8);
    bool nontrivial = false;
    for (const auto& row : r.rows) nontrivial = nontrivial || std::abs(row.product - cdouble(1.0, 0.0)) > 1e-6;
    CHECK(nontrivial);
    CHECK(std::abs(r.value.imag()) <= 1e-8 * r.scale);
  }
}

TEST_CASE("Kronecker symbol") {
  for (std::uint64_t n = 0; n < 50; ++n) {
    const int expected = n % 2 == 0 ? 0 : ((n - 1) / 2 % 2 == 0 ? 1 : -1);
    CHECK(kronecker(-4, n) == expected);
  }
  for (std::int64_t d : {-3, 5, 8, -7, 12, -23}) {
    const auto m = static_cast<std::uint64_t>(std::abs(d));
    for (std::uint64_t a = 1; a < 40; ++a) {
      CHECK(kronecker(d, a + m) == kronecker(d, a));
      for (std::uint64_t b = 1; b < 15; ++b) CHECK(kronecker(d, a * b) == kronecker(d, a) * kronecker(d, b));
    }
  }
}

TEST_CASE("fundamental discriminants up to 100 match the field enumeration") {
  const auto ds = fundamental_discriminants(100);
  const auto ref = oracle::discriminants_from_fields(100);
  CHECK(ds.size() == ref.size());
  CHECK(std::set<std::int64_t>(ds.begin(), ds.end()) == ref);
}

TEST_CASE("quadratic central values are real and match the AFE") {
  for (std::int64_t d : {-3, -4, 5, 8, -7, 13, -20}) {
    const auto q = static_cast<std::uint64_t>(std::abs(d));
    std::vector<oracle::cd> chi(q);
    for (std::uint64_t n = 0; n < q; ++n) chi[n] = kronecker(d, n);
    CHECK(L_half_quadratic(d) == doctest::Approx(oracle::L_half_afe(chi).real()).epsilon(1e-9));
  }
}

TEST_CASE("I(X) with trivial polynomials is the plain sum") {
  const auto r = I_X(200, Rational(3, 2), 0.05);
  double s = 0.0;
  for (std::int64_t d : fundamental_discriminants(200)) s += L_half_quadratic(d);
  CHECK(r.value == doctest::Approx(s).epsilon(1e-12));
  CHECK_THROWS_AS(I_X(20000, Rational(3, 2)), ResourceLimit);
}
