#include <cmath>

#include "doctest.h"
#include "zmoments/errors.hpp"
#include "zmoments/numeric.hpp"
#include "zmoments/zeta.hpp"

using namespace zmoments;

TEST_CASE("Euler-Maclaurin at classical points") {
  CHECK(std::abs(zeta_em(cdouble(2.0, 0.0), 20).value - kPi * kPi / 6.0) < 1e-12);
  CHECK(std::abs(zeta_em(cdouble(0.5, 0.0), 20).value - (-1.4603545088095868)) < 1e-12);
  CHECK_THROWS_AS(zeta_em(cdouble(1.0, 0.0), 20), InvalidArgument);
}

TEST_CASE("first zero on the critical line") {
  const double gamma1 = 14.134725141734693;
  CHECK(std::abs(zeta_critical(gamma1).value) < 1e-9);
  CHECK(std::abs(zeta_critical(gamma1 + 0.1).value) > 1e-2);
}

TEST_CASE("Riemann-Siegel agrees with Euler-Maclaurin within its error bound") {
  for (double t : {60.0, 100.0, 271.3, 1000.0, 2500.0}) {
    const ZetaValue rs = zeta_rs(t);
    const ZetaValue em = zeta_em(cdouble(0.5, t), static_cast<int>(t) + 50, 1e-12);
    CHECK(std::abs(rs.value - em.value) <= rs.err + em.err);
    CHECK(rs.method == ZetaMethod::riemann_siegel);
  }
}

TEST_CASE("Hardy Z is real and matches |zeta|") {
  for (double t : {100.0, 1234.5, 7000.0}) {
    const HardyZ z = hardy_z(t);
    CHECK(std::abs(std::abs(z.value) - std::abs(zeta_rs(t).value)) < 1e-12);
  }
}

TEST_CASE("zeta on a grid matches pointwise evaluation") {
  const auto grid = UniformGrid::covering(40.0, 60.0, 0.5);
  const auto values = zeta_grid(grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(std::abs(values[i] - zeta_critical(grid.at(i)).value) < 1e-12);
}

TEST_CASE("conjugate symmetry for negative t") {
  CHECK(std::abs(zeta_critical(-30.0).value - std::conj(zeta_critical(30.0).value)) < 1e-12);
}

TEST_CASE("truncated sum tracks zeta inside its window") {
  const double T = 2000.0;
  const ZetaValue v = zeta_truncated(1500.0, T, 0.3);
  CHECK(v.in_window);
  CHECK(std::abs(v.value - zeta_critical(1500.0).value) < 5.0 / std::sqrt(T));
  CHECK_FALSE(zeta_truncated(100.0, T, 0.3).in_window);
}
