#include <cmath>
#include <vector>

#include "doctest.h"
#include "zmoments/dirichlet.hpp"
#include "zmoments/errors.hpp"
#include "zmoments/kernel.hpp"
#include "zmoments/numeric.hpp"

using namespace zmoments;

TEST_CASE("compensated sum recovers cancelled terms") {
  KahanSum s;
  s += 1e16;
  for (int i = 0; i < 1000; ++i) s += 1.0;
  s += -1e16;
  CHECK(s.value() == 1000.0);
}

TEST_CASE("simpson is exact on cubics") {
  const auto grid = UniformGrid::covering(0.0, 2.0, 0.1);
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::pow(grid.at(i), 3);
  CHECK(simpson(f, grid.step).value == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("parallel blocks do not depend on the worker count") {
  auto run = [](unsigned threads) {
    set_thread_limit(threads);
    std::vector<double> out(10007);
    parallel_blocks(out.size(), 97, [&](std::size_t b, std::size_t e, std::size_t) {
      for (std::size_t i = b; i < e; ++i) out[i] = std::sin(static_cast<double>(i));
    });
    set_thread_limit(0);
    return out;
  };
  CHECK(run(1) == run(4));
}

TEST_CASE("kernel support and plateau") {
  KernelSpec spec;
  spec.theta = 0.2;
  CHECK(eval_K(spec, 0.1) == 0.0);
  CHECK(eval_K(spec, 0.95) == 0.0);
  CHECK(eval_K(spec, 0.5) == doctest::Approx(1.0));
  CHECK(eval_K(spec, 0.45) == doctest::Approx(1.0));
  CHECK(eval_K(spec, 0.3) > 0.0);
  CHECK(eval_K(spec, 0.3) < 1.0);
  spec.theta = 0.3;  // overlapping ramps
  CHECK(eval_K(spec, 0.5) > 0.0);
  CHECK(eval_K(spec, 0.5) < 1.0);
  CHECK(eval_K(spec, 0.4) == doctest::Approx(eval_K(spec, 0.6)).epsilon(1e-14));
}

TEST_CASE("kernel rejects theta outside (0, 1/3)") {
  KernelSpec spec;
  spec.theta = 0.34;
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
  spec.theta = 0.0;
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
}

TEST_CASE("transform table agrees with a plain Riemann sum of K") {
  for (double theta : {0.1, 0.25, 0.3}) {
    KernelSpec spec;
    spec.theta = theta;
    const Kernel kernel(spec);
    CHECK(kernel.transform(0.0).real() == doctest::Approx(1.0 - 3.0 * theta).epsilon(1e-12));
    for (double xi : {0.7, 5.0, 23.0, 80.0}) {
      // midpoint rule on a fine grid; K is smooth and compactly supported
      const int n = 200000;
      cdouble acc = 0.0;
      for (int i = 0; i < n; ++i) {
        const double x = (i + 0.5) / n;
        acc += eval_K(spec, x) * std::polar(1.0, -x * xi);
      }
      acc /= static_cast<double>(n);
      CHECK(std::abs(kernel.transform(xi) - acc) < 1e-9);
      CHECK(std::abs(fourier_K(spec, xi) - acc) < 1e-9);
    }
  }
}

TEST_CASE("audited decay envelope dominates the transform") {
  KernelSpec spec;
  spec.theta = 0.3;
  const Kernel kernel(spec);
  for (double xi = 0.0; xi < 3000.0; xi += 13.7) CHECK(kernel.transform_abs(xi) <= kernel.envelope(xi) * (1 + 1e-12));
}

TEST_CASE("dirichlet grid evaluation matches pointwise evaluation") {
  std::vector<double> c(300);
  for (std::size_t n = 1; n < c.size(); ++n) c[n] = std::cos(static_cast<double>(n)) + 1.5;
  const auto grid = UniformGrid::covering(1000.0, 1100.0, 0.05);
  const auto values = dirichlet_on_grid(c, grid);
  for (std::size_t i = 0; i < grid.size(); i += 97)
    CHECK(std::abs(values[i] - dirichlet_at(c, grid.at(i))) < 1e-10);
}
