#include <cmath>
#include <random>

#include "doctest.h"
#include "zmoments/errors.hpp"
#include "zmoments/moment_lab.hpp"
#include "zmoments/multiplicative.hpp"

using namespace zmoments;

TEST_CASE("audit relations and slack") {
  auto a = make_audit("x", 1.0, 2.0);
  CHECK(a.pass);
  CHECK(a.slack_log == doctest::Approx(std::log(2.0)));
  CHECK_FALSE(make_audit("y", 3.0, 2.0).pass);
  CHECK(make_audit("z", 3.0, 2.0, ">=").pass);
  auto l = make_audit("w", -10.0, -9.0, "<=", true);
  CHECK(l.pass);
  CHECK(l.slack_log == doctest::Approx(1.0));
}

TEST_CASE("step above the cap is refused") {
  CHECK_THROWS_AS(moment_Mk(1.0, 100.0, 0.2), InsufficientPrecision);
  CHECK(moment_Mk(1.0, 0.0).value == 0.0);
}

TEST_CASE("second moment at T = 1000 follows the Ingham main term") {
  const double T = 1000.0;
  const double main = T * std::log(T / (2.0 * kPi)) + (2.0 * AnalyticConstants::euler_gamma - 1.0) * T;
  CHECK(moment_Mk(1.0, T, 0.02).value == doctest::Approx(main).epsilon(0.05));
}

TEST_CASE("mean-square identity for a short random polynomial") {
  KernelSpec spec;
  spec.theta = 0.25;
  const Kernel kernel(spec);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c(60);
  for (std::size_t n = 1; n < c.size(); ++n) c[n] = u(rng);
  const auto ms = mean_square_identity(c, 1500.0, kernel);
  CHECK(ms.lhs == doctest::Approx(ms.rhs).epsilon(1e-8));
}

TEST_CASE("pair sum of a single coefficient is the diagonal") {
  KernelSpec spec;
  spec.theta = 0.3;
  const Kernel kernel(spec);
  std::vector<double> x{0.0, 2.0};
  const auto ps = kernel_pair_sum(x, x, 1000.0, kernel);
  CHECK(ps.value.real() == doctest::Approx(1000.0 * 4.0 * kernel.mass()));
  // no off-diagonal pairs exist; the far-range blanket term may still be positive
  const double bound = offdiagonal_envelope_bound(x, x, 1000.0, kernel);
  CHECK(bound >= 0.0);
  CHECK(bound < 1e-6 * ps.value.real());
}

namespace {
ConstructionParams desk(const char* k, double T) {
  BuildOptions o;
  o.desk_scale = true;
  return build_params(parse_rational(k), T, 0.3, o);
}
bool all_pass(const std::vector<Audit>& audits) {
  bool ok = true;
  for (const auto& a : audits) {
    INFO(a.name);
    CHECK(a.pass);
    ok = ok && a.pass;
  }
  return ok;
}
}  // namespace

TEST_CASE("lower-bound chain at k = 2") {
  const auto p = desk("2", 2000.0);
  KernelSpec spec;
  spec.theta = 0.3;
  const auto chain = lemma1_lower(p, Kernel(spec));
  CHECK(all_pass(chain.audits));
  CHECK(chain.exponent_sum <= 10.0 * 8.0);
  CHECK(chain.max_f <= 4.0);
}

TEST_CASE("squarefree device at k = 3/2") {
  const auto p = desk("3/2", 5000.0);
  const auto check = squarefree_lower_check(p, 300);
  CHECK(all_pass(check.audits));
  CHECK(check.product_excess == doctest::Approx(check.direct_excess).epsilon(1e-12));
}

TEST_CASE("hoelder exponents sum to one and the chain holds at k = 2, T = 2000") {
  const auto p = desk("2", 2000.0);
  KernelSpec spec;
  spec.theta = 0.3;
  const Kernel kernel(spec);
  const auto samples = sample_integrand(p, kernel, 0.02);
  const auto chain = holder_chain(p, samples);
  CHECK(chain.exponent_total == "1");
  CHECK(chain.lhs <= chain.rhs);
  CHECK(all_pass(chain.audits));
}

TEST_CASE("theorem bound stays finite in log space for k = 5") {
  const auto p = desk("5", 1e4);
  const auto tb = theorem_bound(p, 1e20, 1e3);
  CHECK(std::isfinite(tb.log_rhs));
  CHECK(tb.log_rhs < -18000.0);
}
