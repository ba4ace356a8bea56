#ifndef ZMOMENTS_ZETA_HPP
#define ZMOMENTS_ZETA_HPP

#include <string_view>
#include <vector>

#include "zmoments/numeric.hpp"

namespace zmoments {

enum class ZetaMethod { euler_maclaurin, riemann_siegel, truncated_sum };

std::string_view to_string(ZetaMethod method);

/// zeta(1/2 + i t) (or zeta(s) for zeta_em) with an a-posteriori error bound.
struct ZetaValue {
  double t = 0.0;
  cdouble value;
  ZetaMethod method = ZetaMethod::euler_maclaurin;
  double err = 0.0;
  bool in_window = true;  // false when a truncated sum is used outside its window
};

inline constexpr double kRiemannSiegelFloor = 50.0;

// Euler-Maclaurin with `terms` main terms; the Bernoulli tail is extended
// until its remainder bound stops improving. Throws InsufficientPrecision when
// the best bound exceeds `tolerance`.
ZetaValue zeta_em(cdouble s, int terms, double tolerance = 1e-8);

// Riemann-Siegel theta(t), Stirling expansion (t >= 10).
double riemann_siegel_theta(double t);

struct HardyZ {
  double value = 0.0;
  double err = 0.0;
};

// Z(t) by the Riemann-Siegel formula with corrections C0..C4 (t >= 50).
HardyZ hardy_z(double t);
ZetaValue zeta_rs(double t);

// sum_{n <= T} n^{-1/2 - i t}; err = constant * T^{-1/2}. The value is flagged
// when t lies outside [theta T, T].
ZetaValue zeta_truncated(double t, double T, double theta = 0.0, double constant = 5.0);

// Default evaluator on the critical line: Euler-Maclaurin with 2|t| + 50 terms
// below the Riemann-Siegel floor, Riemann-Siegel above.
ZetaValue zeta_critical(double t);

// zeta(1/2 + i t) on a uniform grid; block-parallel, thread-count independent.
std::vector<cdouble> zeta_grid(const UniformGrid& grid);

struct TruncationAudit {
  double constant = 0.0;  // sup sqrt(T) |truncated - zeta| over the samples
  double worst_t = 0.0;
  std::size_t samples = 0;
};

// Samples t uniformly in [theta T, T] and measures the truncated-sum error.
TruncationAudit truncation_audit(double T, double theta, std::size_t samples);

}  // namespace zmoments

#endif  // ZMOMENTS_ZETA_HPP
