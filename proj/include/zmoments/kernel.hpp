#ifndef ZMOMENTS_KERNEL_HPP
#define ZMOMENTS_KERNEL_HPP

#include <array>
#include <span>
#include <vector>

#include "zmoments/numeric.hpp"

namespace zmoments {

/// Smooth weight K supported in [theta, 1 - theta], equal to 1 on
/// [2 theta, 1 - 2 theta], with C-infinity mollifier ramps in between. For
/// 1/4 < theta < 1/3 the ramps overlap: K = sigma_left + sigma_right - 1.
struct KernelSpec {
  double theta = 0.3;
  int quadrature_nodes = 512;       // minimum node count per transform
  int decay_order = 4;              // largest nu audited
  long long max_nodes = 1LL << 24;  // node budget for fourier_K

  void validate() const;
};

inline constexpr double kAsymptoticTheta = 0.01;
inline constexpr double kDeskTheta = 0.3;

// Smoothstep sigma(u) = g(u) / (g(u) + g(1-u)), g(u) = exp(-1/u) for u > 0.
double smoothstep(double u);
double smoothstep_derivative(double u);

double eval_K(const KernelSpec& spec, double x);

// K^(xi) = int K(x) e^{-i x xi} dx by panel-wise Gauss-Legendre over the
// support, panels no longer than a quarter period.
cdouble fourier_K(const KernelSpec& spec, double xi);

/// Tabulated transform for bulk use. Writing K^(xi) = e^{-i xi/2} R(theta xi)
/// 2 sin(c xi)/xi with c = (1 - 3 theta)/2, where R is the cosine transform of
/// the ramp derivative, R is tabulated on a uniform grid and interpolated.
class Kernel {
 public:
  explicit Kernel(KernelSpec spec);

  const KernelSpec& spec() const { return spec_; }
  double theta() const { return spec_.theta; }
  double operator()(double x) const { return eval_K(spec_, x); }

  cdouble transform(double xi) const;
  // |K^(xi)| without the phase.
  double transform_abs(double xi) const;
  // K^(0) = int K.
  double mass() const { return 1.0 - 3.0 * spec_.theta; }

  // Beyond this |xi| the tabulated transform is reported as 0.
  double xi_table_limit() const { return w_limit_ / spec_.theta; }
  // Bound on |K^(xi)| for |xi| beyond xi_table_limit().
  double tail_bound(double xi) const;

  // Audited C_nu = sup (1 + |xi|)^nu |K^(xi)| over a fine uniform grid, with a
  // 5% allowance for peaks between grid points.
  double decay_constant(int nu) const { return decay_constants_.at(nu); }
  // min_nu C_nu (1 + |xi|)^{-nu}
  double envelope(double xi) const;

  double ramp_transform(double w) const;  // R(w), interpolated

 private:
  KernelSpec spec_;
  double step_ = 0.25;
  double w_limit_ = 0.0;
  double tail_level_ = 0.0;
  std::vector<double> table_;
  std::vector<double> log_decay_;
  std::vector<double> decay_constants_;
};

// R(w) by direct quadrature (used to build and to check the table).
double ramp_transform_quadrature(double w);

// sup over the grid of (1 + |xi|)^nu |K^(xi)|.
double decay_audit(const Kernel& kernel, int nu, std::span<const double> grid);

std::vector<double> geometric_grid(double lo, double hi, std::size_t count);

}  // namespace zmoments

#endif  // ZMOMENTS_KERNEL_HPP
