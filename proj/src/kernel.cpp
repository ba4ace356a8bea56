#include "zmoments/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zmoments/errors.hpp"

namespace zmoments {

namespace {

double bump_g(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

constexpr int kPanelOrder = 8;
constexpr int kStencil = 12;
constexpr double kTailThreshold = 1e-15;

// Barycentric weights for kStencil equispaced points: (-1)^j binom(n-1, j).
const std::array<double, kStencil>& stencil_weights() {
  static const std::array<double, kStencil> weights = [] {
    std::array<double, kStencil> w{};
    double binom = 1.0;
    for (int j = 0; j < kStencil; ++j) {
      w[j] = (j % 2 == 0 ? 1.0 : -1.0) * binom;
      binom = binom * (kStencil - 1 - j) / (j + 1);
    }
    return w;
  }();
  return weights;
}

}  // namespace

void KernelSpec::validate() const {
  if (!(theta > 0.0 && theta < 1.0 / 3.0))
    throw InvalidArgument("kernel theta must lie in (0, 1/3)");
  if (quadrature_nodes < 512) throw InvalidArgument("kernel quadrature needs at least 512 nodes");
  if (decay_order < 0) throw InvalidArgument("kernel decay order must be non-negative");
}

double smoothstep(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = bump_g(u);
  const double b = bump_g(1.0 - u);
  return a / (a + b);
}

double smoothstep_derivative(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double a = bump_g(u);
  const double b = bump_g(1.0 - u);
  const double da = a / (u * u);
  const double db = b / ((1.0 - u) * (1.0 - u));
  const double s = a + b;
  return (da * b + a * db) / (s * s);
}

double eval_K(const KernelSpec& spec, double x) {
  const double t = spec.theta;
  if (x <= t || x >= 1.0 - t) return 0.0;
  if (x >= 2.0 * t && x <= 1.0 - 2.0 * t) return 1.0;
  if (x < 2.0 * t && x <= 1.0 - 2.0 * t) return smoothstep((x - t) / t);
  if (x > 1.0 - 2.0 * t && x >= 2.0 * t) return smoothstep((1.0 - t - x) / t);
  // theta > 1/4: the two ramps overlap and the plateau is empty.
  return std::max(0.0, smoothstep((x - t) / t) + smoothstep((1.0 - t - x) / t) - 1.0);
}

cdouble fourier_K(const KernelSpec& spec, double xi) {
  spec.validate();
  const double t = spec.theta;
  const double breaks[4] = {t, std::min(2.0 * t, 1.0 - 2.0 * t), std::max(2.0 * t, 1.0 - 2.0 * t), 1.0 - t};
  const double quarter = std::abs(xi) > 0.0 ? kPi / (2.0 * std::abs(xi)) : 1.0;
  const int min_panels = std::max(64, spec.quadrature_nodes / (3 * kPanelOrder) + 1);
  long long nodes = 0;
  std::array<long long, 3> panels{};
  for (int s = 0; s < 3; ++s) {
    const double len = breaks[s + 1] - breaks[s];
    panels[s] = std::max<long long>(min_panels, static_cast<long long>(std::ceil(len / quarter)));
    nodes += panels[s] * kPanelOrder;
  }
  if (nodes > spec.max_nodes)
    throw InsufficientPrecision("fourier_K: node budget too small for |xi| = " + std::to_string(xi));

  const GaussRule& rule = gauss_legendre(kPanelOrder);
  CompensatedSum<cdouble> acc;
  for (int s = 0; s < 3; ++s) {
    const double a = breaks[s];
    const double h = (breaks[s + 1] - a) / static_cast<double>(panels[s]);
    for (long long p = 0; p < panels[s]; ++p) {
      const double mid = a + (static_cast<double>(p) + 0.5) * h;
      for (int j = 0; j < kPanelOrder; ++j) {
        const double x = mid + 0.5 * h * rule.nodes[j];
        const double kx = eval_K(spec, x);
        if (kx == 0.0) continue;
        const double wgt = 0.5 * h * rule.weights[j] * kx;
        acc += cdouble(wgt * std::cos(x * xi), -wgt * std::sin(x * xi));
      }
    }
  }
  return acc.value();
}

double ramp_transform_quadrature(double w) {
  // R(w) = 2 int_0^{1/2} sigma'(u) cos((1/2 - u) w) du, sigma' symmetric about 1/2.
  const auto panels = std::max<long long>(64, static_cast<long long>(std::ceil(std::abs(w) / kPi)) + 1);
  const GaussRule& rule = gauss_legendre(kPanelOrder);
  const double h = 0.5 / static_cast<double>(panels);
  KahanSum acc;
  for (long long p = 0; p < panels; ++p) {
    const double mid = (static_cast<double>(p) + 0.5) * h;
    for (int j = 0; j < kPanelOrder; ++j) {
      const double u = mid + 0.5 * h * rule.nodes[j];
      acc += h * rule.weights[j] * smoothstep_derivative(u) * std::cos((0.5 - u) * w);
    }
  }
  return acc.value();
}

Kernel::Kernel(KernelSpec spec) : spec_(spec) {
  spec_.validate();
  constexpr double kWCap = 2000.0;
  // Quarter-period panels up to the cap on the half interval [0, 1/2].
  const auto panels = static_cast<long long>(std::ceil(kWCap / kPi)) + 1;
  const GaussRule& rule = gauss_legendre(kPanelOrder);
  const double h = 0.5 / static_cast<double>(panels);
  std::vector<double> weight;
  std::vector<double> offset;
  for (long long p = 0; p < panels; ++p) {
    const double mid = (static_cast<double>(p) + 0.5) * h;
    for (int j = 0; j < kPanelOrder; ++j) {
      const double u = mid + 0.5 * h * rule.nodes[j];
      const double c = h * rule.weights[j] * smoothstep_derivative(u);
      if (c == 0.0) continue;
      weight.push_back(c);
      offset.push_back(0.5 - u);
    }
  }
  const std::size_t m = weight.size();
  // cos(offset * w_i) by complex rotation, re-anchored every 32 entries.
  std::vector<cdouble> phase(m), rotor(m);
  for (std::size_t j = 0; j < m; ++j) rotor[j] = std::polar(1.0, offset[j] * step_);

  const auto max_entries = static_cast<std::size_t>(kWCap / step_);
  const std::size_t window = static_cast<std::size_t>(50.0 / step_);
  table_.reserve(4096);
  for (std::size_t i = 0; i <= max_entries; ++i) {
    const double w = static_cast<double>(i) * step_;
    if (i % 32 == 0) {
      for (std::size_t j = 0; j < m; ++j) phase[j] = std::polar(1.0, offset[j] * w);
    }
    KahanSum acc;
    for (std::size_t j = 0; j < m; ++j) acc += weight[j] * phase[j].real();
    table_.push_back(acc.value());
    for (std::size_t j = 0; j < m; ++j) phase[j] *= rotor[j];
    if (w >= 100.0 && i >= window) {
      double env = 0.0;
      for (std::size_t q = i - window; q <= i; ++q) env = std::max(env, std::abs(table_[q]));
      if (env < kTailThreshold) break;
    }
  }
  {
    double env = 0.0;
    for (std::size_t q = table_.size() - std::min(window, table_.size()); q < table_.size(); ++q)
      env = std::max(env, std::abs(table_[q]));
    tail_level_ = std::max(env, kTailThreshold);
  }
  w_limit_ = static_cast<double>(table_.size() - kStencil) * step_;

  // Decay constants on a uniform xi grid of spacing 1/2 (K^ is band-limited
  // with half-width below 1/2, so peaks are resolved to a few percent).
  const int orders = std::max(spec_.decay_order, 4);
  decay_constants_.assign(orders + 1, 0.0);
  const double xi_max = xi_table_limit();
  const auto count = static_cast<std::size_t>(xi_max / 0.5);
  for (std::size_t i = 0; i <= count; ++i) {
    const double xi = 0.5 * static_cast<double>(i);
    const double a = transform_abs(xi);
    double scale = 1.0;
    for (int nu = 0; nu <= orders; ++nu) {
      decay_constants_[nu] = std::max(decay_constants_[nu], scale * a);
      scale *= 1.0 + xi;
    }
  }
  log_decay_.resize(decay_constants_.size());
  for (std::size_t nu = 0; nu < decay_constants_.size(); ++nu) {
    decay_constants_[nu] *= 1.05;
    log_decay_[nu] = std::log(decay_constants_[nu]);
  }
}

double Kernel::ramp_transform(double w) const {
  w = std::abs(w);
  if (w > w_limit_) return 0.0;
  const double x = w / step_;
  const auto nearest = static_cast<long long>(std::llround(x));
  if (std::abs(x - static_cast<double>(nearest)) < 1e-14) return table_[static_cast<std::size_t>(nearest)];
  const long long first = static_cast<long long>(std::floor(x)) - (kStencil / 2 - 1);
  const auto& bw = stencil_weights();
  double num = 0.0;
  double den = 0.0;
  for (int j = 0; j < kStencil; ++j) {
    const long long idx = first + j;
    const double value = table_[static_cast<std::size_t>(std::llabs(idx))];  // R is even
    const double c = bw[j] / (x - static_cast<double>(idx));
    num += c * value;
    den += c;
  }
  return num / den;
}

double Kernel::transform_abs(double xi) const {
  const double c = 0.5 * (1.0 - 3.0 * spec_.theta);
  const double y = c * xi;
  const double sinc = std::abs(y) < 1e-8 ? 1.0 - y * y / 6.0 : std::sin(y) / y;
  return std::abs(ramp_transform(spec_.theta * xi) * 2.0 * c * sinc);
}

cdouble Kernel::transform(double xi) const {
  const double c = 0.5 * (1.0 - 3.0 * spec_.theta);
  const double y = c * xi;
  const double sinc = std::abs(y) < 1e-8 ? 1.0 - y * y / 6.0 : std::sin(y) / y;
  const double magnitude = ramp_transform(spec_.theta * xi) * 2.0 * c * sinc;
  return std::polar(1.0, -0.5 * xi) * magnitude;
}

double Kernel::tail_bound(double xi) const {
  return 2.0 * tail_level_ / std::max(std::abs(xi), 1.0);
}

double Kernel::envelope(double xi) const {
  const double lx = std::log1p(std::abs(xi));
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t nu = 0; nu < log_decay_.size(); ++nu)
    best = std::min(best, log_decay_[nu] - static_cast<double>(nu) * lx);
  return std::exp(best);
}

double decay_audit(const Kernel& kernel, int nu, std::span<const double> grid) {
  if (nu < 0 || nu > kernel.spec().decay_order)
    throw InvalidArgument("decay_audit: nu exceeds the kernel's decay order");
  double sup = 0.0;
  for (double xi : grid)
    sup = std::max(sup, std::pow(1.0 + std::abs(xi), nu) * kernel.transform_abs(xi));
  return sup;
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0 && hi > lo) || count < 2) throw InvalidArgument("geometric_grid: bad range");
  std::vector<double> grid(count);
  const double ratio = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) grid[i] = lo * std::exp(ratio * static_cast<double>(i));
  return grid;
}

}  // namespace zmoments
