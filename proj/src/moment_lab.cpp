#include "zmoments/moment_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "zmoments/dirichlet.hpp"
#include "zmoments/errors.hpp"
#include "zmoments/multiplicative.hpp"
#include "zmoments/zeta.hpp"

namespace zmoments {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double slack(double lhs, double rhs, bool log_space) {
  if (log_space) return rhs - lhs;
  if (lhs > 0.0 && rhs > 0.0) return std::log(rhs / lhs);
  if (lhs <= 0.0 && rhs > 0.0) return kInf;
  if (lhs > 0.0 && rhs <= 0.0) return -kInf;
  return std::numeric_limits<double>::quiet_NaN();
}

UniformGrid support_grid(double theta, double T, double step) {
  if (!(step > 0.0)) throw InvalidArgument("quadrature step must be positive");
  if (step > kMaxStep)
    throw InsufficientPrecision("quadrature step " + std::to_string(step) + " exceeds " + std::to_string(kMaxStep));
  return UniformGrid::covering(theta * T, (1.0 - theta) * T, step);
}

std::vector<double> kernel_weights(const Kernel& kernel, const UniformGrid& grid, double T) {
  std::vector<double> w(grid.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = kernel(grid.at(i) / T);
  return w;
}

// Positive quadrature weights h/3 * {1, 4, 2, ..., 4, 1}.
double quad_weight(const UniformGrid& grid, std::size_t i) {
  return grid.step / 3.0 * simpson_weight(i, grid.intervals);
}

double inv_sqrt_sum(std::span<const double> x) {
  KahanSum acc;
  for (std::size_t n = 1; n < x.size(); ++n)
    if (x[n] != 0.0) acc += std::abs(x[n]) / std::sqrt(static_cast<double>(n));
  return acc.value();
}

// Bound on |K^(xi)| usable at every xi.
double decay_bound(const Kernel& kernel, double xi) {
  xi = std::abs(xi);
  const double env = kernel.envelope(xi);
  return xi > kernel.xi_table_limit() ? std::max(env, kernel.tail_bound(xi)) : env;
}

std::vector<double> dense_ones(std::uint64_t n) {
  std::vector<double> v(n + 1, 1.0);
  v[0] = 0.0;
  return v;
}

}  // namespace

Audit make_audit(std::string name, double lhs, double rhs, std::string relation, bool log_space, double rel_tol) {
  Audit a;
  a.name = std::move(name);
  a.lhs = lhs;
  a.rhs = rhs;
  a.relation = std::move(relation);
  a.log_space = log_space;
  const double allowance = log_space ? std::log1p(rel_tol) : rel_tol * std::abs(rhs);
  if (a.relation == "<=") {
    a.pass = lhs <= rhs + allowance;
    a.slack_log = slack(lhs, rhs, log_space);
  } else if (a.relation == ">=") {
    a.pass = lhs >= rhs - allowance;
    a.slack_log = slack(rhs, lhs, log_space);
  } else if (a.relation == "==") {
    a.pass = std::abs(lhs - rhs) <= allowance;
    a.slack_log = 0.0;
  } else {
    throw InvalidArgument("make_audit: unknown relation " + a.relation);
  }
  return a;
}

MomentIntegral moment_Mk(double k, double T, double step) {
  if (!(k > 0.0)) throw InvalidArgument("moment_Mk: k must be positive");
  if (!(T >= 0.0)) throw InvalidArgument("moment_Mk: T must be non-negative");
  if (!(step > 0.0)) throw InvalidArgument("moment_Mk: step must be positive");
  if (step > kMaxStep)
    throw InsufficientPrecision("moment_Mk: step " + std::to_string(step) + " is too coarse (max 0.05)");
  MomentIntegral out;
  if (T == 0.0) return out;
  out.grid = UniformGrid::covering(0.0, T, step);
  const std::vector<cdouble> z = zeta_grid(out.grid);
  std::vector<double> f(z.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::exp(k * std::log(std::norm(z[i])));
  const auto est = simpson(f, out.grid.step);
  out.value = est.value;
  out.error = est.error;
  return out;
}

PairSum kernel_pair_sum(std::span<const double> x, std::span<const double> y, double T, const Kernel& kernel) {
  const double span_log = kernel.xi_table_limit() / T;
  const std::uint64_t xmax = x.empty() ? 0 : x.size() - 1;
  CompensatedSum<cdouble> acc;
  for (std::uint64_t n = 1; n < y.size(); ++n) {
    if (y[n] == 0.0) continue;
    const double nd = static_cast<double>(n);
    const double yn = y[n] / std::sqrt(nd);
    const auto lo = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(nd * std::exp(-span_log))));
    const auto hi = std::min<std::uint64_t>(xmax, static_cast<std::uint64_t>(std::floor(nd * std::exp(span_log))));
    for (std::uint64_t m = lo; m <= hi; ++m) {
      if (x[m] == 0.0) continue;
      const double md = static_cast<double>(m);
      acc += (x[m] * yn / std::sqrt(md)) * kernel.transform(T * std::log(md / nd));
    }
  }
  PairSum out;
  out.value = T * acc.value();
  out.tail = T * kernel.tail_bound(kernel.xi_table_limit()) * inv_sqrt_sum(x) * inv_sqrt_sum(y);
  return out;
}

double offdiagonal_envelope_bound(std::span<const double> x, std::span<const double> y, double T,
                                  const Kernel& kernel) {
  constexpr double kNear = 4.0;
  const std::uint64_t xmax = x.empty() ? 0 : x.size() - 1;
  KahanSum near;
  for (std::uint64_t n = 1; n < y.size(); ++n) {
    if (y[n] == 0.0) continue;
    const double nd = static_cast<double>(n);
    const double yn = std::abs(y[n]) / std::sqrt(nd);
    const auto lo = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(nd / kNear)));
    const auto hi = std::min<std::uint64_t>(xmax, static_cast<std::uint64_t>(std::floor(nd * kNear)));
    for (std::uint64_t m = lo; m <= hi; ++m) {
      if (m == n || x[m] == 0.0) continue;
      const double md = static_cast<double>(m);
      near += std::abs(x[m]) * yn / std::sqrt(md) * decay_bound(kernel, T * std::log(md / nd));
    }
  }
  // Pairs with m/n outside [1/4, 4]: the envelope is decreasing in |xi|.
  const double far = decay_bound(kernel, T * std::log(kNear)) * inv_sqrt_sum(x) * inv_sqrt_sum(y);
  return T * (near.value() + far);
}

MeanSquare mean_square_identity(std::span<const double> coeffs, double T, const Kernel& kernel, double step) {
  if (!(T > 0.0)) throw InvalidArgument("mean_square_identity: T must be positive");
  const UniformGrid grid = support_grid(kernel.theta(), T, step);
  const std::vector<double> w = kernel_weights(kernel, grid, T);
  const std::vector<cdouble> p = dirichlet_on_grid(coeffs, grid);
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = w[i] * std::norm(p[i]);
  const auto est = simpson(f, grid.step);
  MeanSquare out;
  out.lhs = est.value;
  out.lhs_error = est.error;
  out.rhs = kernel_pair_sum(coeffs, coeffs, T, kernel).value.real();
  return out;
}

Lemma2Values lemma2_bound(const ConstructionParams& params, const Kernel& kernel, PolySide side, std::size_t ell,
                          double step) {
  const std::size_t active = side == PolySide::A ? params.active_A : params.active_B;
  if (ell == 0 || ell > active) throw InvalidArgument("lemma2_bound: polynomial index is not active");
  const double exponent = side == PolySide::A ? params.a[ell] : params.b[ell];
  const double T = params.T;
  const double k = params.k_value;

  Lemma2Values out;
  out.side = side;
  out.ell = ell;
  out.exponent = static_cast<unsigned>(exponent);
  const std::string tag = std::string("lemma2.") + (side == PolySide::A ? "A" : "B") + std::to_string(ell);

  const CoefficientVector power = power_truncated(k, out.exponent, params.T0);
  const DivisorTable dk = sieve_divisor(k, std::max<std::uint64_t>(power.limit(), 1));
  KahanSum diag;
  double worst_ratio = 0.0;
  for (std::uint64_t n = 1; n <= power.limit(); ++n) {
    if (power[n] == 0.0) continue;
    diag += power[n] * power[n] / static_cast<double>(n);
    worst_ratio = std::max(worst_ratio, power[n] / dk[n]);
  }
  out.diagonal = T * kernel.mass() * diag.value();
  out.offdiag_bound = offdiagonal_envelope_bound(power.c, power.c, T, kernel);
  const PairSum pairs = kernel_pair_sum(power.c, power.c, T, kernel);
  out.offdiag_exact = pairs.value.real() - out.diagonal;
  const auto t0_floor = static_cast<std::uint64_t>(std::floor(params.T0));
  const DivisorTable dk_full = sieve_divisor(k, t0_floor);
  out.divisor_diagonal = T * diagonal_sum(dk_full, t0_floor);
  const double s = inv_sqrt_sum(dk_full.values());
  out.crude_bound = kernel.decay_constant(4) * T * std::pow(T, -4.0 * params.theta) * s * s;
  out.cap = T * std::pow(params.log_T, k * k);

  out.audits.push_back(make_audit(tag + ".coefficients_le_dk", worst_ratio, 1.0, "<=", false, 1e-12));
  if (out.exponent <= kMaxQuadratureExponent) {
    const UniformGrid grid = support_grid(params.theta, T, step);
    const std::vector<double> w = kernel_weights(kernel, grid, T);
    const CoefficientVector poly = side == PolySide::A ? build_poly_A(params, ell) : build_poly_B(params, ell);
    const std::vector<cdouble> values = dirichlet_on_grid(poly.c, grid);
    std::vector<double> f(grid.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = w[i] * std::pow(std::norm(values[i]), out.exponent);
    const auto est = simpson(f, grid.step);
    out.numeric = est.value;
    out.numeric_error = est.error + 1e-12 * std::abs(est.value);
    out.audits.push_back(make_audit(tag + ".numeric_matches_identity", std::abs(*out.numeric - pairs.value.real()),
                                    out.numeric_error + pairs.tail + 1e-9 * out.diagonal));
    out.audits.push_back(make_audit(tag + ".numeric_le_diagonal_plus_error", *out.numeric,
                                    out.diagonal + out.offdiag_bound + out.numeric_error));
  }
  out.audits.push_back(make_audit(tag + ".offdiag_within_envelope", std::abs(out.offdiag_exact),
                                  out.offdiag_bound + pairs.tail));
  out.audits.push_back(make_audit(tag + ".offdiag_below_1e-4_diagonal", std::abs(out.offdiag_exact) + pairs.tail,
                                  1e-4 * out.diagonal));
  out.audits.push_back(make_audit(tag + ".diagonal_le_dk_diagonal", out.diagonal, out.divisor_diagonal));
  out.audits.push_back(make_audit(tag + ".diagonal_plus_error_le_cap",
                                  out.diagonal + out.offdiag_bound + out.numeric_error, out.cap, "<=", false, 1e-3));
  return out;
}

IntegrandSamples sample_integrand(const ConstructionParams& params, const Kernel& kernel, double step) {
  IntegrandSamples s;
  s.grid = support_grid(params.theta, params.T, step);
  s.weight = kernel_weights(kernel, s.grid, params.T);
  s.zeta = zeta_grid(s.grid);
  for (std::size_t l = 1; l <= params.active_A; ++l)
    s.poly_A.push_back(dirichlet_on_grid(build_poly_A(params, l).c, s.grid));
  for (std::size_t l = 1; l <= params.active_B; ++l)
    s.poly_B.push_back(dirichlet_on_grid(build_poly_B(params, l).c, s.grid));
  s.product.assign(s.grid.size(), cdouble(1.0, 0.0));
  for (std::size_t i = 0; i < s.product.size(); ++i) {
    cdouble v(1.0, 0.0);
    for (const auto& a : s.poly_A) v *= a[i];
    for (const auto& b : s.poly_B) v *= std::conj(b[i]);
    s.product[i] = v;
  }
  return s;
}

IResult compute_I(const ConstructionParams& params, const Kernel& kernel, const IntegrandSamples& samples,
                  const AlphaBeta& coefficients, const IOptions& options) {
  const std::size_t n = samples.grid.size();
  const double h = samples.grid.step;
  std::vector<cdouble> f(n);
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = samples.weight[i] * samples.zeta[i] * samples.product[i];
    g[i] = samples.weight[i] * std::abs(samples.product[i]);
  }
  IResult out;
  const auto est = simpson(f, h);
  const auto abs_est = simpson(g, h);
  out.value = est.value;
  out.abs_integral = abs_est.value;
  // zeta evaluation error is largest at the low end of the window.
  const double zeta_err = zeta_critical(samples.grid.start).err;
  out.error = est.error + zeta_err * abs_est.value + 1e-12 * std::abs(est.value);

  const TruncationAudit audit = truncation_audit(params.T, params.theta, options.truncation_samples);
  out.truncation_constant = audit.constant;
  out.truncation_budget = audit.constant / std::sqrt(params.T) * out.abs_integral;

  if (options.truncated_quadrature) {
    const std::vector<double> ones = dense_ones(static_cast<std::uint64_t>(std::floor(params.T)));
    const std::vector<cdouble> zt = dirichlet_on_grid(ones, samples.grid);
    for (std::size_t i = 0; i < n; ++i) f[i] = samples.weight[i] * zt[i] * samples.product[i];
    const auto trunc = simpson(f, h);
    out.truncated_quadrature = trunc.value;
    out.truncated_error = trunc.error + 1e-12 * std::abs(trunc.value);
  }
  const PairSum pairs = kernel_pair_sum(coefficients.alpha.c, coefficients.beta.c, params.T, kernel);
  out.truncated_exact = pairs.value;
  out.truncated_exact_tail = pairs.tail;
  return out;
}

DiagonalI diagonal_I(const ConstructionParams& params, const Kernel& kernel, const AlphaBeta& coefficients) {
  const auto& alpha = coefficients.alpha;
  const auto& beta = coefficients.beta;
  DiagonalI out;
  KahanSum mass;
  const std::uint64_t top = std::min(alpha.limit(), beta.limit());
  for (std::uint64_t n = 1; n <= top; ++n)
    if (beta[n] != 0.0) mass += alpha[n] * beta[n] / static_cast<double>(n);
  out.mass = mass.value();
  out.value = params.T * kernel.mass() * out.mass;
  out.offdiag_bound = offdiagonal_envelope_bound(alpha.c, beta.c, params.T, kernel);
  const PairSum pairs = kernel_pair_sum(alpha.c, beta.c, params.T, kernel);
  out.offdiag_exact = pairs.value - out.value;
  out.offdiag_exact_tail = pairs.tail;

  const DivisorTable dk = sieve_divisor(params.k_value, std::max<std::uint64_t>(alpha.limit(), 1));
  KahanSum sm, sn;
  for (std::uint64_t m = 1; m <= alpha.limit(); ++m) sm += dk[m] / std::sqrt(static_cast<double>(m));
  const auto t0_floor = static_cast<std::uint64_t>(std::floor(params.T0));
  for (std::uint64_t m = 1; m <= std::min(t0_floor, alpha.limit()); ++m)
    sn += dk[m] / std::sqrt(static_cast<double>(m));
  out.crude_bound = kernel.decay_constant(4) * std::pow(params.T, 1.0 - 4.0 * params.theta) * sm.value() * sn.value();
  return out;
}

std::vector<Audit> diagonal_model_audits(const ConstructionParams& params, const Kernel& kernel, const IResult& I,
                                         const DiagonalI& diagonal) {
  std::vector<Audit> out;
  const double gap = std::abs(I.value - diagonal.value);
  const double base = diagonal.offdiag_bound + diagonal.offdiag_exact_tail + I.error;
  const double budget = base + I.truncation_budget;
  const double power_budget = base + I.truncation_constant * std::pow(params.T, 0.6);
  out.push_back(make_audit("diagonal.I_minus_diagonal_le_budget", gap, budget));
  out.push_back(make_audit("diagonal.I_minus_diagonal_le_audited_T^0.6", gap, power_budget));
  out.push_back(make_audit("diagonal.imag_I_le_budget", std::abs(I.value.imag()), budget));
  out.push_back(make_audit("diagonal.real_part_dominates", std::abs(I.value.imag()), std::abs(I.value.real())));
  out.push_back(make_audit("diagonal.diagonal_ge_T_K0", diagonal.value, params.T * kernel.mass(), ">=", false, 1e-12));
  out.push_back(make_audit("diagonal.exact_offdiag_within_envelope", std::abs(diagonal.offdiag_exact),
                           diagonal.offdiag_bound + diagonal.offdiag_exact_tail));
  if (I.truncated_quadrature) {
    const cdouble tq = *I.truncated_quadrature;
    out.push_back(make_audit("diagonal.truncated_quadrature_matches_identity", std::abs(tq - I.truncated_exact),
                             I.truncated_error + I.truncated_exact_tail + 1e-9 * std::abs(I.truncated_exact)));
    out.push_back(make_audit("diagonal.zeta_vs_truncated_le_truncation_budget", std::abs(I.value - tq),
                             I.truncation_budget + I.error + I.truncated_error));
  }
  return out;
}

Lemma1Chain lemma1_lower(const ConstructionParams& params, const Kernel& kernel, std::optional<double> mass) {
  constexpr double kPrimeBudget = 2e8;
  if (params.T0 > kPrimeBudget) throw ResourceLimit("lemma1_lower: T0 exceeds the prime sieve budget");
  const double k = params.k_value;
  const double k2 = k * k;
  const double k3 = k2 * k;
  const auto t0_floor = static_cast<std::uint64_t>(std::floor(params.T0));
  const PrimeTable primes(std::max<std::uint64_t>(t0_floor, 2));

  Lemma1Chain c;
  KahanSum log_f, log_k2;
  double min_margin = kInf;
  for (std::uint32_t p : primes.primes()) {
    if (p > params.T0) break;
    const double pd = p;
    const double f = f_at_prime(params, p);
    c.max_f = std::max(c.max_f, f);
    const double y = f / pd;
    const double x = k2 / pd;
    log_f += std::log1p(y);
    log_k2 += std::log1p(x);
    // (1+y)/(1+x) >= exp(y - x)  <=>  h(y) >= h(x) with h(u) = log1p(u) - u.
    min_margin = std::min(min_margin, (std::log1p(y) - y) - (std::log1p(x) - x));
  }
  c.log_f_product = log_f.value();
  c.log_k2_product = log_k2.value();

  const std::size_t terms = params.terms();
  KahanSum exponent, deficit;
  std::vector<double> log_sub;
  log_sub.push_back(-params.weight_A(0));
  for (std::size_t l = 1; l <= terms; ++l) {
    log_sub.push_back(-std::exp(params.log_weight_A[l] - params.log_a[l]));
    log_sub.push_back(-std::exp(params.log_weight_B[l] - params.log_b[l]));
  }
  c.log_subtraction = log_sum_exp(log_sub);
  for (std::size_t j = 0; j <= terms; ++j) {
    for (std::size_t l = 1; l <= terms; ++l) {
      const double weight = std::exp(2.0 * std::log(k) - params.log_a[j] - params.log_b[l]);
      if (weight == 0.0) continue;
      exponent += weight * (log_add_exp(params.log_weight_A[j], params.log_weight_B[l]) + 1.0);
      deficit += weight * prime_deficit_sum(primes, params.T0, params.alpha[j] + params.beta[l]).value;
    }
  }
  c.exponent_sum = exponent.value();
  c.deficit = deficit.value();

  // prod(1 + f/p) - S prod(1 + k^2/p), in logs.
  const double log_sub_term = c.log_subtraction + c.log_k2_product;
  c.log_mass_lower = c.log_f_product > log_sub_term
                         ? c.log_f_product + std::log1p(-std::exp(log_sub_term - c.log_f_product))
                         : -kInf;
  const double log_kmass = std::log(kernel.mass());
  c.log_final_bound = std::log(params.T) + log_kmass - 12.0 * k3 + c.log_k2_product;
  const double loglog_T = std::log(params.log_T);
  const double mertens = mertens_prime_sum(primes, params.T0);
  c.mertens_eps_log = k2 * std::min(0.0, mertens - loglog_T);
  c.log_mertens_bound = -2.0 * k3 + k2 * loglog_T + c.mertens_eps_log;
  c.log_lemma1_rhs = -15.0 * k3 + params.log_T + k2 * loglog_T;

  auto& a = c.audits;
  a.push_back(make_audit("lemma1.f_le_k2", c.max_f, k2));
  a.push_back(make_audit("lemma1.pointwise_exp_comparison", min_margin, 0.0, ">="));
  a.push_back(make_audit("lemma1.exponent_sum_le_k2_6_plus_log_20k3", c.exponent_sum,
                         k2 * (6.0 + std::log(params.weight_constant * k3))));
  a.push_back(make_audit("lemma1.exponent_sum_le_10k3", c.exponent_sum, 10.0 * k3));
  a.push_back(make_audit("lemma1.subtraction_le_log2_minus_A0", c.log_subtraction,
                         std::log(2.0) - params.weight_A(0), "<=", true));
  a.push_back(make_audit("lemma1.deficit_le_exponent_sum", c.deficit, c.exponent_sum));
  a.push_back(make_audit("lemma1.f_product_ge_k2_product_minus_deficit", c.log_f_product,
                         c.log_k2_product - c.deficit, ">=", true, 1e-12));
  a.push_back(make_audit("lemma1.mass_lower_ge_e^-12k3_k2_product", c.log_mass_lower, -12.0 * k3 + c.log_k2_product,
                         ">=", true));
  a.push_back(make_audit("lemma1.k2_product_ge_mertens_bound", c.log_k2_product, c.log_mertens_bound, ">=", true));
  a.push_back(make_audit("lemma1.kernel_mass_ge_1_minus_4theta", kernel.mass(), 1.0 - 4.0 * params.theta, ">="));
  a.push_back(make_audit("lemma1.final_bound_ge_lemma1_rhs", c.log_final_bound, c.log_lemma1_rhs, ">=", true));
  if (mass) {
    const double log_diag = std::log(params.T) + log_kmass + std::log(*mass);
    a.push_back(make_audit("lemma1.mass_ge_squarefree_lower", std::log(*mass), c.log_mass_lower, ">=", true, 1e-12));
    a.push_back(make_audit("lemma1.diagonal_ge_final_bound", log_diag, c.log_final_bound, ">=", true));
    a.push_back(make_audit("lemma1.diagonal_ge_e^-15k3_T_logT^k2", log_diag, c.log_lemma1_rhs, ">=", true));
  }
  return c;
}

SquarefreeCheck squarefree_lower_check(const ConstructionParams& params, std::size_t samples, std::uint64_t seed,
                                       std::uint64_t prime_limit) {
  SquarefreeCheck out;
  const auto bound = static_cast<std::uint64_t>(std::min(params.T0, static_cast<double>(prime_limit)));
  std::vector<std::uint64_t> primes;
  for (std::uint64_t p = 2; p <= bound; ++p) {
    bool prime = true;
    for (std::uint64_t d = 2; d * d <= p; ++d) prime = prime && (p % d != 0);
    if (prime) primes.push_back(p);
  }
  if (primes.size() > 20) throw ResourceLimit("squarefree_lower_check: too many primes for exact enumeration");
  out.primes_used = primes.size();
  KahanSum log_prod;
  for (std::uint64_t p : primes) log_prod += std::log1p(f_at_prime(params, p) / static_cast<double>(p));
  out.product_excess = std::expm1(log_prod.value());
  KahanSum direct;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << primes.size()); ++mask) {
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < primes.size(); ++i)
      if (mask >> i & 1) n *= primes[i];
    direct += f_squarefree(params, n) / static_cast<double>(n);
  }
  out.direct_excess = direct.value();
  out.audits.push_back(make_audit("squarefree.direct_sum_equals_product", out.direct_excess, out.product_excess,
                                  "==", false, 1e-12));

  // Pointwise device: prod m^{-alpha} n^{-beta} - S.
  std::vector<double> log_sub;
  log_sub.push_back(-params.weight_A(0));
  for (std::size_t l = 1; l <= params.terms(); ++l) {
    log_sub.push_back(-std::exp(params.log_weight_A[l] - params.log_a[l]));
    log_sub.push_back(-std::exp(params.log_weight_B[l] - params.log_b[l]));
  }
  const double log_s = log_sum_exp(log_sub);
  const std::size_t la = std::min(params.terms(), params.active_A + 1);
  const std::size_t lb = std::min(params.terms(), params.active_B + 1);
  std::mt19937_64 rng(seed);
  auto term = [](double shift, std::uint64_t m) { return m > 1 ? -shift * std::log(static_cast<double>(m)) : 0.0; };
  std::size_t below_one = 0, negative_when_violated = 0, violated = 0;
  const auto T_floor = static_cast<std::uint64_t>(std::floor(params.T));
  for (std::size_t s = 0; s < samples + 2; ++s) {
    std::uint64_t m0 = 1;
    std::vector<std::uint64_t> ma(la + 1, 1), nb(lb + 1, 1);
    if (s == 1) {
      m0 = T_floor + 1;
    } else if (s >= 2) {
      m0 = std::uniform_int_distribution<std::uint64_t>(1, 2 * T_floor)(rng);
      for (std::size_t l = 1; l <= la; ++l)
        ma[l] = std::uniform_int_distribution<std::uint64_t>(1, 2 * params.cutoff_A(l) + 1)(rng);
      for (std::size_t l = 1; l <= lb; ++l)
        nb[l] = std::uniform_int_distribution<std::uint64_t>(1, 2 * params.cutoff_B(l) + 1)(rng);
    }
    double lp = term(params.alpha[0], m0);
    bool bad = static_cast<double>(m0) > params.T;
    for (std::size_t l = 1; l <= la; ++l) {
      lp += term(params.alpha[l], ma[l]);
      bad = bad || ma[l] > params.cutoff_A(l);
    }
    for (std::size_t l = 1; l <= lb; ++l) {
      lp += term(params.beta[l], nb[l]);
      bad = bad || nb[l] > params.cutoff_B(l);
    }
    // prod <= 1 and S > 0, so the device is below 1.
    below_one += lp <= 0.0;
    if (bad) {
      ++violated;
      negative_when_violated += lp < log_s;
    }
  }
  out.tuples = samples + 2;
  out.violations_sampled = violated;
  out.audits.push_back(make_audit("squarefree.device_below_one", static_cast<double>(below_one),
                                  static_cast<double>(out.tuples), "=="));
  out.audits.push_back(make_audit("squarefree.device_negative_when_cutoff_violated",
                                  static_cast<double>(negative_when_violated), static_cast<double>(violated), "=="));
  return out;
}

HolderChain holder_chain(const ConstructionParams& params, const IntegrandSamples& samples) {
  const std::size_t n = samples.grid.size();
  const double k = params.k_value;
  HolderChain out;
  CompensatedSum<cdouble> lhs;
  KahanSum mass, zeta_moment;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = quad_weight(samples.grid, i) * samples.weight[i];
    lhs += w * samples.zeta[i] * samples.product[i];
    mass += w;
    zeta_moment += w * std::exp(k * std::log(std::norm(samples.zeta[i])));
  }
  out.lhs = std::abs(lhs.value());
  out.factors.push_back({"zeta", 2.0 * k, zeta_moment.value()});

  auto add_factor = [&](const std::string& name, double exponent, const std::vector<cdouble>& values) {
    KahanSum acc;
    for (std::size_t i = 0; i < n; ++i)
      acc += quad_weight(samples.grid, i) * samples.weight[i] * std::pow(std::norm(values[i]), 0.5 * exponent);
    out.factors.push_back({name, exponent, acc.value()});
  };
  Rational total = 1 / (2 * params.k);
  for (std::size_t l = 1; l <= params.active_A; ++l) {
    add_factor("A" + std::to_string(l), 2.0 * params.a[l], samples.poly_A[l - 1]);
    total += Rational(1, 2 * params.exponents.a.term(l));
  }
  for (std::size_t l = 1; l <= params.active_B; ++l) {
    add_factor("B" + std::to_string(l), 2.0 * params.b[l], samples.poly_B[l - 1]);
    total += Rational(1, 2 * params.exponents.b.term(l));
  }
  const Rational inactive =
      (params.exponents.a.remainder(params.active_A) + params.exponents.b.remainder(params.active_B)) / 2;
  total += inactive;
  out.exponent_total = to_string(total);
  out.inactive_mass = to_double(inactive);

  double log_rhs = out.inactive_mass * std::log(mass.value());
  for (const auto& f : out.factors) log_rhs += std::log(f.integral) / f.exponent;
  out.rhs = std::exp(log_rhs);
  out.ratio = out.lhs / out.rhs;
  out.audits.push_back(make_audit("holder.exponents_sum_to_one", total == 1 ? 1.0 : 0.0, 1.0, "=="));
  out.audits.push_back(make_audit("holder.lhs_le_rhs", out.lhs, out.rhs, "<=", false, 1e-12));
  return out;
}

TheoremBound theorem_bound(const ConstructionParams& params, double M_k, double abs_I) {
  const double k = params.k_value;
  TheoremBound t;
  t.log_cap = params.log_T + k * k * std::log(params.log_T);
  t.log_M = std::log(M_k);
  t.log_I = abs_I > 0.0 ? std::log(abs_I) : -kInf;
  t.log_middle = abs_I > 0.0 ? 2.0 * k * t.log_I - (2.0 * k - 1.0) * t.log_cap : -kInf;
  t.log_rhs = -30.0 * k * k * k * k + t.log_cap;
  t.audits.push_back(make_audit("theorem.moment_ge_I^2k_over_cap^(2k-1)", t.log_M, t.log_middle, ">=", true));
  t.audits.push_back(make_audit("theorem.I^2k_over_cap^(2k-1)_ge_e^-30k4_T_logT^k2", t.log_middle, t.log_rhs,
                                ">=", true));
  t.audits.push_back(make_audit("theorem.moment_ge_e^-30k4_T_logT^k2", t.log_M, t.log_rhs, ">=", true));
  return t;
}

}  // namespace zmoments
