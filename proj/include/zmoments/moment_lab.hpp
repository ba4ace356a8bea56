#ifndef ZMOMENTS_MOMENT_LAB_HPP
#define ZMOMENTS_MOMENT_LAB_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zmoments/construction.hpp"
#include "zmoments/kernel.hpp"
#include "zmoments/numeric.hpp"

namespace zmoments {

/// One recorded inequality. With log_space set, lhs and rhs are natural logs.
struct Audit {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string relation = "<=";
  bool log_space = false;
  bool pass = false;
  double slack_log = 0.0;  // log(rhs/lhs) for "<=", log(lhs/rhs) for ">="
};

// Builds an audit for lhs <= rhs (or >=) with an optional relative tolerance.
Audit make_audit(std::string name, double lhs, double rhs, std::string relation = "<=",
                 bool log_space = false, double rel_tol = 0.0);

inline constexpr double kDefaultStep = 0.01;
inline constexpr double kMaxStep = 0.05;

struct MomentIntegral {
  double value = 0.0;
  double error = 0.0;
  UniformGrid grid;
};

// M_k(T) = int_0^T |zeta(1/2+it)|^{2k} dt by Simpson on a uniform grid.
MomentIntegral moment_Mk(double k, double T, double step = kDefaultStep);

struct MeanSquare {
  double lhs = 0.0;        // quadrature of int K(t/T) |P(1/2+it)|^2 dt
  double lhs_error = 0.0;
  double rhs = 0.0;        // T sum c(m) c(n) / sqrt(mn) K^(T log(m/n))
};

MeanSquare mean_square_identity(std::span<const double> coeffs, double T, const Kernel& kernel,
                                double step = kMaxStep);

// T sum_{m,n} x(m) y(n) / sqrt(mn) K^(T log(m/n)), restricted to pairs inside
// the tabulated range of K^; the omitted pairs are bounded in `tail`.
struct PairSum {
  cdouble value;
  double tail = 0.0;
};
PairSum kernel_pair_sum(std::span<const double> x, std::span<const double> y, double T, const Kernel& kernel);

// T sum_{m != n} |x(m) y(n)| / sqrt(mn) B(T |log(m/n)|), with B the audited
// decay envelope of K^.
double offdiagonal_envelope_bound(std::span<const double> x, std::span<const double> y, double T,
                                  const Kernel& kernel);

enum class PolySide { A, B };

struct Lemma2Values {
  PolySide side = PolySide::A;
  std::size_t ell = 0;
  unsigned exponent = 0;
  std::optional<double> numeric;   // quadrature, when 2a <= 8
  double numeric_error = 0.0;
  double diagonal = 0.0;           // T K^(0) sum a(n)^2 / n
  double offdiag_bound = 0.0;      // pairwise envelope bound
  double offdiag_exact = 0.0;      // identity value minus the diagonal
  double crude_bound = 0.0;        // C_4 T T^{-4 theta} (sum d_k(n)/sqrt n)^2
  double divisor_diagonal = 0.0;   // T sum_{n <= T0} d_k(n)^2 / n
  double cap = 0.0;                // T (log T)^{k^2}
  std::vector<Audit> audits;
};

inline constexpr unsigned kMaxQuadratureExponent = 4;  // numeric only for 2a <= 8

Lemma2Values lemma2_bound(const ConstructionParams& params, const Kernel& kernel, PolySide side, std::size_t ell,
                          double step = kDefaultStep);

/// Samples of the I(T) integrand on a grid covering the support of K(t/T).
struct IntegrandSamples {
  UniformGrid grid;
  std::vector<double> weight;                 // K(t/T)
  std::vector<cdouble> zeta;
  std::vector<std::vector<cdouble>> poly_A;  // active A_l(1/2+it)
  std::vector<std::vector<cdouble>> poly_B;  // active B_l(1/2+it)
  std::vector<cdouble> product;               // prod A_l * conj(prod B_l)
};

IntegrandSamples sample_integrand(const ConstructionParams& params, const Kernel& kernel, double step);

struct IResult {
  cdouble value;
  double error = 0.0;
  double abs_integral = 0.0;        // int K |prod A conj(prod B)|
  double truncation_constant = 0.0;  // audited sup sqrt(T) |zeta_T - zeta|
  double truncation_budget = 0.0;   // constant * T^{-1/2} * abs_integral
  std::optional<cdouble> truncated_quadrature;  // zeta replaced by its length-T sum
  double truncated_error = 0.0;
  cdouble truncated_exact;          // T sum alpha(m) beta(n)/sqrt(mn) K^(T log(m/n))
  double truncated_exact_tail = 0.0;
};

struct IOptions {
  bool truncated_quadrature = true;
  std::size_t truncation_samples = 200;
};

IResult compute_I(const ConstructionParams& params, const Kernel& kernel, const IntegrandSamples& samples,
                  const AlphaBeta& coefficients, const IOptions& options = {});

struct DiagonalI {
  double value = 0.0;           // T K^(0) sum_{n <= T0} alpha(n) beta(n) / n
  double mass = 0.0;            // sum alpha(n) beta(n) / n
  double offdiag_bound = 0.0;   // pairwise envelope bound
  double crude_bound = 0.0;     // C_4 T^{1 - 4 theta} (sum_m d_k(m)/sqrt m)(sum_n d_k(n)/sqrt n)
  cdouble offdiag_exact;        // identity value minus the diagonal
  double offdiag_exact_tail = 0.0;
};

DiagonalI diagonal_I(const ConstructionParams& params, const Kernel& kernel, const AlphaBeta& coefficients);

// Compares the quadrature of I(T) with the diagonal model: off-diagonal bound,
// quadrature error and the audited truncation budget.
std::vector<Audit> diagonal_model_audits(const ConstructionParams& params, const Kernel& kernel, const IResult& I,
                                         const DiagonalI& diagonal);

/// Links of the lower-bound chain, all in natural-log form.
struct Lemma1Chain {
  double log_f_product = 0.0;        // (i)  sum log(1 + f(p)/p)
  double log_k2_product = 0.0;       // (ii) sum log(1 + k^2/p)
  double exponent_sum = 0.0;         // (iii) sum k^2/(a_j b_l) (log(W_A[j] + W_B[l]) + 1)
  double log_subtraction = 0.0;      // (iv) log(e^{-A_0} + sum(e^{-A_l/a_l} + e^{-B_l/b_l}))
  double deficit = 0.0;              // sum_p (k^2 - f(p))/p via prime deficit sums
  double log_mass_lower = 0.0;       // log(prod(1 + f/p) - S prod(1 + k^2/p))
  double log_final_bound = 0.0;      // (v) log(T K^(0) e^{-12k^3} prod(1 + k^2/p))
  double log_mertens_bound = 0.0;    // -2k^3 + k^2 log log T + log(1 - eps_T)
  double mertens_eps_log = 0.0;      // log(1 - eps_T)
  double log_lemma1_rhs = 0.0;       // -15 k^3 + log T + k^2 log log T
  double max_f = 0.0;
  std::vector<Audit> audits;
};

// `mass` = sum alpha(n) beta(n) / n, when available, adds the audits that
// compare the computed diagonal against the chain.
Lemma1Chain lemma1_lower(const ConstructionParams& params, const Kernel& kernel,
                         std::optional<double> mass = {});

struct SquarefreeCheck {
  double product_excess = 0.0;  // prod(1 + f(p)/p) - 1
  double direct_excess = 0.0;   // sum over squarefree n > 1 of f(n)/n
  std::size_t primes_used = 0;
  std::size_t tuples = 0;
  std::size_t violations_sampled = 0;
  std::vector<Audit> audits;
};

// (a) exact product identity over primes <= min(T0, prime_limit) and (b) the
// pointwise device on `samples` random tuples drawn with `seed`.
SquarefreeCheck squarefree_lower_check(const ConstructionParams& params, std::size_t samples,
                                       std::uint64_t seed = 20240601, std::uint64_t prime_limit = 40);

struct HolderFactor {
  std::string name;      // "zeta", "A1", "B2", ...
  double exponent = 0.0;  // p with the factor raised to 1/p
  double integral = 0.0;  // discrete int K |f|^p
};

struct HolderChain {
  double lhs = 0.0;  // |I| on the grid
  double rhs = 0.0;
  double ratio = 0.0;
  double inactive_mass = 0.0;
  std::string exponent_total;  // exact rational, must be "1"
  std::vector<HolderFactor> factors;
  std::vector<Audit> audits;
};

HolderChain holder_chain(const ConstructionParams& params, const IntegrandSamples& samples);

struct TheoremBound {
  double log_M = 0.0;
  double log_I = 0.0;
  double log_cap = 0.0;             // log(T (log T)^{k^2})
  double log_middle = 0.0;          // 2k log|I| - (2k-1) log cap
  double log_rhs = 0.0;             // -30 k^4 + log T + k^2 log log T
  std::vector<Audit> audits;
};

TheoremBound theorem_bound(const ConstructionParams& params, double M_k, double abs_I);

}  // namespace zmoments

#endif  // ZMOMENTS_MOMENT_LAB_HPP
