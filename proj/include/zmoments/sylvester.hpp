#ifndef ZMOMENTS_SYLVESTER_HPP
#define ZMOMENTS_SYLVESTER_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace zmoments {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Parses "3/2", "1.5", "-0.25", "2e-3" as an exact rational.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

// Natural log of a positive big integer, valid beyond the double range.
double log_big(const BigInt& v);
double to_double(const Rational& q);

/// Greedy expansion alpha = sum 1/s_n where each s_n is the least integer
/// strictly larger than the reciprocal of the current remainder.
class SylvesterSequence {
 public:
  SylvesterSequence() = default;
  SylvesterSequence(Rational alpha, std::vector<BigInt> terms, std::vector<Rational> remainders);

  const Rational& alpha() const { return alpha_; }
  std::size_t size() const { return terms_.size(); }
  // 1-based accessors, matching s_1, s_2, ...
  const BigInt& term(std::size_t n) const { return terms_.at(n - 1); }
  // r_n = alpha - sum_{i<=n} 1/s_i; r_0 = alpha.
  const Rational& remainder(std::size_t n) const;
  const std::vector<BigInt>& terms() const { return terms_; }

  double log_term(std::size_t n) const { return log_terms_.at(n - 1); }
  // s_n as a double; +inf once the term leaves the double range.
  double term_value(std::size_t n) const { return values_.at(n - 1); }
  double reciprocal(std::size_t n) const { return reciprocals_.at(n - 1); }

 private:
  Rational alpha_;
  std::vector<BigInt> terms_;
  std::vector<Rational> remainders_;
  std::vector<double> log_terms_;
  std::vector<double> values_;
  std::vector<double> reciprocals_;
};

inline constexpr std::size_t kDefaultSylvesterTerms = 12;

SylvesterSequence sylvester(const Rational& alpha, std::size_t count);

/// a_l = s_l(1 - 1/k) and b_l = s_l(1) for a moment parameter k > 1.
struct ExponentPair {
  Rational k;
  SylvesterSequence a;
  SylvesterSequence b;
};

ExponentPair construction_exponents(const Rational& k, std::size_t count = kDefaultSylvesterTerms);

// floor(x^{1/s}) for x >= 1, i.e. the largest n with n^s <= x (log-space,
// with a relative guard so exact powers such as 2^43 land on the boundary).
std::uint64_t root_floor(double x, double s);
std::uint64_t root_floor_log(double log_x, double s);

// Largest L with T0^{1/s_L} >= 2; 0 when even s_1 fails.
std::size_t active_length(double t0, const SylvesterSequence& seq);
std::size_t active_length_log(double log_t0, const SylvesterSequence& seq);

struct TailLogSum {
  double partial = 0.0;     // sum over available terms of log(1 + s^2) / s
  double tail_bound = 0.0;  // bound on the omitted terms
  double total() const { return partial + tail_bound; }
};

// sum_l log(1 + s_l^2) / s_l; requires at least six terms.
TailLogSum tail_log_sum(const SylvesterSequence& seq);

// log(1 + s^2) / s evaluated from log s, safe for astronomically large s.
double log1p_square_over(double log_s);

}  // namespace zmoments

#endif  // ZMOMENTS_SYLVESTER_HPP
