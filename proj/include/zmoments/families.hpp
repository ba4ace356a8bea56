#ifndef ZMOMENTS_FAMILIES_HPP
#define ZMOMENTS_FAMILIES_HPP

#include <cstdint>
#include <vector>

#include "zmoments/numeric.hpp"
#include "zmoments/sylvester.hpp"

namespace zmoments {

inline constexpr std::uint64_t kFamilyBudget = 10'000;
inline constexpr double kFamilyTheta = 0.2;

bool is_prime_u64(std::uint64_t n);
std::uint64_t primitive_root(std::uint64_t q);

/// Characters mod a prime q: chi_j(g^i) = e(j i / (q-1)), chi_j(n) = 0 when q | n.
/// Values are tracked as exact exponents in Z/(q-1).
class CharacterTable {
 public:
  explicit CharacterTable(std::uint64_t q);

  std::uint64_t q() const { return q_; }
  std::uint64_t generator() const { return g_; }
  std::uint64_t count() const { return q_ - 1; }
  bool principal(std::uint64_t j) const { return j % (q_ - 1) == 0; }
  std::uint64_t conjugate(std::uint64_t j) const { return (q_ - 1 - j % (q_ - 1)) % (q_ - 1); }
  // Discrete log base g; -1 when q | n.
  std::int64_t index(std::uint64_t n) const { return ind_[n % q_]; }
  // Exponent e with chi_j(n) = e(e / (q-1)); -1 when q | n.
  std::int64_t exponent(std::uint64_t j, std::uint64_t n) const;
  cdouble value(std::uint64_t j, std::uint64_t n) const;
  // Exact check of sum_n chi_i(n) conj(chi_j(n)) = (q-1)[i = j] via integer
  // exponent histograms.
  bool orthogonal(std::uint64_t i, std::uint64_t j) const;

 private:
  std::uint64_t q_;
  std::uint64_t g_;
  std::vector<std::int64_t> ind_;
  std::vector<cdouble> roots_;  // e(e/(q-1))
};

// Hurwitz zeta(1/2, x) for x in (0, 1], Euler-Maclaurin after `shift` terms.
double hurwitz_half(double x, int shift = 8);

// L(1/2, chi_j) = q^{-1/2} sum_a chi_j(a) zeta(1/2, a/q).
cdouble L_half(const CharacterTable& table, std::uint64_t j);
// All L(1/2, chi_j), j = 0..q-2 (entry 0, the principal character, is left 0).
std::vector<cdouble> L_half_all(const CharacterTable& table);

struct FamilyRow {
  std::int64_t label = 0;  // j for characters, d for discriminants
  cdouble L;
  cdouble product;         // polynomial product
  cdouble summand;
};

struct FamilyPolynomials {
  // Coefficients d_{k/a}(n) of each active polynomial, dense from n = 1 (index 0 unused).
  std::vector<std::vector<double>> A;
  std::vector<std::vector<double>> B;
  std::vector<unsigned> a_exponents;
  std::vector<unsigned> b_exponents;
};

// Active polynomials with cutoffs floor(Q^{theta / a_l}) >= 2.
FamilyPolynomials family_polynomials(const Rational& k, double Q, double theta, bool with_B);

struct IqResult {
  std::uint64_t q = 0;
  cdouble value;
  double scale = 0.0;                  // sum of |summand|
  double diagonal_prediction = 0.0;   // (q-2) sum_n (1*alpha)(n) beta(n) / n
  cdouble difference;
  std::vector<FamilyRow> rows;
};

IqResult I_q(std::uint64_t q, const Rational& k, double theta = kFamilyTheta);

int kronecker(std::int64_t d, std::uint64_t n);
bool is_fundamental_discriminant(std::int64_t d);
// All fundamental discriminants with |d| <= X, excluding d = 1, ascending.
std::vector<std::int64_t> fundamental_discriminants(std::uint64_t X);

struct QuadraticFamily {
  std::uint64_t X = 0;
  std::vector<std::int64_t> discriminants;
  int chi(std::size_t i, std::uint64_t n) const { return kronecker(discriminants.at(i), n); }
};

QuadraticFamily quadratic_family(std::uint64_t X);

// L(1/2, chi_d) through the primitive character mod |d|.
double L_half_quadratic(std::int64_t d);

struct IxResult {
  std::uint64_t X = 0;
  double value = 0.0;
  double scale = 0.0;
  std::vector<FamilyRow> rows;
};

IxResult I_X(std::uint64_t X, const Rational& k, double theta = kFamilyTheta);

}  // namespace zmoments

#endif  // ZMOMENTS_FAMILIES_HPP
