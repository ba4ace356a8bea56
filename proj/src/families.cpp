#include "zmoments/families.hpp"

#include <array>
#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <cmath>
#include <numeric>
#include <string>

#include "zmoments/errors.hpp"
#include "zmoments/multiplicative.hpp"

namespace zmoments {

namespace {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  base %= m;
  while (e > 0) {
    if (e & 1) r = mul_mod(r, base, m);
    base = mul_mod(base, base, m);
    e >>= 1;
  }
  return r;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

bool squarefree(std::uint64_t n) {
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % (p * p) == 0) return false;
  return true;
}

constexpr int kBernoulliTerms = 30;

const std::array<double, kBernoulliTerms + 1>& bernoulli_table() {
  static const auto table = [] {
    std::array<double, kBernoulliTerms + 1> t{};
    for (int j = 1; j <= kBernoulliTerms; ++j)
      t[j] = boost::math::bernoulli_b2n<double>(j) / boost::math::factorial<double>(2 * j);
    return t;
  }();
  return table;
}

std::uint64_t cutoff(double log_q, double theta, double a) {
  return root_floor_log(theta * log_q, a);
}

cdouble evaluate(const std::vector<double>& coeffs, const auto& chi) {
  CompensatedSum<cdouble> acc;
  for (std::size_t n = 1; n < coeffs.size(); ++n) {
    const cdouble c = chi(n);
    if (c != cdouble(0.0, 0.0)) acc += coeffs[n] / std::sqrt(static_cast<double>(n)) * c;
  }
  return acc.value();
}

std::vector<double> dirichlet_convolve(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> out((x.size() - 1) * (y.size() - 1) + 1, 0.0);
  for (std::size_t i = 1; i < x.size(); ++i)
    for (std::size_t j = 1; j < y.size(); ++j) out[i * j] += x[i] * y[j];
  return out;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

std::uint64_t primitive_root(std::uint64_t q) {
  if (!is_prime_u64(q)) throw InvalidArgument("primitive_root: modulus must be prime");
  if (q == 2) return 1;
  const auto factors = prime_factors(q - 1);
  for (std::uint64_t g = 2; g < q; ++g) {
    bool ok = true;
    for (std::uint64_t r : factors) ok = ok && pow_mod(g, (q - 1) / r, q) != 1;
    if (ok) return g;
  }
  throw InvalidArgument("primitive_root: none found");
}

CharacterTable::CharacterTable(std::uint64_t q) : q_(q) {
  if (q < 3 || !is_prime_u64(q)) throw InvalidArgument("CharacterTable: modulus must be a prime >= 3");
  if (q > kFamilyBudget) throw ResourceLimit("CharacterTable: q exceeds the family budget " + std::to_string(kFamilyBudget));
  g_ = primitive_root(q);
  ind_.assign(q, -1);
  std::uint64_t x = 1;
  for (std::uint64_t i = 0; i + 1 < q; ++i) {
    ind_[x] = static_cast<std::int64_t>(i);
    x = x * g_ % q;
  }
  roots_.resize(q - 1);
  for (std::uint64_t e = 0; e + 1 < q; ++e)
    roots_[e] = std::polar(1.0, kTwoPi * static_cast<double>(e) / static_cast<double>(q - 1));
}

std::int64_t CharacterTable::exponent(std::uint64_t j, std::uint64_t n) const {
  const std::int64_t i = index(n);
  if (i < 0) return -1;
  return static_cast<std::int64_t>(mul_mod(j % (q_ - 1), static_cast<std::uint64_t>(i), q_ - 1));
}

cdouble CharacterTable::value(std::uint64_t j, std::uint64_t n) const {
  const std::int64_t e = exponent(j, n);
  return e < 0 ? cdouble(0.0, 0.0) : roots_[static_cast<std::size_t>(e)];
}

bool CharacterTable::orthogonal(std::uint64_t i, std::uint64_t j) const {
  const std::uint64_t m = q_ - 1;
  // chi_i conj(chi_j) = chi_{i-j}; its values over the units form a histogram
  // on Z/m that must be uniform on the subgroup generated by d = i - j.
  const std::uint64_t d = (i % m + m - j % m) % m;
  std::vector<std::uint64_t> hist(m, 0);
  for (std::uint64_t n = 1; n < q_; ++n) ++hist[static_cast<std::size_t>(exponent(d, n))];
  if (d == 0) return hist[0] == m;  // sum equals q - 1
  const std::uint64_t step = std::gcd(d, m);
  for (std::uint64_t e = 0; e < m; ++e) {
    const std::uint64_t expected = e % step == 0 ? step : 0;
    if (hist[e] != expected) return false;
  }
  return m / step > 1;  // a nontrivial subgroup's roots sum to zero
}

double hurwitz_half(double x, int shift) {
  if (!(x > 0.0 && x <= 1.0)) throw InvalidArgument("hurwitz_half: x must lie in (0, 1]");
  if (shift < 4) throw InvalidArgument("hurwitz_half: shift must be at least 4");
  double acc = 0.0;
  for (int n = shift - 1; n >= 0; --n) acc += 1.0 / std::sqrt(n + x);
  const double y = shift + x;
  const double root = std::sqrt(y);
  acc += -2.0 * root + 0.5 / root;
  const auto& b = bernoulli_table();
  double poch = 0.5;             // (s)_{2j-1}
  double power = 1.0 / (root * y);  // y^{-s-1}
  double previous = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= kBernoulliTerms; ++j) {
    const double term = b[j] * poch * power;
    if (std::abs(term) >= previous || std::abs(term) < 1e-18 * std::abs(acc)) break;
    acc += term;
    previous = std::abs(term);
    poch *= (0.5 + 2.0 * j - 1.0) * (0.5 + 2.0 * j);
    power /= y * y;
  }
  return acc;
}

std::vector<cdouble> L_half_all(const CharacterTable& table) {
  const std::uint64_t q = table.q();
  const std::uint64_t m = q - 1;
  // Hurwitz values ordered by discrete log: h[i] = zeta(1/2, g^i / q).
  std::vector<double> h(m);
  std::uint64_t x = 1;
  for (std::uint64_t i = 0; i < m; ++i) {
    h[i] = hurwitz_half(static_cast<double>(x) / static_cast<double>(q));
    x = x * table.generator() % q;
  }
  std::vector<cdouble> roots(m);
  for (std::uint64_t e = 0; e < m; ++e)
    roots[e] = std::polar(1.0, kTwoPi * static_cast<double>(e) / static_cast<double>(m));
  const double norm = 1.0 / std::sqrt(static_cast<double>(q));
  std::vector<cdouble> out(m, cdouble(0.0, 0.0));
  parallel_blocks(m, 64, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t j = begin; j < end; ++j) {
      if (j == 0) continue;
      CompensatedSum<cdouble> acc;
      std::uint64_t e = 0;
      for (std::uint64_t i = 0; i < m; ++i) {
        acc += h[i] * roots[e];
        e += j;
        if (e >= m) e -= m;
      }
      out[j] = norm * acc.value();
    }
  });
  return out;
}

cdouble L_half(const CharacterTable& table, std::uint64_t j) {
  if (table.principal(j)) throw InvalidArgument("L_half: the principal character has a pole");
  const std::uint64_t q = table.q();
  CompensatedSum<cdouble> acc;
  for (std::uint64_t a = 1; a < q; ++a)
    acc += hurwitz_half(static_cast<double>(a) / static_cast<double>(q)) * table.value(j, a);
  return acc.value() / std::sqrt(static_cast<double>(q));
}

FamilyPolynomials family_polynomials(const Rational& k, double Q, double theta, bool with_B) {
  if (k <= 1) throw InvalidArgument("family polynomials: k must exceed 1");
  if (!(theta > 0.0 && theta < 1.0)) throw InvalidArgument("family polynomials: theta must lie in (0, 1)");
  const ExponentPair ex = construction_exponents(k);
  const double kv = to_double(k);
  const double log_q = std::log(Q);
  FamilyPolynomials out;
  auto collect = [&](const SylvesterSequence& seq, std::vector<std::vector<double>>& polys,
                     std::vector<unsigned>& exps) {
    for (std::size_t l = 1; l <= seq.size(); ++l) {
      if (seq.log_term(l) > 40.0) break;
      const double a = seq.term_value(l);
      const std::uint64_t n = cutoff(log_q, theta, a);
      if (n < 2) break;
      const DivisorTable table = sieve_divisor(kv / a, n);
      polys.emplace_back(table.values().begin(), table.values().end());
      exps.push_back(static_cast<unsigned>(a));
    }
  };
  collect(ex.a, out.A, out.a_exponents);
  if (with_B) collect(ex.b, out.B, out.b_exponents);
  return out;
}

IqResult I_q(std::uint64_t q, const Rational& k, double theta) {
  if (q > kFamilyBudget) throw ResourceLimit("I_q: q exceeds the family budget " + std::to_string(kFamilyBudget));
  const CharacterTable table(q);
  const FamilyPolynomials polys = family_polynomials(k, static_cast<double>(q), theta, true);
  const std::vector<cdouble> L = L_half_all(table);

  IqResult out;
  out.q = q;
  out.rows.resize(q - 2);
  parallel_blocks(q - 2, 16, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t r = begin; r < end; ++r) {
      const std::uint64_t j = r + 1;
      cdouble product(1.0, 0.0);
      for (const auto& A : polys.A) product *= evaluate(A, [&](std::uint64_t n) { return table.value(j, n); });
      for (const auto& B : polys.B)
        product *= evaluate(B, [&](std::uint64_t n) { return std::conj(table.value(j, n)); });
      out.rows[r] = {static_cast<std::int64_t>(j), L[j], product, L[j] * product};
    }
  });
  CompensatedSum<cdouble> total;
  KahanSum scale;
  for (const auto& row : out.rows) {
    total += row.summand;
    scale += std::abs(row.summand);
  }
  out.value = total.value();
  out.scale = scale.value();

  std::vector<double> alpha{0.0, 1.0}, beta{0.0, 1.0};
  for (const auto& A : polys.A) alpha = dirichlet_convolve(alpha, A);
  for (const auto& B : polys.B) beta = dirichlet_convolve(beta, B);
  KahanSum diag;
  for (std::size_t n = 1; n < beta.size(); ++n) {
    if (beta[n] == 0.0) continue;
    double one_star_alpha = 0.0;
    for (std::size_t d = 1; d <= n && d < alpha.size(); ++d)
      if (n % d == 0) one_star_alpha += alpha[d];
    diag += one_star_alpha * beta[n] / static_cast<double>(n);
  }
  out.diagonal_prediction = static_cast<double>(q - 2) * diag.value();
  out.difference = out.value - out.diagonal_prediction;
  return out;
}

int kronecker(std::int64_t d, std::uint64_t n) {
  if (n == 0) return (d == 1 || d == -1) ? 1 : 0;
  int result = 1;
  while (n % 2 == 0) {
    n /= 2;
    if (d % 2 == 0) return 0;
    const std::int64_t r = ((d % 8) + 8) % 8;
    if (r == 3 || r == 5) result = -result;
  }
  if (n == 1) return result;
  // Jacobi symbol (a / n) for odd n.
  std::uint64_t a = static_cast<std::uint64_t>(((d % static_cast<std::int64_t>(n)) + static_cast<std::int64_t>(n)) %
                                               static_cast<std::int64_t>(n));
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const std::uint64_t r = n % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

bool is_fundamental_discriminant(std::int64_t d) {
  if (d == 0 || d == 1) return false;
  const std::int64_t r = ((d % 4) + 4) % 4;
  const auto abs_d = static_cast<std::uint64_t>(d < 0 ? -d : d);
  if (r == 1) return squarefree(abs_d);
  if (r != 0) return false;
  const std::int64_t m = d / 4;
  const std::int64_t rm = ((m % 4) + 4) % 4;
  return (rm == 2 || rm == 3) && squarefree(static_cast<std::uint64_t>(m < 0 ? -m : m));
}

std::vector<std::int64_t> fundamental_discriminants(std::uint64_t X) {
  std::vector<std::int64_t> out;
  const auto x = static_cast<std::int64_t>(X);
  for (std::int64_t d = -x; d <= x; ++d)
    if (is_fundamental_discriminant(d)) out.push_back(d);
  return out;
}

QuadraticFamily quadratic_family(std::uint64_t X) {
  if (X > kFamilyBudget) throw ResourceLimit("quadratic_family: X exceeds the family budget");
  return {X, fundamental_discriminants(X)};
}

double L_half_quadratic(std::int64_t d) {
  if (!is_fundamental_discriminant(d)) throw InvalidArgument("L_half_quadratic: d is not a fundamental discriminant");
  const auto q = static_cast<std::uint64_t>(d < 0 ? -d : d);
  KahanSum acc;
  for (std::uint64_t a = 1; a < q; ++a) {
    const int c = kronecker(d, a);
    if (c != 0) acc += c * hurwitz_half(static_cast<double>(a) / static_cast<double>(q));
  }
  return acc.value() / std::sqrt(static_cast<double>(q));
}

IxResult I_X(std::uint64_t X, const Rational& k, double theta) {
  const QuadraticFamily family = quadratic_family(X);
  const FamilyPolynomials polys = family_polynomials(k, static_cast<double>(std::max<std::uint64_t>(X, 2)), theta, false);
  IxResult out;
  out.X = X;
  out.rows.resize(family.discriminants.size());
  parallel_blocks(out.rows.size(), 16, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t i = begin; i < end; ++i) {
      const std::int64_t d = family.discriminants[i];
      const double L = L_half_quadratic(d);
      double product = 1.0;
      for (const auto& A : polys.A)
        product *= evaluate(A, [&](std::uint64_t n) { return cdouble(kronecker(d, n), 0.0); }).real();
      out.rows[i] = {d, cdouble(L, 0.0), cdouble(product, 0.0), cdouble(L * product, 0.0)};
    }
  });
  KahanSum total, scale;
  for (const auto& row : out.rows) {
    total += row.summand.real();
    scale += std::abs(row.summand.real());
  }
  out.value = total.value();
  out.scale = scale.value();
  return out;
}

}  // namespace zmoments
