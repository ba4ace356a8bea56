#include "zmoments/sylvester.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "zmoments/errors.hpp"

namespace zmoments {

namespace mp = boost::multiprecision;

Rational parse_rational(std::string_view text) {
  auto fail = [&] { throw InvalidArgument("not a rational number: '" + std::string(text) + "'"); };
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) fail();

  if (auto slash = s.find('/'); slash != std::string::npos) {
    const Rational num = parse_rational(s.substr(0, slash));
    const Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) fail();
    return num / den;
  }

  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = (s[pos++] == '-');
  BigInt digits = 0;
  long long scale = 0;
  bool any_digit = false;
  bool seen_point = false;
  for (; pos < s.size(); ++pos) {
    const char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = digits * 10 + (c - '0');
      any_digit = true;
      if (seen_point) --scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) fail();
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') fail();
    ++pos;
    std::size_t used = 0;
    long long exponent = 0;
    try {
      exponent = std::stoll(s.substr(pos), &used);
    } catch (const std::exception&) {
      fail();
    }
    if (used != s.size() - pos || std::llabs(exponent) > 4000) fail();
    scale += exponent;
  }
  Rational value(digits);
  const BigInt ten_power = mp::pow(BigInt(10), static_cast<unsigned>(std::llabs(scale)));
  if (scale >= 0)
    value *= ten_power;
  else
    value /= ten_power;
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& q) {
  if (mp::denominator(q) == 1) return mp::numerator(q).str();
  return mp::numerator(q).str() + "/" + mp::denominator(q).str();
}

double log_big(const BigInt& v) {
  if (v <= 0) throw InvalidArgument("log_big: argument must be positive");
  const auto bits = mp::msb(v);
  if (bits < 1000) return std::log(v.convert_to<double>());
  const auto shift = bits - 60;
  const BigInt top = v >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

SylvesterSequence::SylvesterSequence(Rational alpha, std::vector<BigInt> terms,
                                     std::vector<Rational> remainders)
    : alpha_(std::move(alpha)), terms_(std::move(terms)), remainders_(std::move(remainders)) {
  log_terms_.reserve(terms_.size());
  values_.reserve(terms_.size());
  reciprocals_.reserve(terms_.size());
  for (const BigInt& s : terms_) {
    const double ls = log_big(s);
    log_terms_.push_back(ls);
    values_.push_back(ls > 709.0 ? std::numeric_limits<double>::infinity() : s.convert_to<double>());
    reciprocals_.push_back(std::exp(-ls));
  }
}

const Rational& SylvesterSequence::remainder(std::size_t n) const {
  if (n == 0) return alpha_;
  return remainders_.at(n - 1);
}

SylvesterSequence sylvester(const Rational& alpha, std::size_t count) {
  if (alpha <= 0 || alpha > 1) throw InvalidArgument("sylvester: alpha must lie in (0, 1]");
  if (count == 0) throw InvalidArgument("sylvester: count must be >= 1");
  std::vector<BigInt> terms;
  std::vector<Rational> remainders;
  terms.reserve(count);
  remainders.reserve(count);
  Rational r = alpha;
  for (std::size_t i = 0; i < count; ++i) {
    // least integer strictly larger than 1/r = floor(den/num) + 1
    const BigInt s = mp::denominator(r) / mp::numerator(r) + 1;
    r -= Rational(1, s);
    terms.push_back(s);
    remainders.push_back(r);
  }
  return SylvesterSequence(alpha, std::move(terms), std::move(remainders));
}

ExponentPair construction_exponents(const Rational& k, std::size_t count) {
  if (k <= 1) throw InvalidArgument("construction_exponents: k must exceed 1");
  return ExponentPair{k, sylvester(1 - 1 / k, count), sylvester(Rational(1), count)};
}

std::uint64_t root_floor_log(double log_x, double s) {
  if (!(log_x >= 0.0)) return 0;
  const double target = log_x / s;
  auto n = static_cast<std::uint64_t>(std::floor(std::exp(target)));
  auto fits = [&](std::uint64_t m) {
    return std::log(static_cast<double>(m)) * s <= log_x * (1.0 + 1e-13) + 1e-13;
  };
  while (n > 1 && !fits(n)) --n;
  while (fits(n + 1)) ++n;
  return std::max<std::uint64_t>(n, 1);
}

std::uint64_t root_floor(double x, double s) {
  if (!(x >= 1.0)) return 0;
  return root_floor_log(std::log(x), s);
}

std::size_t active_length_log(double log_t0, const SylvesterSequence& seq) {
  std::size_t length = 0;
  for (std::size_t l = 1; l <= seq.size(); ++l) {
    if (seq.log_term(l) > 64.0) break;
    if (root_floor_log(log_t0, seq.term_value(l)) < 2) break;
    length = l;
  }
  return length;
}

std::size_t active_length(double t0, const SylvesterSequence& seq) {
  if (!(t0 >= 2.0)) throw InvalidArgument("active_length: T0 must be >= 2");
  return active_length_log(std::log(t0), seq);
}

double log1p_square_over(double log_s) {
  if (log_s < 300.0) {
    const double s = std::exp(log_s);
    return std::log1p(s * s) / s;
  }
  // log(1 + s^2) = 2 log s up to s^{-2}
  return std::exp(std::log(2.0 * log_s) - log_s);
}

TailLogSum tail_log_sum(const SylvesterSequence& seq) {
  if (seq.size() < 6) throw InsufficientPrecision("tail_log_sum needs at least 6 terms");
  TailLogSum out;
  double acc = 0.0;
  for (std::size_t l = 1; l <= seq.size(); ++l) acc += log1p_square_over(seq.log_term(l));
  out.partial = acc;
  // s_{N+1} >= s_N^2 - s_N + 1 and g(s) = log(1+s^2)/s more than halves from
  // each term to the next once s >= 7, so the tail is at most 2 g(s_N^2 - s_N + 1).
  const BigInt& last = seq.term(seq.size());
  const BigInt next_lower = last * last - last + 1;
  out.tail_bound = 2.0 * log1p_square_over(log_big(next_lower));
  return out;
}

}  // namespace zmoments
