#ifndef ZMOMENTS_NUMERIC_HPP
#define ZMOMENTS_NUMERIC_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace zmoments {

using cdouble = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Neumaier-compensated accumulator.
template <typename T>
class CompensatedSum {
 public:
  void add(T x) {
    T t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(T x) {
    add(x);
    return *this;
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_{};
  T comp_{};
};

template <>
class CompensatedSum<cdouble> {
 public:
  void add(cdouble x) {
    re_.add(x.real());
    im_.add(x.imag());
  }
  CompensatedSum& operator+=(cdouble x) {
    add(x);
    return *this;
  }
  cdouble value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum<double> re_;
  CompensatedSum<double> im_;
};

using KahanSum = CompensatedSum<double>;

// log(exp(a) + exp(b)) without overflow; -inf is the additive identity.
double log_add_exp(double a, double b);
double log_sum_exp(std::span<const double> xs);

/// Quadrature value with an a-posteriori error estimate.
template <typename T>
struct Estimate {
  T value{};
  double error = 0.0;
};

// Composite Simpson on equally spaced samples f_0..f_n (n divisible by 4),
// with the Richardson estimate |S_h - S_2h| / 15.
Estimate<double> simpson(std::span<const double> samples, double h);
Estimate<cdouble> simpson(std::span<const cdouble> samples, double h);

// Simpson weight of sample i out of n+1 samples (without the h/3 factor).
inline double simpson_weight(std::size_t i, std::size_t n) {
  if (i == 0 || i == n) return 1.0;
  return (i % 2 == 1) ? 4.0 : 2.0;
}

/// Uniform grid [a, b] with a sample count compatible with `simpson`.
struct UniformGrid {
  double start = 0.0;
  double step = 0.0;
  std::size_t intervals = 0;  // multiple of 4

  std::size_t size() const { return intervals + 1; }
  double at(std::size_t i) const { return start + step * static_cast<double>(i); }
  double end() const { return at(intervals); }

  // Largest step <= max_step that divides [a, b] into a multiple of 4 intervals.
  static UniformGrid covering(double a, double b, double max_step);
};

// Deterministic block-parallel loop: [0, n) is cut into fixed blocks of
// `block` items, independent of the worker count, and fn(begin, end, block_index)
// runs once per block.
void parallel_blocks(std::size_t n, std::size_t block,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

std::size_t block_count(std::size_t n, std::size_t block);

// Worker cap for parallel_blocks; 0 means hardware concurrency.
void set_thread_limit(unsigned threads);
unsigned thread_limit();

// Gauss-Legendre nodes/weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

}  // namespace zmoments

#endif  // ZMOMENTS_NUMERIC_HPP
