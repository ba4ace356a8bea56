#include "zmoments/dirichlet.hpp"

#include <cmath>

namespace zmoments {

namespace {

struct Term {
  double amplitude;  // c(n) / sqrt(n)
  double log_n;
};

std::vector<Term> collect_terms(std::span<const double> coeffs) {
  std::vector<Term> terms;
  for (std::size_t n = 1; n < coeffs.size(); ++n) {
    if (coeffs[n] == 0.0) continue;
    const double nd = static_cast<double>(n);
    terms.push_back({coeffs[n] / std::sqrt(nd), std::log(nd)});
  }
  return terms;
}

constexpr std::size_t kBlock = 256;

}  // namespace

cdouble dirichlet_at(std::span<const double> coeffs, double t) {
  CompensatedSum<cdouble> acc;
  for (const Term& term : collect_terms(coeffs))
    acc += std::polar(term.amplitude, -t * term.log_n);
  return acc.value();
}

std::vector<cdouble> dirichlet_on_grid(std::span<const double> coeffs, const UniformGrid& grid) {
  const std::vector<Term> terms = collect_terms(coeffs);
  std::vector<cdouble> out(grid.size());
  std::vector<cdouble> rotor(terms.size());
  for (std::size_t j = 0; j < terms.size(); ++j) rotor[j] = std::polar(1.0, -grid.step * terms[j].log_n);

  parallel_blocks(grid.size(), kBlock, [&](std::size_t begin, std::size_t end, std::size_t) {
    std::vector<cdouble> phase(terms.size());
    const double t0 = grid.at(begin);
    for (std::size_t j = 0; j < terms.size(); ++j)
      phase[j] = std::polar(terms[j].amplitude, -t0 * terms[j].log_n);
    for (std::size_t i = begin; i < end; ++i) {
      double re = 0.0, im = 0.0;
      for (std::size_t j = 0; j < terms.size(); ++j) {
        const cdouble z = phase[j];
        re += z.real();
        im += z.imag();
        const cdouble r = rotor[j];
        phase[j] = cdouble(z.real() * r.real() - z.imag() * r.imag(),
                           z.real() * r.imag() + z.imag() * r.real());
      }
      out[i] = cdouble(re, im);
    }
  });
  return out;
}

}  // namespace zmoments
