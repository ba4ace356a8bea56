#include "zmoments/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <thread>

#include "zmoments/errors.hpp"

namespace zmoments {

double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

double log_sum_exp(std::span<const double> xs) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double x : xs) hi = std::max(hi, x);
  if (!std::isfinite(hi)) return hi;
  KahanSum acc;
  for (double x : xs) acc += std::exp(x - hi);
  return hi + std::log(acc.value());
}

namespace {

template <typename T>
Estimate<T> simpson_impl(std::span<const T> f, double h) {
  const std::size_t n = f.empty() ? 0 : f.size() - 1;
  if (n == 0) return {};
  if (n % 4 != 0) throw InvalidArgument("simpson: interval count must be a multiple of 4");
  CompensatedSum<T> fine;
  CompensatedSum<T> coarse;
  for (std::size_t i = 0; i <= n; ++i) {
    fine += simpson_weight(i, n) * f[i];
    if (i % 2 == 0) coarse += simpson_weight(i / 2, n / 2) * f[i];
  }
  const T s_h = fine.value() * (h / 3.0);
  const T s_2h = coarse.value() * (2.0 * h / 3.0);
  return {s_h, std::abs(s_h - s_2h) / 15.0};
}

std::atomic<unsigned> g_thread_limit{0};

}  // namespace

Estimate<double> simpson(std::span<const double> samples, double h) {
  return simpson_impl(samples, h);
}

Estimate<cdouble> simpson(std::span<const cdouble> samples, double h) {
  return simpson_impl(samples, h);
}

UniformGrid UniformGrid::covering(double a, double b, double max_step) {
  if (!(max_step > 0.0)) throw InvalidArgument("grid step must be positive");
  if (!(b >= a)) throw InvalidArgument("grid interval is reversed");
  UniformGrid g;
  g.start = a;
  if (b == a) {
    g.step = max_step;
    g.intervals = 0;
    return g;
  }
  auto n = static_cast<std::size_t>(std::ceil((b - a) / max_step));
  n = std::max<std::size_t>(4, (n + 3) / 4 * 4);
  g.intervals = n;
  g.step = (b - a) / static_cast<double>(n);
  return g;
}

void set_thread_limit(unsigned threads) { g_thread_limit.store(threads); }

unsigned thread_limit() {
  unsigned t = g_thread_limit.load();
  if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
  return t;
}

std::size_t block_count(std::size_t n, std::size_t block) {
  return block == 0 ? 0 : (n + block - 1) / block;
}

void parallel_blocks(std::size_t n, std::size_t block,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  const std::size_t blocks = block_count(n, block);
  if (blocks == 0) return;
  const std::size_t workers = std::min<std::size_t>(thread_limit(), blocks);
  auto run_block = [&](std::size_t b) { fn(b * block, std::min(n, (b + 1) * block), b); };
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t b = next++; b < blocks; b = next++) {
      try {
        run_block(b);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

const GaussRule& gauss_legendre(int order) {
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    auto legendre = [order](double y, double& derivative) {
      double p0 = 1.0, p1 = y;
      for (int j = 2; j <= order; ++j) {
        const double p2 = ((2.0 * j - 1.0) * y * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      derivative = order * (y * p1 - p0) / (y * y - 1.0);
      return p1;
    };
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      const double dx = legendre(x, dp) / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(x, dp);
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

}  // namespace zmoments
