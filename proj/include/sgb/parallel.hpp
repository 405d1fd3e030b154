#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <span>
#include <thread>
#include <vector>

namespace sgb {

/// Worker count used when a caller passes 0.
inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Evaluates fn(i) for i in [0, n) on `workers` threads and returns the
/// results in index order. Samples are claimed in fixed-size blocks; since
/// each result depends only on its index, the output does not depend on the
/// worker count. If any call throws, the exception of the lowest failing
/// index is rethrown.
template <class Fn>
auto map_samples(std::size_t n, unsigned workers, Fn&& fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using R = decltype(fn(std::size_t{}));
  std::vector<R> out(n);
  if (workers == 0) workers = default_workers();
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));

  constexpr std::size_t kBlock = 64;
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::size_t> error_index(workers, n);
  auto work = [&](unsigned w) {
    for (;;) {
      const std::size_t begin = next.fetch_add(kBlock);
      if (begin >= n) return;
      const std::size_t end = std::min(n, begin + kBlock);
      for (std::size_t i = begin; i < end; ++i) {
        if (i >= error_index[w]) return;
        try {
          out[i] = fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
          error_index[w] = i;
          return;
        }
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  std::size_t first = n;
  std::exception_ptr err;
  for (unsigned w = 0; w < workers; ++w) {
    if (errors[w] && error_index[w] < first) {
      first = error_index[w];
      err = errors[w];
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

struct Summary {
  double mean = 0.0;
  double std_err = 0.0;  // sample standard deviation / sqrt(n)
  std::size_t n = 0;
};

/// Sequential two-pass mean and standard error.
inline Summary summarize(std::span<const double> xs) {
  Summary s;
  s.n = xs.size();
  if (s.n == 0) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n < 2) return s;
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.std_err = std::sqrt(ss / static_cast<double>(s.n - 1) / static_cast<double>(s.n));
  return s;
}

}  // namespace sgb
