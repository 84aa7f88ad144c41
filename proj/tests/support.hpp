#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "kvw/error.hpp"
#include "kvw/wen_algebra.hpp"

namespace kvw::testing {

// Rejection sampler for valid Wen matrices: symmetric, entries in [0, max_entry].
inline std::vector<WenMatrix> random_wen_matrices(std::size_t count, std::size_t max_g, std::int64_t max_entry,
                                                  std::uint64_t seed, std::int64_t max_delta = 0) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> gdist(1, max_g);
  std::uniform_int_distribution<std::int64_t> edist(0, max_entry);
  std::vector<WenMatrix> out;
  while (out.size() < count) {
    const std::size_t g = gdist(rng);
    IntMatrix m(g, g);
    for (std::size_t i = 0; i < g; ++i)
      for (std::size_t j = i; j < g; ++j) m(i, j) = m(j, i) = edist(rng);
    try {
      auto w = validate_wen_matrix(m);
      if (max_delta > 0 && w.delta() > max_delta) continue;
      out.push_back(std::move(w));
    } catch (const Error&) {
    }
  }
  return out;
}

// Elements of K^{-1}Z^g/Z^g by exhaustive search over numerators in [0, delta)^g.
inline std::size_t brute_force_pi_order(const WenMatrix& k) {
  const std::size_t g = k.g();
  const std::int64_t d = k.delta();
  std::vector<std::int64_t> num(g, 0);
  std::size_t count = 0;
  for (;;) {
    bool member = true;
    for (auto x : k.K().apply(num))
      if (x % d != 0) member = false;
    if (member) ++count;
    std::size_t pos = 0;
    while (pos < g && ++num[pos] == d) num[pos++] = 0;
    if (pos == g) break;
  }
  return count;
}

inline std::complex<double> random_point(std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  const double re = u(rng);
  return {re, u(rng)};
}

}  // namespace kvw::testing
