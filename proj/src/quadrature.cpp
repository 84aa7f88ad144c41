#include "kvw/quadrature.hpp"

#include <boost/random/sobol.hpp>

#include <cmath>
#include <random>
#include <stdexcept>

namespace kvw {

GaussRule gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("Gauss-Legendre rule needs at least one node");
  const double pi = 3.14159265358979323846;
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // map [-1,1] -> [0,1]
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

ShiftedSobol::ShiftedSobol(std::size_t dim, std::size_t per_batch, std::size_t batches, std::uint64_t seed)
    : dim_(dim), per_batch_(per_batch) {
  if (dim == 0 || per_batch == 0 || batches == 0) throw std::invalid_argument("empty QMC point set");
  boost::random::sobol engine(static_cast<unsigned>(dim));
  raw_.resize(per_batch * dim);
  for (auto& v : raw_) v = engine();
  std::mt19937_64 rng(seed);
  masks_.assign(batches, std::vector<std::uint64_t>(dim));
  for (auto& m : masks_)
    for (auto& v : m) v = rng();
}

void ShiftedSobol::point(std::size_t b, std::size_t i, double* out) const {
  const auto& mask = masks_[b];
  const std::uint64_t* row = raw_.data() + i * dim_;
  for (std::size_t j = 0; j < dim_; ++j) {
    const std::uint64_t v = row[j] ^ mask[j];
    // top 53 bits, centred in the cell so 0 is never produced
    out[j] = (static_cast<double>(v >> 11) + 0.5) * 0x1.0p-53;
  }
}

}  // namespace kvw
