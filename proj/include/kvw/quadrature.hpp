#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace kvw {

// Gauss-Legendre rule mapped to [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Nodes by Newton iteration on P_n; throws std::invalid_argument for n == 0.
GaussRule gauss_legendre(std::size_t n);

// Randomised quasi-Monte-Carlo point sets on [0,1)^dim.
//
// One Sobol' point set of `per_batch` points is shared by all batches; batch b
// applies its own random digital shift (XOR of a 64-bit mask per coordinate),
// so every batch is an unbiased estimator and the batch means give the error.
class ShiftedSobol {
 public:
  ShiftedSobol(std::size_t dim, std::size_t per_batch, std::size_t batches, std::uint64_t seed);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t per_batch() const noexcept { return per_batch_; }
  std::size_t batches() const noexcept { return masks_.size(); }

  // Writes point i of batch b into out[0..dim).
  void point(std::size_t b, std::size_t i, double* out) const;

 private:
  std::size_t dim_;
  std::size_t per_batch_;
  std::vector<std::uint64_t> raw_;                 // per_batch * dim
  std::vector<std::vector<std::uint64_t>> masks_;  // batches x dim
};

}  // namespace kvw
