#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "kvw/theta.hpp"
#include "kvw/wen_algebra.hpp"

namespace kvw {

// Exponent e of exp(2 pi i e / delta) for exp(2 pi i a^T K b).
std::int64_t upsilon(const PiElement& a, const PiElement& b, const WenMatrix& k);

// ((a, b), gamma) with gamma stored as an exponent mod delta.  `flip` is the
// extra central Z/2 generator used in the sign-twisted sector; it is carried
// through products and acts as -1 in that sector's representation.
struct HeisenbergElement {
  PiElement a;
  PiElement b;
  std::int64_t gamma = 0;
  bool flip = false;

  static HeisenbergElement identity(const WenMatrix& k);
  friend bool operator==(const HeisenbergElement&, const HeisenbergElement&) = default;
};

HeisenbergElement multiply(const HeisenbergElement& x, const HeisenbergElement& y, const WenMatrix& k);
HeisenbergElement inverse(const HeisenbergElement& x, const WenMatrix& k);

// Every element of G_K (flip = false), delta^3 of them.
std::vector<HeisenbergElement> group_elements(const WenMatrix& k);

// Generalised permutation matrix over delta-th roots of unity:
// column j maps to row perm[j] with entry sign * exp(2 pi i phase[j] / order).
class MonomialMatrix {
 public:
  MonomialMatrix() = default;
  MonomialMatrix(std::vector<std::size_t> perm, std::vector<std::int64_t> phase, std::int64_t order, int sign = 1);

  static MonomialMatrix identity(std::size_t n, std::int64_t order);

  std::size_t size() const noexcept { return perm_.size(); }
  std::int64_t order() const noexcept { return order_; }
  int sign() const noexcept { return sign_; }
  const std::vector<std::size_t>& perm() const noexcept { return perm_; }
  const std::vector<std::int64_t>& phase() const noexcept { return phase_; }

  MonomialMatrix operator*(const MonomialMatrix& o) const;
  MonomialMatrix pow(std::int64_t e) const;
  // Multiplies by exp(2 pi i e / order).
  MonomialMatrix scaled(std::int64_t e) const;
  MonomialMatrix negated() const;
  bool is_identity() const;
  // Trace as a sum of roots of unity (list of exponents that contribute).
  std::vector<std::int64_t> trace_exponents() const;
  CMatrix to_complex() const;

  friend bool operator==(const MonomialMatrix&, const MonomialMatrix&) = default;

 private:
  std::vector<std::size_t> perm_;
  std::vector<std::int64_t> phase_;
  std::int64_t order_ = 1;
  int sign_ = 1;
};

enum class BasisOrder { Auto, UPowers, PiIndex };

struct RepMatrices {
  MonomialMatrix T1;
  MonomialMatrix T2;
  std::int64_t delta = 1;
  std::int64_t q_exponent = 0;  // q = exp(2 pi i q_exponent / delta) = exp(2 pi i n / d)
  std::vector<PiElement> basis;  // basis[i] labels the i-th basis vector
  bool u_powers = false;
  bool sharp = false;  // diagonal parity + d odd: the twisted extension acts

  bool q_primitive() const;
};

// True when the wave functions live in the sign-twisted sector.
bool sharp_sector(const WenDatum& datum);

// Throws NonCyclicBasisOrder when u-power ordering is requested for non-primary K.
RepMatrices rep_matrices(const WenDatum& datum, BasisOrder order = BasisOrder::Auto);

// gamma R_b S_a on the basis H_c ordered by pi_group(k).
MonomialMatrix standard_action(const HeisenbergElement& x, const WenMatrix& k, const PiGroup& pi, bool sharp = false);

// (chi, chi) = delta^{-3} sum_{x in G_K} |tr rep(x)|^2 for any representation given as dense matrices.
double character_norm(const WenMatrix& k, const std::function<CMatrix(const HeisenbergElement&)>& rep);

// character_norm of the standard representation; throws std::invalid_argument when delta > 10.
double irreducibility_norm(const WenMatrix& k);

}  // namespace kvw
