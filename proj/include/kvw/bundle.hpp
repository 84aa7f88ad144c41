#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kvw/theta.hpp"
#include "kvw/wen_algebra.hpp"

namespace kvw {

using RationalMatrix = std::vector<std::vector<Rational>>;

// Coefficients of c1 in the coframe dxi_p ^ dxibar_q, with the scalar
// -i/(2t) kept out: the adjugate K^#.
RationalMatrix chern1_matrix(const WenMatrix& k);

// Coefficient of c1^i in the total Chern class, C(delta, i)/delta^i, i = 0..min(g, delta).
std::vector<Rational> total_chern(const WenMatrix& k);

struct BundleInvariants {
  std::int64_t rank = 0;    // delta
  std::int64_t degree = 0;  // -rho
  RationalMatrix c1_coeff;
  std::vector<Rational> total_chern;
  bool stable = false;
  std::optional<std::int64_t> jain_p;
  std::optional<Rational> jain_fraction;  // g/(gp+1) when K = K_{p,g}

  Rational slope() const { return Rational(degree, rank); }
  // "-rho/delta", not reduced.
  std::string slope_display() const;
};

BundleInvariants restricted_invariants(const WenMatrix& k);

// Primal generators e_j and tau K e_j of Z^g + tau K Z^g, in that order.
std::vector<CVector> primal_lattice_generators(const WenMatrix& k, const TorusParams& tau);

// Dual generators (1/t) K^{-1} e_j and (tau/t) e_j, in that order.
std::vector<CVector> dual_lattice_generators(const WenMatrix& k, const TorusParams& tau);

// Im sum_j l_j conj(v_j).
double lattice_pairing(const CVector& l, const CVector& v);

struct PairingCheck {
  RMatrix pairing;             // dual x primal, 2g x 2g
  double max_defect = 0;       // distance of any entry from the nearest integer
  double determinant = 0;      // of the rounded matrix
};

PairingCheck check_dual_pairing(const WenMatrix& k, const TorusParams& tau);

}  // namespace kvw
