#include "kvw/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kvw {

RationalMatrix chern1_matrix(const WenMatrix& k) {
  RationalMatrix out(k.g(), std::vector<Rational>(k.g()));
  for (std::size_t i = 0; i < k.g(); ++i)
    for (std::size_t j = 0; j < k.g(); ++j) out[i][j] = Rational(k.adjugate()(i, j));
  return out;
}

std::vector<Rational> total_chern(const WenMatrix& k) {
  const std::int64_t delta = k.delta();
  const std::int64_t top = std::min<std::int64_t>(static_cast<std::int64_t>(k.g()), delta);
  std::vector<Rational> out;
  Integer binom = 1, power = 1;
  for (std::int64_t i = 0; i <= top; ++i) {
    out.emplace_back(binom, power);
    binom = binom * (delta - i) / (i + 1);
    power *= delta;
  }
  return out;
}

std::string BundleInvariants::slope_display() const {
  return std::to_string(degree) + "/" + std::to_string(rank);
}

BundleInvariants restricted_invariants(const WenMatrix& k) {
  BundleInvariants b;
  b.rank = k.delta();
  b.degree = -k.rho();
  b.c1_coeff = chern1_matrix(k);
  b.total_chern = total_chern(k);
  b.stable = std::gcd(k.delta(), k.rho()) == 1;
  std::int64_t p = 0;
  if (detect_jain(k, &p)) {
    const auto g = static_cast<std::int64_t>(k.g());
    b.jain_p = p;
    b.jain_fraction = Rational(g, g * p + 1);
  }
  return b;
}

std::vector<CVector> primal_lattice_generators(const WenMatrix& k, const TorusParams& tau) {
  const auto g = static_cast<Eigen::Index>(k.g());
  std::vector<CVector> out;
  for (Eigen::Index j = 0; j < g; ++j) out.push_back(CVector::Unit(g, j));
  for (Eigen::Index j = 0; j < g; ++j) {
    CVector v(g);
    for (Eigen::Index i = 0; i < g; ++i)
      v(i) = tau.tau * static_cast<double>(k.K()(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
    out.push_back(v);
  }
  return out;
}

std::vector<CVector> dual_lattice_generators(const WenMatrix& k, const TorusParams& tau) {
  const auto g = static_cast<Eigen::Index>(k.g());
  const double delta = static_cast<double>(k.delta());
  std::vector<CVector> out;
  for (Eigen::Index j = 0; j < g; ++j) {
    CVector v(g);
    for (Eigen::Index i = 0; i < g; ++i)
      v(i) = static_cast<double>(k.adjugate()(static_cast<std::size_t>(i), static_cast<std::size_t>(j))) / (delta * tau.t);
    out.push_back(v);
  }
  for (Eigen::Index j = 0; j < g; ++j) out.push_back(CVector::Unit(g, j) * (tau.tau / tau.t));
  return out;
}

double lattice_pairing(const CVector& l, const CVector& v) {
  cplx s = 0;
  for (Eigen::Index j = 0; j < l.size(); ++j) s += l(j) * std::conj(v(j));
  return s.imag();
}

PairingCheck check_dual_pairing(const WenMatrix& k, const TorusParams& tau) {
  const auto dual = dual_lattice_generators(k, tau);
  const auto primal = primal_lattice_generators(k, tau);
  const auto n = static_cast<Eigen::Index>(dual.size());
  PairingCheck out;
  out.pairing.resize(n, n);
  RMatrix rounded(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double p = lattice_pairing(dual[static_cast<std::size_t>(i)], primal[static_cast<std::size_t>(j)]);
      out.pairing(i, j) = p;
      rounded(i, j) = std::round(p);
      out.max_defect = std::max(out.max_defect, std::abs(p - rounded(i, j)));
    }
  out.determinant = rounded.determinant();
  return out;
}

}  // namespace kvw
