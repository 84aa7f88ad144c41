#pragma once

#include <random>
#include <vector>

#include "kvw/heisenberg.hpp"
#include "kvw/theta.hpp"
#include "kvw/wen_algebra.hpp"

namespace kvw {

// Particle coordinates grouped by layer.
struct Configuration {
  std::vector<std::vector<cplx>> coords;

  std::size_t layers() const noexcept { return coords.size(); }
  std::size_t particles() const;
  // Layer sums w_k; always recomputed.
  CVector w() const;
  // Every coordinate shifted by the same amount.
  Configuration shifted(cplx by) const;
};

// Points z = x + tau y with x, y uniform in [0, 1).
Configuration random_configuration(const std::vector<std::int64_t>& n_vec, const TorusParams& tau, std::mt19937_64& rng);

class WaveFunctionSpec {
 public:
  // xi has one entry per layer.
  static WaveFunctionSpec make(const WenDatum& datum, const CVector& xi, const TorusParams& tau, double tol = 1e-13);

  const WenDatum& datum() const noexcept { return datum_; }
  const WenMatrix& K() const noexcept { return datum_.matrix(); }
  const CVector& xi() const noexcept { return xi_; }
  const TorusParams& tau() const noexcept { return tau_; }
  const OmegaMatrix& omega() const noexcept { return omega_; }
  const PiGroup& pi() const noexcept { return pi_; }
  double tol() const noexcept { return tol_; }
  // xi = b + tau a
  const RVector& a() const noexcept { return a_; }
  const RVector& b() const noexcept { return b_; }
  // (-1)^(d + K_kk): the sign picked up by every unit shift of one coordinate
  int sign_eps() const noexcept { return sign_eps_; }
  bool sharp() const noexcept { return sign_eps_ < 0; }

  const ThetaEvaluator& center_evaluator(const PiElement& c) const;

 private:
  WaveFunctionSpec(const WenDatum& datum) : datum_(datum) {}

  WenDatum datum_;
  CVector xi_;
  TorusParams tau_;
  OmegaMatrix omega_;
  PiGroup pi_;
  double tol_ = 1e-13;
  RVector a_, b_;
  int sign_eps_ = 1;
  std::vector<ThetaEvaluator> evaluators_;  // indexed like pi_
};

// h_j(z) = theta[(j-1)/k, 0](k z + xi | k tau), j = 1..k
cplx one_particle_basis(std::int64_t k, cplx xi, const TorusParams& tau, std::int64_t j, cplx z, double tol = 1e-13);

// H_c(w) = Theta[c, 0](K w + xi | tau K)
cplx center_basis(const WaveFunctionSpec& spec, const PiElement& c, const CVector& w);

// U_l(z, xi) = exp(-pi i (l, 2 xi + 2 K z + Omega l))
cplx automorphy_factor(const WaveFunctionSpec& spec, const RVector& l, const CVector& z);

// (S_a H_c)(w) = H_c(w + a) and (R_b H_c)(w) = U_b(w, xi)^{-1} H_c(w + tau b).
cplx center_shift_s(const WaveFunctionSpec& spec, const PiElement& c, const RVector& a, const CVector& w);
cplx center_shift_r(const WaveFunctionSpec& spec, const PiElement& c, const RVector& b, const CVector& w);

// Throws ShapeMismatch when the layer sizes differ from the datum.
cplx jastrow_factor(const WenDatum& datum, const TorusParams& tau, const Configuration& config, double tol = 1e-13);

cplx kvw_wavefunction(const WaveFunctionSpec& spec, const PiElement& c, const Configuration& config);

// theta[(j-1)/m, 0](m w + xi | m tau) prod_{p<q} odd_theta(z_p - z_q)^m, w = sum z
cplx hr_wavefunction(std::int64_t m, std::int64_t n, cplx xi, const TorusParams& tau, std::int64_t j,
                     const std::vector<cplx>& z, double tol = 1e-13);

enum class Translation { T1, T2 };

// T1 shifts every coordinate by 1/d.  T2 shifts every coordinate by tau/d and
// multiplies by prod_particles exp((2 pi i xi_k + pi i tau)/d) exp(2 pi i z).
cplx apply_translation(const WaveFunctionSpec& spec, const PiElement& c, Translation which, const Configuration& config);

// Max over samples of |T1 Phi_c - upsilon(u,c) Phi_c| resp. |T2 Phi_c - Phi_{c+u}|,
// each divided by max(|lhs|, |rhs|).
double magnetic_action_residual(const WaveFunctionSpec& spec, const PiElement& c, Translation which,
                                const std::vector<Configuration>& samples);

struct QuasiPeriodicityResidual {
  double unit_shift = 0;  // z -> z + 1
  double tau_shift = 0;   // z -> z + tau
};

// Every particle, both lattice directions; relative residuals as above.
QuasiPeriodicityResidual quasi_periodicity_residual(const WaveFunctionSpec& spec, const PiElement& c,
                                                    const std::vector<Configuration>& samples);

}  // namespace kvw
