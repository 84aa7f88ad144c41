#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace kvw {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};
inline constexpr std::size_t kMaxGenus = 8;

struct TorusParams {
  cplx tau;
  double t = 0;  // Im tau
  double s = 0;  // Re tau

  // Throws NonconvergentModulus unless Im tau > 0.
  static TorusParams make(cplx tau);
};

struct ThetaCharacteristics {
  std::vector<double> a;
  std::vector<double> b;

  static ThetaCharacteristics zero(std::size_t g) { return {std::vector<double>(g, 0.0), std::vector<double>(g, 0.0)}; }
};

class OmegaMatrix {
 public:
  // Throws AsymmetricOmega (|Omega - Omega^T| > 1e-14) or ImagNotPositiveDefinite.
  static OmegaMatrix make(const CMatrix& omega);

  std::size_t g() const noexcept { return static_cast<std::size_t>(omega_.rows()); }
  const CMatrix& omega() const noexcept { return omega_; }
  const RMatrix& imag() const noexcept { return imag_; }
  const RMatrix& imag_inverse() const noexcept { return imag_inverse_; }
  const RMatrix& imag_cholesky() const noexcept { return chol_; }
  double imag_min_eigenvalue() const noexcept { return lambda_min_; }

 private:
  CMatrix omega_;
  RMatrix imag_;
  RMatrix imag_inverse_;
  RMatrix chol_;
  double lambda_min_ = 0;
};

// Enumeration bound for the lattice sum.  Terms are bounded by
// S exp(-pi w^T Y w) with w = k + a + Y^{-1} Im z and S = exp(pi c^T Y c);
// summing only over w^T Y w <= R^2 leaves a tail below (tol/2) S.
struct TruncationPlan {
  double radius = 0;
  std::vector<double> axis_extent;  // R sqrt((Y^{-1})_ii), the half-width of the bounding box
  double tail_bound = 0;            // bound on the discarded tail, in units of S
  double tol = 0;
};

TruncationPlan truncation_plan(const OmegaMatrix& omega, const std::vector<double>& a, double tol);

// One-variable theta with characteristics; error below tol * max(1, leading term).
cplx jacobi_theta(double a, double b, cplx z, const TorusParams& tau, double tol = 1e-13);

// theta[1/2, 1/2], odd with a simple zero at the origin.
cplx theta_odd(cplx z, const TorusParams& tau, double tol = 1e-13);

cplx riemann_theta(const ThetaCharacteristics& chars, const CVector& z, const OmegaMatrix& omega, double tol = 1e-13);

// Shares one truncation plan across many arguments on the same Omega.
class ThetaEvaluator {
 public:
  ThetaEvaluator(OmegaMatrix omega, ThetaCharacteristics chars, double tol = 1e-13);

  std::size_t g() const noexcept { return omega_.g(); }
  const OmegaMatrix& omega() const noexcept { return omega_; }
  const ThetaCharacteristics& characteristics() const noexcept { return chars_; }
  const TruncationPlan& plan() const noexcept { return plan_; }

  cplx operator()(const CVector& z) const;
  // Optional scale factor: radius multiplier used by self-consistency checks.
  cplx evaluate(const CVector& z, double radius_scale) const;
  std::vector<cplx> batch(const std::vector<CVector>& zs) const;

 private:
  OmegaMatrix omega_;
  ThetaCharacteristics chars_;
  TruncationPlan plan_;
};

// Number of lattice points the plan visits at argument z (for diagnostics).
std::size_t lattice_points_visited(const ThetaEvaluator& eval, const CVector& z);

}  // namespace kvw
