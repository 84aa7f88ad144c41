#include "kvw/theta.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kvw/error.hpp"
#include "kvw/parallel.hpp"

namespace kvw {

namespace {

void check_tol(double tol, double floor, const char* who) {
  if (!(tol >= floor) || !std::isfinite(tol))
    throw std::invalid_argument(std::string(who) + ": tolerance must be at least " + std::to_string(floor));
}

// Tail of sum_{w in Z^g + s, w^T Y w > R^2} exp(-pi w^T Y w), maximised over shifts s.
// Splitting exp(-pi q) <= exp(-pi theta R^2) exp(-pi (1-theta) q) and comparing each axis
// sum of a unimodal Gaussian with its integral plus its peak gives the bracket below.
double tail_factor(double lambda_min, std::size_t g, double theta) {
  return std::pow(1.0 + std::sqrt(1.0 / ((1.0 - theta) * lambda_min)), static_cast<double>(g));
}

}  // namespace

TorusParams TorusParams::make(cplx tau) {
  if (!(tau.imag() > 0.0) || !std::isfinite(tau.real()) || !std::isfinite(tau.imag()))
    throw Error(ErrorCode::NonconvergentModulus, "Im tau must be positive, got " + std::to_string(tau.imag()));
  return TorusParams{tau, tau.imag(), tau.real()};
}

OmegaMatrix OmegaMatrix::make(const CMatrix& omega) {
  if (omega.rows() != omega.cols() || omega.rows() == 0)
    throw Error(ErrorCode::ShapeMismatch, "Omega must be a non-empty square matrix");
  if (static_cast<std::size_t>(omega.rows()) > kMaxGenus)
    throw Error(ErrorCode::ShapeMismatch, "genus above " + std::to_string(kMaxGenus) + " is not supported");
  const double asym = (omega - omega.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-14) throw Error(ErrorCode::AsymmetricOmega, "max |Omega - Omega^T| = " + std::to_string(asym));
  OmegaMatrix out;
  out.omega_ = (omega + omega.transpose()) / 2.0;
  out.imag_ = out.omega_.imag();
  Eigen::LLT<RMatrix> llt(out.imag_);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::ImagNotPositiveDefinite, "Cholesky of Im Omega failed");
  out.chol_ = llt.matrixL();
  Eigen::SelfAdjointEigenSolver<RMatrix> eig(out.imag_, Eigen::EigenvaluesOnly);
  out.lambda_min_ = eig.eigenvalues().minCoeff();
  if (!(out.lambda_min_ > 0.0)) throw Error(ErrorCode::ImagNotPositiveDefinite, "Im Omega has a non-positive eigenvalue");
  out.imag_inverse_ = llt.solve(RMatrix::Identity(omega.rows(), omega.cols()));
  return out;
}

TruncationPlan truncation_plan(const OmegaMatrix& omega, const std::vector<double>& a, double tol) {
  check_tol(tol, 1e-300, "truncation_plan");
  if (a.size() != omega.g()) throw Error(ErrorCode::ShapeMismatch, "characteristic length differs from genus");
  const std::size_t g = omega.g();
  const double lambda = omega.imag_min_eigenvalue();
  const double target = tol / 2.0;
  double best_r2 = INFINITY, best_tail = 0;
  for (int i = 1; i < 99; ++i) {
    const double theta = i / 100.0;
    const double factor = tail_factor(lambda, g, theta);
    const double r2 = std::max(0.0, std::log(factor / target)) / (kPi * theta);
    if (r2 < best_r2) {
      best_r2 = r2;
      best_tail = std::exp(-kPi * theta * r2) * factor;
    }
  }
  TruncationPlan plan;
  plan.radius = std::sqrt(best_r2);
  plan.tail_bound = best_tail;
  plan.tol = tol;
  for (std::size_t i = 0; i < g; ++i) plan.axis_extent.push_back(plan.radius * std::sqrt(omega.imag_inverse()(i, i)));
  return plan;
}

cplx jacobi_theta(double a, double b, cplx z, const TorusParams& tau, double tol) {
  check_tol(tol, 1e-15, "jacobi_theta");
  if (!(tau.t > 0.0)) throw Error(ErrorCode::NonconvergentModulus, "Im tau must be positive");
  const double t = tau.t;
  // |term_n| = S exp(-pi t (n + a + c)^2), c = Im z / t
  const double center = -a - z.imag() / t;
  double r = std::sqrt(std::log(4.0 / tol) / (kPi * t));
  while (2.0 * std::exp(-kPi * t * r * r) / (1.0 - std::exp(-2.0 * kPi * t * r)) > tol / 2.0) r += 0.05;
  const auto lo = static_cast<long long>(std::ceil(center - r));
  const auto hi = static_cast<long long>(std::floor(center + r));
  const cplx shift = z + b;
  cplx sum = 0.0;
  for (long long n = lo; n <= hi; ++n) {
    const double v = static_cast<double>(n) + a;
    sum += std::exp(kI * kPi * tau.tau * (v * v) + 2.0 * kI * kPi * v * shift);
  }
  return sum;
}

cplx theta_odd(cplx z, const TorusParams& tau, double tol) { return jacobi_theta(0.5, 0.5, z, tau, tol); }

ThetaEvaluator::ThetaEvaluator(OmegaMatrix omega, ThetaCharacteristics chars, double tol)
    : omega_(std::move(omega)), chars_(std::move(chars)) {
  check_tol(tol, 1e-14, "riemann_theta");
  if (chars_.a.size() != omega_.g() || chars_.b.size() != omega_.g())
    throw Error(ErrorCode::ShapeMismatch, "characteristics have the wrong length");
  plan_ = truncation_plan(omega_, chars_.a, tol);
}

cplx ThetaEvaluator::operator()(const CVector& z) const { return evaluate(z, 1.0); }

cplx ThetaEvaluator::evaluate(const CVector& z, double radius_scale) const {
  const std::size_t g = omega_.g();
  if (static_cast<std::size_t>(z.size()) != g) throw Error(ErrorCode::ShapeMismatch, "argument length differs from genus");
  const RVector c = omega_.imag_inverse() * z.imag();
  const double r = plan_.radius * radius_scale;
  const double r2 = r * r;
  std::array<long long, kMaxGenus> lo{}, hi{}, k{};
  std::array<double, kMaxGenus> shift{};  // a + c
  for (std::size_t i = 0; i < g; ++i) {
    shift[i] = chars_.a[i] + c(i);
    const double ext = plan_.axis_extent[i] * radius_scale;
    lo[i] = static_cast<long long>(std::ceil(-shift[i] - ext));
    hi[i] = static_cast<long long>(std::floor(-shift[i] + ext));
    if (lo[i] > hi[i]) return 0.0;
    k[i] = lo[i];
  }
  const auto& y = omega_.imag();
  const auto& om = omega_.omega();
  std::array<cplx, kMaxGenus> zb{};
  for (std::size_t i = 0; i < g; ++i) zb[i] = z(i) + chars_.b[i];
  cplx sum = 0.0;
  std::array<double, kMaxGenus> v{}, w{};
  for (;;) {
    for (std::size_t i = 0; i < g; ++i) {
      v[i] = static_cast<double>(k[i]) + chars_.a[i];
      w[i] = static_cast<double>(k[i]) + shift[i];
    }
    double q = 0;
    for (std::size_t i = 0; i < g; ++i) {
      double row = 0;
      for (std::size_t j = 0; j < g; ++j) row += y(i, j) * w[j];
      q += w[i] * row;
    }
    if (q <= r2) {
      cplx quad = 0.0, lin = 0.0;
      for (std::size_t i = 0; i < g; ++i) {
        cplx row = 0.0;
        for (std::size_t j = 0; j < g; ++j) row += om(i, j) * v[j];
        quad += v[i] * row;
        lin += v[i] * zb[i];
      }
      sum += std::exp(kI * kPi * quad + 2.0 * kI * kPi * lin);
    }
    std::size_t pos = 0;
    while (pos < g && ++k[pos] > hi[pos]) k[pos] = lo[pos], ++pos;
    if (pos == g) break;
  }
  return sum;
}

std::vector<cplx> ThetaEvaluator::batch(const std::vector<CVector>& zs) const {
  std::vector<cplx> out(zs.size());
  parallel_chunks(zs.size(), 256, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = (*this)(zs[i]);
  });
  return out;
}

cplx riemann_theta(const ThetaCharacteristics& chars, const CVector& z, const OmegaMatrix& omega, double tol) {
  return ThetaEvaluator(omega, chars, tol)(z);
}

std::size_t lattice_points_visited(const ThetaEvaluator& eval, const CVector& z) {
  const std::size_t g = eval.g();
  const RVector c = eval.omega().imag_inverse() * z.imag();
  std::size_t count = 1;
  for (std::size_t i = 0; i < g; ++i) {
    const double s = eval.characteristics().a[i] + c(i);
    const double ext = eval.plan().axis_extent[i];
    const auto n = static_cast<long long>(std::floor(-s + ext)) - static_cast<long long>(std::ceil(-s - ext)) + 1;
    count *= static_cast<std::size_t>(std::max(0LL, n));
  }
  return count;
}

}  // namespace kvw
