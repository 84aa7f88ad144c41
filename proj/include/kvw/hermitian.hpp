#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kvw/theta.hpp"
#include "kvw/wavefunctions.hpp"
#include "kvw/wen_algebra.hpp"

namespace kvw {

enum class QuadratureScheme { Auto, TensorGauss, QuasiMonteCarlo };

std::string to_string(QuadratureScheme s);

struct QuadratureSpec {
  QuadratureScheme scheme = QuadratureScheme::Auto;
  std::size_t points_per_axis = 48;
  std::size_t total_samples = 1'000'000;
  std::size_t batches = 16;
  std::uint64_t seed = 0;
  // Accepted shift between the N- and N/2-point tensor rules, relative to the
  // scale of the result.
  double tol = 1e-6;
  // Ceiling on integrand evaluations for either scheme.
  std::size_t max_evaluations = 400'000'000;

  // Throws std::invalid_argument for zero sizes or a non-positive tolerance.
  void validate() const;
};

struct GramReport {
  CMatrix matrix;
  RMatrix std_error;  // zero for tensor rules; batch-mean standard errors for QMC
  std::vector<PiElement> basis;
  QuadratureScheme scheme = QuadratureScheme::TensorGauss;
  std::size_t evaluations = 0;
  double quad_error = 0;  // |G_N - G_{N/2}|_max / mean diagonal, tensor rules only
  std::optional<double> kappa_ref;
  double mean_diagonal = 0;
  double off_diagonal = 0;     // max |G_ij| / mean diagonal
  double diagonal_spread = 0;  // max |G_ii - mean| / mean diagonal
  double hermitian_defect = 0;  // max |G - G^H|
  // QMC only: max |G_ij| / stderr_ij over i != j, and max |G_ii - G_jj| over
  // the batch-mean stderr of that difference.
  double off_diagonal_sigmas = 0;
  double diagonal_sigmas = 0;
  bool primary = false;

  // Relative deviations below rel and, for QMC, both sigma counts below sigmas.
  bool scalar(double rel, double sigmas = 3.0) const;
};

// exp(-2 pi k t y^2 - 4 pi a t y) with z = x + tau y and xi = a tau + b.
double metric_weight_1d(std::int64_t k, cplx xi, const TorusParams& tau, cplx z);

// exp(-2 pi t (y, K y + 2 a)).
double metric_weight_g(const WenMatrix& k, const CVector& xi, const TorusParams& tau, const CVector& z);

using CenterFunction = std::function<cplx(const CVector& w)>;

// Tensor Gauss-Legendre estimate of the weighted integral of F1 conj(F2) over
// the unit box in (x, y), w = x + tau y.  The N/2-point rule runs alongside;
// QuadratureTooCoarse when the two differ by more than tol times the weighted
// integral of |F1||F2|.
cplx inner_product_center(const WenMatrix& k, const CVector& xi, const TorusParams& tau, const CenterFunction& f1,
                          const CenterFunction& f2, const QuadratureSpec& quad = {});

// Norm-square shared by every H_c: (2t)^{-g/2} delta^{-1/2} exp(2 pi t (a, K^{-1} a)).
double kappa_closed_form(const WenMatrix& k, const CVector& xi, const TorusParams& tau);

// (2 t delta)^{-g/2} exp(2 pi t (a, K^{-1} a)); equals kappa_closed_form only when g = 1.
double kappa_uniform_form(const WenMatrix& k, const CVector& xi, const TorusParams& tau);

// Gram matrix of the center-of-mass basis on the tensor rule.  The x integral
// is done in closed form per pair of lattice terms, which reproduces the full
// tensor sum at a fraction of the cost.  basis defaults to pi_group order.
GramReport gram_center(const WenMatrix& k, const CVector& xi, const TorusParams& tau, const QuadratureSpec& quad = {},
                       const std::vector<PiElement>& basis = {});

// Same matrix computed pair by pair through inner_product_center.
GramReport gram_center_direct(const WenMatrix& k, const CVector& xi, const TorusParams& tau,
                              const QuadratureSpec& quad = {}, const std::vector<PiElement>& basis = {});

// Gram matrix of the many-body basis under the product metric: each particle of
// layer k carries weight metric_weight_1d(d, xi_k, ...).  basis defaults to the
// rep_matrices order.  Auto picks the tensor rule when points^{2n} fits the
// budget and QMC otherwise; SamplingBudgetExceeded when neither does.
GramReport gram_manybody(const WaveFunctionSpec& spec, const QuadratureSpec& quad = {},
                         const std::vector<PiElement>& basis = {});

}  // namespace kvw
