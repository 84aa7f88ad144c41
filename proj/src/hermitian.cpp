#include "kvw/hermitian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "kvw/error.hpp"
#include "kvw/heisenberg.hpp"
#include "kvw/parallel.hpp"
#include "kvw/quadrature.hpp"

namespace kvw {

namespace {

constexpr double kKernelTol = 1e-14;

double power_count(std::size_t base, std::size_t exp) {
  return std::pow(static_cast<double>(base), static_cast<double>(exp));
}

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

RMatrix real_k(const WenMatrix& k) {
  RMatrix m(k.g(), k.g());
  for (std::size_t i = 0; i < k.g(); ++i)
    for (std::size_t j = 0; j < k.g(); ++j) m(i, j) = static_cast<double>(k.K()(i, j));
  return m;
}

// K^{-1} a with K^{-1} = K^# / delta.
RVector k_inverse_apply(const WenMatrix& k, const RVector& a) {
  RVector out = RVector::Zero(static_cast<Eigen::Index>(k.g()));
  for (std::size_t i = 0; i < k.g(); ++i)
    for (std::size_t j = 0; j < k.g(); ++j) out(i) += static_cast<double>(k.adjugate()(i, j)) * a(j);
  return out / static_cast<double>(k.delta());
}

void summarise(GramReport& r) {
  const Eigen::Index n = r.matrix.rows();
  double mean = 0;
  for (Eigen::Index i = 0; i < n; ++i) mean += r.matrix(i, i).real();
  mean /= static_cast<double>(n);
  r.mean_diagonal = mean;
  r.off_diagonal = r.diagonal_spread = r.hermitian_defect = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      r.hermitian_defect = std::max(r.hermitian_defect, std::abs(r.matrix(i, j) - std::conj(r.matrix(j, i))));
      if (i == j)
        r.diagonal_spread = std::max(r.diagonal_spread, std::abs(r.matrix(i, i) - mean) / mean);
      else
        r.off_diagonal = std::max(r.off_diagonal, std::abs(r.matrix(i, j)) / mean);
    }
}

std::vector<PiElement> default_center_basis(const WenMatrix& k, const std::vector<PiElement>& basis) {
  if (!basis.empty()) {
    const auto pi = pi_group(k);
    for (const auto& c : basis)
      if (!pi.contains(c)) throw Error(ErrorCode::ShapeMismatch, "basis label is not an element of Pi");
    return basis;
  }
  return pi_group(k).elements();
}

// Weighted x-integral of exp(2 pi i n x) on the rule, cached for small |n|.
class FourierTable {
 public:
  FourierTable(const GaussRule& rule, std::int64_t reach) : rule_(rule), reach_(reach) {
    values_.resize(static_cast<std::size_t>(2 * reach + 1));
    for (std::int64_t n = -reach; n <= reach; ++n) values_[static_cast<std::size_t>(n + reach)] = direct(n);
  }

  cplx operator()(std::int64_t n) const {
    if (n >= -reach_ && n <= reach_) return values_[static_cast<std::size_t>(n + reach_)];
    return direct(n);
  }

 private:
  cplx direct(std::int64_t n) const {
    cplx s = 0;
    for (std::size_t i = 0; i < rule_.nodes.size(); ++i)
      s += rule_.weights[i] * std::polar(1.0, 2.0 * kPi * static_cast<double>(n) * rule_.nodes[i]);
    return s;
  }

  const GaussRule& rule_;
  std::int64_t reach_;
  std::vector<cplx> values_;
};

struct LatticeTerm {
  cplx amp;
  std::array<std::int64_t, kMaxGenus> m;
};

struct CenterLabel {
  RVector c;
  std::vector<std::int64_t> kc;  // K c, integral
  TruncationPlan plan;
};

// Terms of Theta[c, 0](K w + xi | tau K) at height y, w = x + tau y, as
// amplitude times exp(2 pi i m.x).  `s` is y + K^{-1} a, the centre shift.
void lattice_terms(const WenMatrix& k, const RMatrix& kr, const RMatrix& y_mat, const TorusParams& tau,
                   const CenterLabel& lab, const RVector& s, const CVector& arg_const, std::vector<LatticeTerm>& out) {
  out.clear();
  const std::size_t g = k.g();
  const RVector centre = -(lab.c + s);
  std::vector<std::int64_t> kvec(g), lo(g), hi(g);
  for (std::size_t j = 0; j < g; ++j) {
    lo[j] = static_cast<std::int64_t>(std::ceil(centre(j) - lab.plan.axis_extent[j]));
    hi[j] = static_cast<std::int64_t>(std::floor(centre(j) + lab.plan.axis_extent[j]));
    if (lo[j] > hi[j]) return;
    kvec[j] = lo[j];
  }
  RVector w(g), v(g);
  while (true) {
    for (std::size_t j = 0; j < g; ++j) w(j) = static_cast<double>(kvec[j]) - centre(j);
    if (w.dot(y_mat * w) <= lab.plan.radius * lab.plan.radius) {
      cplx lin = 0;
      for (std::size_t j = 0; j < g; ++j) {
        v(j) = static_cast<double>(kvec[j]) + lab.c(j);
        lin += v(j) * arg_const(j);
      }
      LatticeTerm term{std::exp(kI * kPi * tau.tau * v.dot(kr * v) + 2.0 * kI * kPi * lin), {}};
      for (std::size_t i = 0; i < g; ++i) {
        std::int64_t m = lab.kc[i];
        for (std::size_t j = 0; j < g; ++j) m += k.K()(i, j) * kvec[j];
        term.m[i] = m;
      }
      out.push_back(term);
    }
    std::size_t j = 0;
    while (j < g && ++kvec[j] > hi[j]) {
      kvec[j] = lo[j];
      ++j;
    }
    if (j == g) return;
  }
}

// Tensor rule of size n for the center Gram.
CMatrix center_gram_tensor(const WenMatrix& k, const CVector& xi, const TorusParams& tau,
                           const std::vector<PiElement>& basis, std::size_t n) {
  const std::size_t g = k.g();
  const auto rule = gauss_legendre(n);
  const RMatrix kr = real_k(k);
  const RMatrix y_mat = tau.t * kr;
  CMatrix om(g, g);
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j) om(i, j) = tau.tau * kr(i, j);
  const OmegaMatrix omega = OmegaMatrix::make(om);
  const RVector a = xi.imag() / tau.t;
  const RVector shift_a = k_inverse_apply(k, a);

  std::vector<CenterLabel> labels;
  for (const auto& c : basis) {
    CenterLabel l;
    l.c = Eigen::Map<const RVector>(c.values().data(), static_cast<Eigen::Index>(g));
    const auto kc = k.K().apply(c.numerators());
    for (auto v : kc) l.kc.push_back(v / c.denominator());
    l.plan = truncation_plan(omega, c.values(), kKernelTol);
    labels.push_back(std::move(l));
  }
  const FourierTable fourier(rule, 256);
  const std::size_t nodes = ipow(n, g);
  const std::size_t nb = basis.size();
  constexpr std::size_t chunk = 8;
  std::vector<CMatrix> partial(chunk_count(nodes, chunk));

  parallel_chunks(nodes, chunk, [&](std::size_t idx, std::size_t begin, std::size_t end) {
    CMatrix acc = CMatrix::Zero(static_cast<Eigen::Index>(nb), static_cast<Eigen::Index>(nb));
    std::vector<std::vector<LatticeTerm>> terms(nb);
    RVector y(g);
    for (std::size_t node = begin; node < end; ++node) {
      double weight = 1.0;
      std::size_t rest = node;
      for (std::size_t j = 0; j < g; ++j) {
        const std::size_t d = rest % n;
        rest /= n;
        y(j) = rule.nodes[d];
        weight *= rule.weights[d];
      }
      const double h = std::exp(-2.0 * kPi * tau.t * (y.dot(kr * y) + 2.0 * a.dot(y)));
      const CVector arg_const = tau.tau * (kr * y).cast<cplx>() + xi;
      for (std::size_t ci = 0; ci < nb; ++ci) lattice_terms(k, kr, y_mat, tau, labels[ci], y + shift_a, arg_const, terms[ci]);
      for (std::size_t c1 = 0; c1 < nb; ++c1)
        for (std::size_t c2 = 0; c2 < nb; ++c2) {
          cplx s = 0;
          for (const auto& t1 : terms[c1])
            for (const auto& t2 : terms[c2]) {
              cplx f = t1.amp * std::conj(t2.amp);
              for (std::size_t j = 0; j < g; ++j) f *= fourier(t1.m[j] - t2.m[j]);
              s += f;
            }
          acc(static_cast<Eigen::Index>(c1), static_cast<Eigen::Index>(c2)) += weight * h * s;
        }
    }
    partial[idx] = std::move(acc);
  });
  CMatrix total = CMatrix::Zero(static_cast<Eigen::Index>(nb), static_cast<Eigen::Index>(nb));
  for (const auto& p : partial) total += p;
  return total;
}

struct TensorInner {
  cplx value = 0;
  double scale = 0;
};

TensorInner tensor_inner(const WenMatrix& k, const CVector& xi, const TorusParams& tau, const CenterFunction& f1,
                         const CenterFunction& f2, std::size_t n) {
  const std::size_t g = k.g();
  const auto rule = gauss_legendre(n);
  const std::size_t total = ipow(n, 2 * g);
  constexpr std::size_t chunk = 1024;
  std::vector<TensorInner> partial(chunk_count(total, chunk));
  parallel_chunks(total, chunk, [&](std::size_t idx, std::size_t begin, std::size_t end) {
    TensorInner acc;
    CVector z(g);
    for (std::size_t p = begin; p < end; ++p) {
      std::size_t rest = p;
      double weight = 1.0;
      RVector x(g), y(g);
      for (std::size_t j = 0; j < 2 * g; ++j) {
        const std::size_t d = rest % n;
        rest /= n;
        (j < g ? x(j) : y(j - g)) = rule.nodes[d];
        weight *= rule.weights[d];
      }
      for (std::size_t j = 0; j < g; ++j) z(j) = x(j) + tau.tau * y(j);
      const double wh = weight * metric_weight_g(k, xi, tau, z);
      const cplx v1 = f1(z), v2 = f2(z);
      acc.value += wh * v1 * std::conj(v2);
      acc.scale += wh * std::abs(v1) * std::abs(v2);
    }
    partial[idx] = acc;
  });
  TensorInner out;
  for (const auto& p : partial) {
    out.value += p.value;
    out.scale += p.scale;
  }
  return out;
}

std::size_t half_points(std::size_t n) { return std::max<std::size_t>(1, n / 2); }

}  // namespace

std::string to_string(QuadratureScheme s) {
  switch (s) {
    case QuadratureScheme::Auto: return "auto";
    case QuadratureScheme::TensorGauss: return "tensor-gauss";
    case QuadratureScheme::QuasiMonteCarlo: return "qmc";
  }
  return "unknown";
}

void QuadratureSpec::validate() const {
  if (points_per_axis == 0 || total_samples == 0 || batches < 2 || max_evaluations == 0)
    throw std::invalid_argument("quadrature sizes must be positive (and at least two QMC batches)");
  if (!(tol > 0)) throw std::invalid_argument("quadrature tolerance must be positive");
}

bool GramReport::scalar(double rel, double sigmas) const {
  if (off_diagonal >= rel || diagonal_spread >= rel) return false;
  if (scheme == QuadratureScheme::QuasiMonteCarlo) return off_diagonal_sigmas < sigmas && diagonal_sigmas < sigmas;
  return true;
}

double metric_weight_1d(std::int64_t k, cplx xi, const TorusParams& tau, cplx z) {
  const double y = z.imag() / tau.t;
  const double a = xi.imag() / tau.t;
  return std::exp(-2.0 * kPi * static_cast<double>(k) * tau.t * y * y - 4.0 * kPi * a * tau.t * y);
}

double metric_weight_g(const WenMatrix& k, const CVector& xi, const TorusParams& tau, const CVector& z) {
  const std::size_t g = k.g();
  if (static_cast<std::size_t>(xi.size()) != g || static_cast<std::size_t>(z.size()) != g)
    throw Error(ErrorCode::ShapeMismatch, "metric arguments need one entry per layer");
  const RVector y = z.imag() / tau.t;
  const RVector a = xi.imag() / tau.t;
  return std::exp(-2.0 * kPi * tau.t * (y.dot(real_k(k) * y) + 2.0 * a.dot(y)));
}

cplx inner_product_center(const WenMatrix& k, const CVector& xi, const TorusParams& tau, const CenterFunction& f1,
                          const CenterFunction& f2, const QuadratureSpec& quad) {
  quad.validate();
  const std::size_t n = quad.points_per_axis, g = k.g();
  const double cost = power_count(n, 2 * g) + power_count(half_points(n), 2 * g);
  if (cost > static_cast<double>(quad.max_evaluations))
    throw Error(ErrorCode::SamplingBudgetExceeded, "tensor rule needs " + std::to_string(cost) + " evaluations");
  const auto fine = tensor_inner(k, xi, tau, f1, f2, n);
  const auto coarse = tensor_inner(k, xi, tau, f1, f2, half_points(n));
  const double shift = std::abs(fine.value - coarse.value);
  if (shift > quad.tol * fine.scale)
    throw Error(ErrorCode::QuadratureTooCoarse, "halving the rule moves the result by " + std::to_string(shift) +
                                                    " against scale " + std::to_string(fine.scale));
  return fine.value;
}

double kappa_closed_form(const WenMatrix& k, const CVector& xi, const TorusParams& tau) {
  const RVector a = xi.imag() / tau.t;
  const double g = static_cast<double>(k.g());
  return std::pow(2.0 * tau.t, -g / 2.0) / std::sqrt(static_cast<double>(k.delta())) *
         std::exp(2.0 * kPi * tau.t * a.dot(k_inverse_apply(k, a)));
}

double kappa_uniform_form(const WenMatrix& k, const CVector& xi, const TorusParams& tau) {
  const RVector a = xi.imag() / tau.t;
  const double g = static_cast<double>(k.g());
  return std::pow(2.0 * tau.t * static_cast<double>(k.delta()), -g / 2.0) *
         std::exp(2.0 * kPi * tau.t * a.dot(k_inverse_apply(k, a)));
}

GramReport gram_center(const WenMatrix& k, const CVector& xi, const TorusParams& tau, const QuadratureSpec& quad,
                       const std::vector<PiElement>& basis) {
  quad.validate();
  if (static_cast<std::size_t>(xi.size()) != k.g()) throw Error(ErrorCode::ShapeMismatch, "xi needs one entry per layer");
  GramReport r;
  r.basis = default_center_basis(k, basis);
  r.scheme = QuadratureScheme::TensorGauss;
  r.primary = k.primary();
  const std::size_t n = quad.points_per_axis;
  r.evaluations = static_cast<std::size_t>(power_count(n, 2 * k.g()));
  r.matrix = center_gram_tensor(k, xi, tau, r.basis, n);
  const CMatrix coarse = center_gram_tensor(k, xi, tau, r.basis, half_points(n));
  r.std_error = RMatrix::Zero(r.matrix.rows(), r.matrix.cols());
  summarise(r);
  r.quad_error = (r.matrix - coarse).cwiseAbs().maxCoeff() / r.mean_diagonal;
  r.kappa_ref = kappa_closed_form(k, xi, tau);
  if (r.quad_error > quad.tol)
    throw Error(ErrorCode::QuadratureTooCoarse, "halving the rule moves the Gram matrix by " +
                                                    std::to_string(r.quad_error) + " (relative)");
  return r;
}

GramReport gram_center_direct(const WenMatrix& k, const CVector& xi, const TorusParams& tau,
                              const QuadratureSpec& quad, const std::vector<PiElement>& basis) {
  const auto labels = default_center_basis(k, basis);
  const auto datum = validate_wen_datum(k, minimal_particle_counts(k));
  const auto spec = WaveFunctionSpec::make(datum, xi, tau);
  const std::size_t nb = labels.size();
  GramReport r;
  r.basis = labels;
  r.scheme = QuadratureScheme::TensorGauss;
  r.primary = k.primary();
  r.evaluations = static_cast<std::size_t>(power_count(quad.points_per_axis, 2 * k.g())) * nb * nb;
  r.matrix = CMatrix::Zero(static_cast<Eigen::Index>(nb), static_cast<Eigen::Index>(nb));
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      const auto f1 = [&](const CVector& w) { return center_basis(spec, labels[i], w); };
      const auto f2 = [&](const CVector& w) { return center_basis(spec, labels[j], w); };
      r.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = inner_product_center(k, xi, tau, f1, f2, quad);
    }
  r.std_error = RMatrix::Zero(r.matrix.rows(), r.matrix.cols());
  summarise(r);
  r.kappa_ref = kappa_closed_form(k, xi, tau);
  return r;
}

GramReport gram_manybody(const WaveFunctionSpec& spec, const QuadratureSpec& quad, const std::vector<PiElement>& basis) {
  quad.validate();
  const auto& datum = spec.datum();
  GramReport r;
  r.basis = basis.empty() ? rep_matrices(datum).basis : basis;
  for (const auto& c : r.basis)
    if (!spec.pi().contains(c)) throw Error(ErrorCode::ShapeMismatch, "basis label is not an element of Pi");
  r.primary = spec.K().primary();
  const std::size_t nb = r.basis.size();

  std::vector<std::size_t> layer_of;
  for (std::size_t k = 0; k < datum.n_vec().size(); ++k)
    for (std::int64_t p = 0; p < datum.n_vec()[k]; ++p) layer_of.push_back(k);
  const std::size_t particles = layer_of.size();
  const std::size_t dim = 2 * particles;

  const std::size_t n = quad.points_per_axis;
  const double tensor_cost = power_count(n, dim) + power_count(half_points(n), dim);
  const bool fits = tensor_cost <= static_cast<double>(quad.max_evaluations);
  QuadratureScheme scheme = quad.scheme;
  if (scheme == QuadratureScheme::Auto) scheme = fits ? QuadratureScheme::TensorGauss : QuadratureScheme::QuasiMonteCarlo;
  if (scheme == QuadratureScheme::TensorGauss && !fits)
    throw Error(ErrorCode::SamplingBudgetExceeded, "tensor rule needs " + std::to_string(tensor_cost) + " evaluations");
  r.scheme = scheme;

  const double d = static_cast<double>(datum.d());
  // Adds weight * Phi Phi^H at the point (x_p, y_p), p = 0..particles-1.
  auto accumulate = [&](const double* x, const double* y, double weight, CMatrix& acc, std::vector<cplx>& phi) {
    Configuration config;
    config.coords.resize(datum.n_vec().size());
    double h = 1.0;
    for (std::size_t p = 0; p < particles; ++p) {
      const cplx z = x[p] + spec.tau().tau * y[p];
      config.coords[layer_of[p]].push_back(z);
      const double a = spec.a()(static_cast<Eigen::Index>(layer_of[p]));
      h *= std::exp(-2.0 * kPi * d * spec.tau().t * y[p] * y[p] - 4.0 * kPi * a * spec.tau().t * y[p]);
    }
    const cplx jastrow = jastrow_factor(datum, spec.tau(), config, spec.tol());
    const CVector w = config.w();
    for (std::size_t c = 0; c < nb; ++c) phi[c] = center_basis(spec, r.basis[c], w) * jastrow;
    const double wh = weight * h;
    for (std::size_t i = 0; i < nb; ++i)
      for (std::size_t j = 0; j < nb; ++j)
        acc(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += wh * phi[i] * std::conj(phi[j]);
  };
  const auto zero = [&] { return CMatrix::Zero(static_cast<Eigen::Index>(nb), static_cast<Eigen::Index>(nb)).eval(); };

  if (scheme == QuadratureScheme::TensorGauss) {
    auto run = [&](std::size_t size) {
      const auto rule = gauss_legendre(size);
      const std::size_t total = ipow(size, dim);
      constexpr std::size_t chunk = 1024;
      std::vector<CMatrix> partial(chunk_count(total, chunk));
      parallel_chunks(total, chunk, [&](std::size_t idx, std::size_t begin, std::size_t end) {
        CMatrix acc = zero();
        std::vector<cplx> phi(nb);
        std::vector<double> xy(dim);
        for (std::size_t p = begin; p < end; ++p) {
          std::size_t rest = p;
          double weight = 1.0;
          for (std::size_t j = 0; j < dim; ++j) {
            const std::size_t digit = rest % size;
            rest /= size;
            xy[j] = rule.nodes[digit];
            weight *= rule.weights[digit];
          }
          accumulate(xy.data(), xy.data() + particles, weight, acc, phi);
        }
        partial[idx] = std::move(acc);
      });
      CMatrix total_m = zero();
      for (const auto& p : partial) total_m += p;
      return total_m;
    };
    r.matrix = run(n);
    const CMatrix coarse = run(half_points(n));
    r.evaluations = static_cast<std::size_t>(power_count(n, dim));
    r.std_error = RMatrix::Zero(r.matrix.rows(), r.matrix.cols());
    summarise(r);
    r.quad_error = (r.matrix - coarse).cwiseAbs().maxCoeff() / r.mean_diagonal;
    return r;
  }

  std::size_t per_batch = 1;
  while (per_batch * quad.batches < quad.total_samples) per_batch *= 2;
  const std::size_t total = per_batch * quad.batches;
  if (total > quad.max_evaluations)
    throw Error(ErrorCode::SamplingBudgetExceeded,
                std::to_string(total) + " samples exceed the budget of " + std::to_string(quad.max_evaluations));
  const ShiftedSobol points(dim, per_batch, quad.batches, quad.seed);
  std::vector<CMatrix> batch_means;
  for (std::size_t b = 0; b < quad.batches; ++b) {
    constexpr std::size_t chunk = 2048;
    std::vector<CMatrix> partial(chunk_count(per_batch, chunk));
    parallel_chunks(per_batch, chunk, [&](std::size_t idx, std::size_t begin, std::size_t end) {
      CMatrix acc = zero();
      std::vector<cplx> phi(nb);
      std::vector<double> xy(dim);
      for (std::size_t i = begin; i < end; ++i) {
        points.point(b, i, xy.data());
        accumulate(xy.data(), xy.data() + particles, 1.0, acc, phi);
      }
      partial[idx] = std::move(acc);
    });
    CMatrix sum = zero();
    for (const auto& p : partial) sum += p;
    batch_means.push_back(sum / static_cast<double>(per_batch));
  }
  const double nbatch = static_cast<double>(quad.batches);
  r.matrix = zero();
  for (const auto& m : batch_means) r.matrix += m;
  r.matrix /= nbatch;
  r.evaluations = total;
  r.std_error = RMatrix::Zero(r.matrix.rows(), r.matrix.cols());
  for (const auto& m : batch_means) r.std_error += (m - r.matrix).cwiseAbs2();
  r.std_error = (r.std_error / (nbatch * (nbatch - 1.0))).cwiseSqrt();
  summarise(r);
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
      if (i != j && r.std_error(ii, jj) > 0)
        r.off_diagonal_sigmas = std::max(r.off_diagonal_sigmas, std::abs(r.matrix(ii, jj)) / r.std_error(ii, jj));
      if (i < j) {
        const double diff = (r.matrix(ii, ii) - r.matrix(jj, jj)).real();
        double var = 0;
        for (const auto& m : batch_means) {
          const double e = (m(ii, ii) - m(jj, jj)).real() - diff;
          var += e * e;
        }
        const double se = std::sqrt(var / (nbatch * (nbatch - 1.0)));
        if (se > 0) r.diagonal_sigmas = std::max(r.diagonal_sigmas, std::abs(diff) / se);
      }
    }
  return r;
}

}  // namespace kvw
