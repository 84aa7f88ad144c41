#include "kvw/wavefunctions.hpp"

#include <algorithm>
#include <cmath>

#include "kvw/error.hpp"

namespace kvw {

namespace {

double relative(cplx lhs, cplx rhs) {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  return scale > 0 ? std::abs(lhs - rhs) / scale : 0.0;
}

cplx ipow(cplx z, std::int64_t e) {
  cplx r = 1.0;
  for (std::int64_t i = 0; i < e; ++i) r *= z;
  return r;
}

void check_shape(const WenDatum& datum, const Configuration& config) {
  const auto& n = datum.n_vec();
  bool ok = config.layers() == n.size();
  for (std::size_t k = 0; ok && k < n.size(); ++k) ok = config.coords[k].size() == static_cast<std::size_t>(n[k]);
  if (!ok) throw Error(ErrorCode::ShapeMismatch, "configuration layer sizes differ from the particle counts");
}

}  // namespace

std::size_t Configuration::particles() const {
  std::size_t n = 0;
  for (const auto& layer : coords) n += layer.size();
  return n;
}

CVector Configuration::w() const {
  CVector w(static_cast<Eigen::Index>(coords.size()));
  for (std::size_t k = 0; k < coords.size(); ++k) {
    cplx s = 0.0;
    for (auto z : coords[k]) s += z;
    w(static_cast<Eigen::Index>(k)) = s;
  }
  return w;
}

Configuration Configuration::shifted(cplx by) const {
  Configuration out = *this;
  for (auto& layer : out.coords)
    for (auto& z : layer) z += by;
  return out;
}

Configuration random_configuration(const std::vector<std::int64_t>& n_vec, const TorusParams& tau, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Configuration c;
  for (auto n : n_vec) {
    std::vector<cplx> layer;
    for (std::int64_t p = 0; p < n; ++p) {
      const double x = u(rng);
      layer.push_back(x + tau.tau * u(rng));
    }
    c.coords.push_back(std::move(layer));
  }
  return c;
}

WaveFunctionSpec WaveFunctionSpec::make(const WenDatum& datum, const CVector& xi, const TorusParams& tau, double tol) {
  const auto& k = datum.matrix();
  const std::size_t g = k.g();
  if (static_cast<std::size_t>(xi.size()) != g) throw Error(ErrorCode::ShapeMismatch, "xi needs one entry per layer");
  WaveFunctionSpec s(datum);
  s.xi_ = xi;
  s.tau_ = TorusParams::make(tau.tau);
  s.tol_ = tol;
  CMatrix om(g, g);
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j) om(i, j) = tau.tau * static_cast<double>(k.K()(i, j));
  s.omega_ = OmegaMatrix::make(om);
  s.pi_ = pi_group(k);
  s.a_ = xi.imag() / s.tau_.t;
  s.b_ = xi.real() - s.tau_.s * s.a_;
  s.sign_eps_ = ((datum.d() + k.diagonal_parity()) % 2 == 0) ? 1 : -1;
  for (const auto& c : s.pi_.elements()) {
    ThetaCharacteristics chars{c.values(), std::vector<double>(g, 0.0)};
    s.evaluators_.emplace_back(s.omega_, std::move(chars), tol);
  }
  return s;
}

const ThetaEvaluator& WaveFunctionSpec::center_evaluator(const PiElement& c) const {
  return evaluators_[pi_.index_of(c)];
}

cplx one_particle_basis(std::int64_t k, cplx xi, const TorusParams& tau, std::int64_t j, cplx z, double tol) {
  if (k < 1 || j < 1 || j > k)
    throw Error(ErrorCode::IndexOutOfRange, "basis index " + std::to_string(j) + " outside 1.." + std::to_string(k));
  const double kd = static_cast<double>(k);
  return jacobi_theta(static_cast<double>(j - 1) / kd, 0.0, kd * z + xi, TorusParams::make(kd * tau.tau), tol);
}

cplx center_basis(const WaveFunctionSpec& spec, const PiElement& c, const CVector& w) {
  const auto& k = spec.K().K();
  const std::size_t g = spec.K().g();
  if (static_cast<std::size_t>(w.size()) != g) throw Error(ErrorCode::ShapeMismatch, "w needs one entry per layer");
  CVector arg = spec.xi();
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j) arg(i) += static_cast<double>(k(i, j)) * w(j);
  return spec.center_evaluator(c)(arg);
}

cplx automorphy_factor(const WaveFunctionSpec& spec, const RVector& l, const CVector& z) {
  const CVector lc = l.cast<cplx>();
  const std::size_t g = spec.K().g();
  CVector kz = CVector::Zero(static_cast<Eigen::Index>(g));
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j) kz(i) += static_cast<double>(spec.K().K()(i, j)) * z(j);
  const CVector inner = 2.0 * spec.xi() + 2.0 * kz + spec.omega().omega() * lc;
  return std::exp(-kI * kPi * lc.cwiseProduct(inner).sum());
}

cplx center_shift_s(const WaveFunctionSpec& spec, const PiElement& c, const RVector& a, const CVector& w) {
  return center_basis(spec, c, w + a.cast<cplx>());
}

cplx center_shift_r(const WaveFunctionSpec& spec, const PiElement& c, const RVector& b, const CVector& w) {
  return center_basis(spec, c, w + spec.tau().tau * b.cast<cplx>()) / automorphy_factor(spec, b, w);
}

cplx jastrow_factor(const WenDatum& datum, const TorusParams& tau, const Configuration& config, double tol) {
  check_shape(datum, config);
  const auto& k = datum.matrix().K();
  const std::size_t g = datum.matrix().g();
  cplx d = 1.0;
  for (std::size_t a = 0; a < g; ++a) {
    const auto& za = config.coords[a];
    for (std::size_t p = 0; p < za.size(); ++p)
      for (std::size_t q = p + 1; q < za.size(); ++q) d *= ipow(theta_odd(za[p] - za[q], tau, tol), k(a, a));
    for (std::size_t b = a + 1; b < g; ++b) {
      if (k(a, b) == 0) continue;
      for (auto zp : za)
        for (auto zq : config.coords[b]) d *= ipow(theta_odd(zp - zq, tau, tol), k(a, b));
    }
  }
  return d;
}

cplx kvw_wavefunction(const WaveFunctionSpec& spec, const PiElement& c, const Configuration& config) {
  check_shape(spec.datum(), config);
  return center_basis(spec, c, config.w()) * jastrow_factor(spec.datum(), spec.tau(), config, spec.tol());
}

cplx hr_wavefunction(std::int64_t m, std::int64_t n, cplx xi, const TorusParams& tau, std::int64_t j,
                     const std::vector<cplx>& z, double tol) {
  if (m < 1 || j < 1 || j > m)
    throw Error(ErrorCode::IndexOutOfRange, "basis index " + std::to_string(j) + " outside 1.." + std::to_string(m));
  if (static_cast<std::int64_t>(z.size()) != n) throw Error(ErrorCode::ShapeMismatch, "expected " + std::to_string(n) + " coordinates");
  cplx w = 0.0;
  for (auto zi : z) w += zi;
  const double md = static_cast<double>(m);
  cplx v = jacobi_theta(static_cast<double>(j - 1) / md, 0.0, md * w + xi, TorusParams::make(md * tau.tau), tol);
  for (std::size_t p = 0; p < z.size(); ++p)
    for (std::size_t q = p + 1; q < z.size(); ++q) v *= ipow(theta_odd(z[p] - z[q], tau, tol), m);
  return v;
}

cplx apply_translation(const WaveFunctionSpec& spec, const PiElement& c, Translation which, const Configuration& config) {
  const double d = static_cast<double>(spec.datum().d());
  if (which == Translation::T1) return kvw_wavefunction(spec, c, config.shifted(1.0 / d));
  const cplx tau = spec.tau().tau;
  cplx prefactor = 1.0;
  for (std::size_t k = 0; k < config.layers(); ++k)
    for (auto z : config.coords[k])
      prefactor *= std::exp((2.0 * kI * kPi * spec.xi()(static_cast<Eigen::Index>(k)) + kI * kPi * tau) / d + 2.0 * kI * kPi * z);
  return prefactor * kvw_wavefunction(spec, c, config.shifted(tau / d));
}

double magnetic_action_residual(const WaveFunctionSpec& spec, const PiElement& c, Translation which,
                                const std::vector<Configuration>& samples) {
  const auto& k = spec.K();
  const PiElement u = u_element(k);
  const cplx eigen = std::polar(1.0, 2.0 * kPi * static_cast<double>(upsilon(u, c, k)) / static_cast<double>(k.delta()));
  double worst = 0;
  for (const auto& config : samples) {
    const cplx lhs = apply_translation(spec, c, which, config);
    const cplx rhs = which == Translation::T1 ? eigen * kvw_wavefunction(spec, c, config) : kvw_wavefunction(spec, c + u, config);
    worst = std::max(worst, relative(lhs, rhs));
  }
  return worst;
}

QuasiPeriodicityResidual quasi_periodicity_residual(const WaveFunctionSpec& spec, const PiElement& c,
                                                    const std::vector<Configuration>& samples) {
  const cplx tau = spec.tau().tau;
  const double eps = spec.sign_eps();
  const std::int64_t d = spec.datum().d();
  QuasiPeriodicityResidual out;
  for (const auto& config : samples) {
    const cplx base = kvw_wavefunction(spec, c, config);
    for (std::size_t k = 0; k < config.layers(); ++k)
      for (std::size_t p = 0; p < config.coords[k].size(); ++p) {
        const cplx z = config.coords[k][p];
        Configuration moved = config;
        moved.coords[k][p] = z + 1.0;
        out.unit_shift = std::max(out.unit_shift, relative(kvw_wavefunction(spec, c, moved), eps * base));
        moved.coords[k][p] = z + tau;
        const cplx phi = std::exp(-kI * kPi * tau - 2.0 * kI * kPi * z);
        const cplx factor = eps * std::exp(-2.0 * kI * kPi * spec.xi()(static_cast<Eigen::Index>(k))) * ipow(phi, d);
        out.tau_shift = std::max(out.tau_shift, relative(kvw_wavefunction(spec, c, moved), factor * base));
      }
  }
  return out;
}

}  // namespace kvw
