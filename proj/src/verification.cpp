#include "kvw/verification.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "kvw/bundle.hpp"
#include "kvw/error.hpp"
#include "kvw/heisenberg.hpp"
#include "kvw/hermitian.hpp"
#include "kvw/wavefunctions.hpp"

namespace kvw {

namespace {

constexpr const char* kThetaRules = "theta quasi-periodicity under z -> z + 1 and z -> z + tau";
constexpr const char* kOddTheta = "odd theta vanishes at the origin and is odd";
constexpr const char* kMultiRules = "Riemann theta quasi-periodicity under z -> z + l and z -> z + Omega l";
constexpr const char* kFactor = "diagonal Omega factorises the Riemann theta";
constexpr const char* kWenExact = "K_{p,g}: delta = pg + 1, rho = g, adjugate (pg - p + 1) I - p(N - I), |Pi| = delta";
constexpr const char* kHeisRel = "T1^delta = T2^delta = I and T1 T2 = q T2 T1";
constexpr const char* kPrimitive = "q is a primitive delta-th root of unity iff K is primary";
constexpr const char* kIrreducible = "(chi, chi) = 1 for the standard representation";
constexpr const char* kOrthogonal = "center-of-mass thetas are orthogonal";
constexpr const char* kKappaStated = "common norm (2 t delta)^{-g/2} exp(2 pi t (a, K^{-1} a))";
constexpr const char* kKappaGauss = "common norm (2 t)^{-g/2} delta^{-1/2} exp(2 pi t (a, K^{-1} a))";
constexpr const char* kWfPeriod = "many-body wave function: unit shift gives eps, tau shift gives eps exp(-2 pi i xi_k) phi^d";
constexpr const char* kMagnetic = "T1 Phi_c = upsilon(u, c) Phi_c and T2 Phi_c = Phi_{c+u}";
constexpr const char* kGramScalar = "many-body Gram matrix is a multiple of the identity";
constexpr const char* kSlope = "slope -rho/delta, |slope| = g/(gp+1) for K_{p,g}";
constexpr const char* kDegree = "restricted bundle has rank delta and degree -rho";
constexpr const char* kStable = "restricted bundle stable iff gcd(delta, rho) = 1";
constexpr const char* kTotalChern = "total Chern coefficients C(delta, i)/delta^i";
constexpr const char* kPairing = "dual generators pair integrally with Z^g + tau K Z^g";

double rel(cplx lhs, cplx rhs) {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  return scale > 0 ? std::abs(lhs - rhs) / scale : 0.0;
}

std::string sci(double x) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << x;
  return s.str();
}

std::string matrix_label(const WenMatrix& k) {
  std::ostringstream s;
  s << "K=[";
  for (std::size_t i = 0; i < k.g(); ++i) {
    s << (i ? ";" : "");
    for (std::size_t j = 0; j < k.g(); ++j) s << (j ? "," : "") << k.K()(i, j);
  }
  s << "]";
  return s.str();
}

WenMatrix wen(std::vector<std::vector<std::int64_t>> rows) { return validate_wen_matrix(IntMatrix::from_rows(rows)); }

std::vector<WenMatrix> sample_wen_matrices(std::size_t count, std::size_t max_g, std::int64_t max_entry, std::uint64_t seed,
                                           std::int64_t max_delta) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> gdist(1, max_g);
  std::uniform_int_distribution<std::int64_t> edist(0, max_entry);
  std::vector<WenMatrix> out;
  while (out.size() < count) {
    const std::size_t g = gdist(rng);
    IntMatrix m(g, g);
    for (std::size_t i = 0; i < g; ++i)
      for (std::size_t j = i; j < g; ++j) m(i, j) = m(j, i) = edist(rng);
    try {
      auto w = validate_wen_matrix(m);
      if (max_delta > 0 && w.delta() > max_delta) continue;
      out.push_back(std::move(w));
    } catch (const Error&) {
    }
  }
  return out;
}

cplx random_z(std::mt19937_64& rng, const TorusParams& tau) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double x = u(rng);
  return x + tau.tau * u(rng);
}

struct ThetaLaws {
  double unit = 0, tau = 0, origin = 0, odd = 0;
};

// Random characteristics and points; tau random in t in [0.5, 2] unless fixed.
ThetaLaws theta_laws(std::mt19937_64& rng, int trials, const TorusParams* fixed) {
  std::uniform_real_distribution<double> ch(-1.0, 1.0), tdist(0.5, 2.0), sdist(-0.5, 0.5);
  ThetaLaws w;
  for (int i = 0; i < trials; ++i) {
    TorusParams tau;
    if (fixed) {
      tau = *fixed;
    } else {
      const double s = sdist(rng);
      tau = TorusParams::make({s, tdist(rng)});
    }
    const double a = ch(rng), b = ch(rng);
    const cplx z = random_z(rng, tau);
    const cplx base = jacobi_theta(a, b, z, tau);
    w.unit = std::max(w.unit, rel(jacobi_theta(a, b, z + 1.0, tau), std::exp(2.0 * kI * kPi * a) * base));
    w.tau = std::max(w.tau, rel(jacobi_theta(a, b, z + tau.tau, tau),
                                std::exp(-2.0 * kI * kPi * (z + b) - kI * kPi * tau.tau) * base));
    w.origin = std::max(w.origin, std::abs(theta_odd(0.0, tau)));
    w.odd = std::max(w.odd, rel(theta_odd(-z, tau), -theta_odd(z, tau)));
  }
  return w;
}

void add_theta_checks(std::vector<Check>& out, const ThetaLaws& w, double rule_tol) {
  out.push_back(make_check("theta unit shift", kThetaRules, w.unit, rule_tol));
  out.push_back(make_check("theta tau shift", kThetaRules, w.tau, rule_tol));
  out.push_back(make_check("odd theta at 0", kOddTheta, w.origin, 1e-12));
  out.push_back(make_check("odd theta parity", kOddTheta, w.odd, 1e-12));
}

struct HeisenbergCounts {
  std::size_t matrices = 0, relation_failures = 0, primitive_failures = 0;
};

void heisenberg_relations(const WenMatrix& k, HeisenbergCounts& c) {
  const auto datum = validate_wen_datum(k, minimal_particle_counts(k));
  const auto r = rep_matrices(datum);
  ++c.matrices;
  if (!r.T1.pow(k.delta()).is_identity() || !r.T2.pow(k.delta()).is_identity() ||
      !(r.T1 * r.T2 == (r.T2 * r.T1).scaled(r.q_exponent)))
    ++c.relation_failures;
  if (r.q_primitive() != k.primary()) ++c.primitive_failures;
}

struct WfResiduals {
  double unit = 0, tau = 0, t1 = 0, t2 = 0;
};

WfResiduals wavefunction_residuals(const WenDatum& datum, const CVector& xi, const TorusParams& tau, std::mt19937_64& rng,
                                   int configs, bool magnetic) {
  const auto spec = WaveFunctionSpec::make(datum, xi, tau);
  std::vector<Configuration> samples;
  for (int i = 0; i < configs; ++i) samples.push_back(random_configuration(datum.n_vec(), tau, rng));
  WfResiduals r;
  for (const auto& c : spec.pi().elements()) {
    const auto q = quasi_periodicity_residual(spec, c, samples);
    r.unit = std::max(r.unit, q.unit_shift);
    r.tau = std::max(r.tau, q.tau_shift);
    if (magnetic) {
      r.t1 = std::max(r.t1, magnetic_action_residual(spec, c, Translation::T1, samples));
      r.t2 = std::max(r.t2, magnetic_action_residual(spec, c, Translation::T2, samples));
    }
  }
  return r;
}

CVector random_xi(std::mt19937_64& rng, std::size_t g, const TorusParams& tau) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  CVector xi(static_cast<Eigen::Index>(g));
  for (std::size_t j = 0; j < g; ++j) {
    const double a = u(rng);
    xi(static_cast<Eigen::Index>(j)) = a * tau.tau + u(rng);
  }
  return xi;
}

std::vector<Check> center_gram_checks(const WenMatrix& k, const CVector& xi, const TorusParams& tau, std::size_t points,
                                      bool stated_kappa) {
  QuadratureSpec q;
  q.points_per_axis = points;
  const auto r = gram_center(k, xi, tau, q);
  std::ostringstream label;
  label << matrix_label(k) << " tau=(" << tau.s << "," << tau.t << ")";
  double kappa_dev = 0, stated_dev = 0;
  const double stated = kappa_uniform_form(k, xi, tau);
  for (Eigen::Index i = 0; i < r.matrix.rows(); ++i) {
    kappa_dev = std::max(kappa_dev, std::abs(r.matrix(i, i).real() / *r.kappa_ref - 1.0));
    stated_dev = std::max(stated_dev, std::abs(r.matrix(i, i).real() / stated - 1.0));
  }
  std::vector<Check> out;
  out.push_back(make_check("center Gram off-diagonal " + label.str(), kOrthogonal, r.off_diagonal, 1e-8, false,
                           "halving error " + sci(r.quad_error)));
  out.push_back(make_check("center Gram diagonal spread " + label.str(), kOrthogonal, r.diagonal_spread, 1e-8));
  if (stated_kappa) {
    out.push_back(make_check("center Gram diagonal vs closed-form norm " + label.str(), kKappaStated, stated_dev, 1e-6, false,
                             "diagonal / closed-form norm = " + format_double(r.mean_diagonal / stated) +
                                 "; delta^{(g-1)/2} = " +
                                 format_double(std::pow(static_cast<double>(k.delta()), (static_cast<double>(k.g()) - 1.0) / 2.0))));
    Check gauss = make_check("center Gram diagonal vs Gaussian-integral norm " + label.str(), kKappaGauss, kappa_dev, 1e-6);
    if (gauss.verdict == Verdict::Pass) gauss.verdict = Verdict::Info;
    out.push_back(gauss);
  } else {
    out.push_back(make_check("center Gram diagonal vs norm " + label.str(), kKappaGauss, kappa_dev, 1e-6));
  }
  return out;
}

std::vector<Check> manybody_checks(const WaveFunctionSpec& spec, const VerifyOptions& opts, bool enforce) {
  QuadratureSpec q;
  q.scheme = QuadratureScheme::QuasiMonteCarlo;
  q.total_samples = opts.samples;
  q.seed = opts.seed;
  const auto r = gram_manybody(spec, q);
  const std::string samples = std::to_string(r.evaluations) + " samples";
  std::vector<Check> out = {
      make_check("many-body Gram samples", kGramScalar, static_cast<double>(r.evaluations), 1e6, true, samples),
      make_check("many-body Gram off-diagonal (stderr units)", kGramScalar, r.off_diagonal_sigmas, 3.0),
      make_check("many-body Gram diagonal differences (stderr units)", kGramScalar, r.diagonal_sigmas, 3.0),
      make_check("many-body Gram relative deviation", kGramScalar, std::max(r.off_diagonal, r.diagonal_spread), 0.02, false,
                 "off-diagonal " + sci(r.off_diagonal) + ", diagonal spread " + sci(r.diagonal_spread)),
  };
  // The samples floor is a reverse comparison.
  out[0].verdict = r.evaluations >= 1'000'000 ? Verdict::Pass : Verdict::Fail;
  if (!enforce)
    for (auto& c : out) c.verdict = Verdict::Info;
  return out;
}

Integer pascal(std::int64_t n, std::int64_t i) {
  std::vector<Integer> row{1};
  for (std::int64_t r = 1; r <= n; ++r) {
    std::vector<Integer> next(static_cast<std::size_t>(r + 1), 1);
    for (std::int64_t j = 1; j < r; ++j)
      next[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j - 1)] + row[static_cast<std::size_t>(j)];
    row = std::move(next);
  }
  return i <= n ? row[static_cast<std::size_t>(i)] : Integer(0);
}

std::size_t total_chern_mismatches(const WenMatrix& k) {
  const auto c = total_chern(k);
  std::size_t bad = 0;
  Integer power = 1;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] != Rational(pascal(k.delta(), static_cast<std::int64_t>(i)), power)) ++bad;
    power *= k.delta();
  }
  return bad;
}

// ---------------------------------------------------------------------------

std::vector<Check> criterion_theta(const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed + 101);
  std::vector<Check> out;
  add_theta_checks(out, theta_laws(rng, 100, nullptr), 1e-11);
  return out;
}

std::vector<Check> criterion_multivariate(const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed + 202);
  std::uniform_real_distribution<double> ch(-1.0, 1.0), half(-0.5, 0.5), pos(0.5, 1.5);
  std::uniform_int_distribution<int> li(-1, 1);
  double unit = 0, shift = 0, factor = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = static_cast<Eigen::Index>(1 + trial % 3);
    RMatrix b(g, g), x(g, g);
    for (Eigen::Index i = 0; i < g; ++i)
      for (Eigen::Index j = 0; j < g; ++j) {
        b(i, j) = half(rng);
        x(i, j) = half(rng);
      }
    const RMatrix y = b * b.transpose() + 0.5 * RMatrix::Identity(g, g);
    const CMatrix om = (x + x.transpose()).cast<cplx>() / 2.0 + kI * y.cast<cplx>();
    ThetaCharacteristics chars{std::vector<double>(static_cast<std::size_t>(g)), std::vector<double>(static_cast<std::size_t>(g))};
    CVector z(g);
    RVector l(g);
    for (Eigen::Index i = 0; i < g; ++i) {
      chars.a[static_cast<std::size_t>(i)] = ch(rng);
      chars.b[static_cast<std::size_t>(i)] = ch(rng);
      const double re = ch(rng);
      z(i) = cplx(re, 0.5 * ch(rng));
      l(i) = li(rng);
    }
    const ThetaEvaluator eval(OmegaMatrix::make(om), chars, 1e-14);
    const cplx base = eval(z);
    const CVector lc = l.cast<cplx>();
    cplx p1 = 0, p2 = 0;
    for (Eigen::Index i = 0; i < g; ++i) {
      p1 += chars.a[static_cast<std::size_t>(i)] * l(i);
      p2 += l(i) * (z(i) + chars.b[static_cast<std::size_t>(i)]);
    }
    const cplx quad = (lc.transpose() * om * lc)(0);
    unit = std::max(unit, rel(eval(z + lc), std::exp(2.0 * kI * kPi * p1) * base));
    shift = std::max(shift, rel(eval(z + om * lc), std::exp(-2.0 * kI * kPi * p2 - kI * kPi * quad) * base));

    // diagonal period matrix against a product of one-variable thetas
    CMatrix diag = CMatrix::Zero(g, g);
    cplx product = 1.0;
    for (Eigen::Index i = 0; i < g; ++i) {
      diag(i, i) = cplx(half(rng), pos(rng));
      product *= jacobi_theta(chars.a[static_cast<std::size_t>(i)], chars.b[static_cast<std::size_t>(i)], z(i),
                              TorusParams::make(diag(i, i)), 1e-15);
    }
    factor = std::max(factor, rel(riemann_theta(chars, z, OmegaMatrix::make(diag), 1e-14), product));
  }
  return {make_check("Riemann theta unit shift (g <= 3)", kMultiRules, unit, 1e-10),
          make_check("Riemann theta Omega shift (g <= 3)", kMultiRules, shift, 1e-10),
          make_check("diagonal Omega factorisation", kFactor, factor, 1e-11)};
}

std::vector<Check> criterion_wen(const VerifyOptions&) {
  std::size_t bad_delta = 0, bad_rho = 0, bad_primary = 0, bad_adj = 0, bad_pi = 0;
  for (std::int64_t p = 1; p <= 6; ++p)
    for (std::int64_t g = 1; g <= 6; ++g) {
      const auto k = jain_matrix(p, g);
      if (k.delta() != p * g + 1) ++bad_delta;
      if (k.rho() != g) ++bad_rho;
      if (!k.primary()) ++bad_primary;
      for (std::int64_t i = 0; i < g; ++i)
        for (std::int64_t j = 0; j < g; ++j)
          if (k.adjugate()(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) != (i == j ? p * (g - 1) + 1 : -p)) ++bad_adj;
      const auto snf = smith_normal_form(k.K());
      Integer order = 1;
      for (const auto& d : snf.diagonal) order *= d;
      if (order != k.delta() || pi_group(k).size() != static_cast<std::size_t>(k.delta())) ++bad_pi;
    }
  auto exact = [](std::string name, std::size_t bad) {
    return make_check(std::move(name), kWenExact, static_cast<double>(bad), 0.0, true, "mismatches over 36 matrices");
  };
  return {exact("delta = pg + 1", bad_delta), exact("rho = g", bad_rho), exact("primary", bad_primary),
          exact("adjugate entries", bad_adj), exact("|Pi| via Smith form", bad_pi)};
}

std::vector<Check> criterion_heisenberg(const VerifyOptions& o) {
  std::vector<WenMatrix> ks = {wen({{1}}), wen({{2}}), wen({{3}}), wen({{12}}), wen({{2, 0}, {0, 2}}), wen({{3, 1}, {1, 3}}),
                               jain_matrix(1, 2), jain_matrix(2, 2), jain_matrix(1, 3), jain_matrix(3, 3), jain_matrix(5, 2)};
  for (auto& k : sample_wen_matrices(80, 4, 5, o.seed + 303, 12)) ks.push_back(std::move(k));
  HeisenbergCounts counts;
  double worst_norm = 0;
  std::size_t normed = 0;
  for (const auto& k : ks) {
    heisenberg_relations(k, counts);
    if (k.delta() <= 7) {
      worst_norm = std::max(worst_norm, std::abs(irreducibility_norm(k) - 1.0));
      ++normed;
    }
  }
  const std::string over = std::to_string(counts.matrices) + " matrices with delta <= 12";
  return {make_check("T1, T2 relations", kHeisRel, static_cast<double>(counts.relation_failures), 0.0, true, over),
          make_check("q primitive iff primary", kPrimitive, static_cast<double>(counts.primitive_failures), 0.0, true, over),
          make_check("|(chi, chi) - 1|", kIrreducible, worst_norm, 1e-10, false,
                     std::to_string(normed) + " matrices with delta <= 7")};
}

std::vector<Check> criterion_center_gram(const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed + 505);
  std::vector<Check> out;
  for (const auto& k : {wen({{2}}), wen({{3}}), jain_matrix(1, 2)})
    for (cplx tv : {cplx(0.0, 1.0), cplx(0.3, 1.1)}) {
      const auto tau = TorusParams::make(tv);
      const CVector xi = random_xi(rng, k.g(), tau);
      for (auto& c : center_gram_checks(k, xi, tau, o.points, true)) out.push_back(std::move(c));
    }
  return out;
}

std::vector<Check> criterion_wf_periodicity(const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed + 606);
  std::vector<Check> out;
  const auto i = TorusParams::make({0.0, 1.0});
  const std::vector<std::pair<WenMatrix, std::vector<std::int64_t>>> cases = {{jain_matrix(1, 2), {1, 1}}, {wen({{2}}), {2}}};
  for (const auto& [k, n] : cases) {
    const auto datum = validate_wen_datum(k, n);
    const auto r = wavefunction_residuals(datum, random_xi(rng, k.g(), i), i, rng, 20, false);
    out.push_back(make_check("unit shift " + matrix_label(k), kWfPeriod, r.unit, 1e-9));
    out.push_back(make_check("tau shift " + matrix_label(k), kWfPeriod, r.tau, 1e-9));
  }
  return out;
}

std::vector<Check> criterion_magnetic(const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed + 707);
  const auto tau = TorusParams::make({0.3, 1.1});
  std::vector<std::pair<WenMatrix, std::vector<std::int64_t>>> cases;
  for (std::int64_t k = 1; k <= 5; ++k) cases.push_back({wen({{k}}), {2}});
  for (std::int64_t p = 1; p <= 4; ++p)
    for (std::int64_t g = 2; p * g + 1 <= 5; ++g) cases.push_back({jain_matrix(p, g), std::vector<std::int64_t>(static_cast<std::size_t>(g), 1)});
  cases.push_back({wen({{1, 0}, {0, 3}}), {3, 1}});
  double t1 = 0, t2 = 0;
  for (const auto& [k, n] : cases) {
    const auto r = wavefunction_residuals(validate_wen_datum(k, n), random_xi(rng, k.g(), tau), tau, rng, 20, true);
    t1 = std::max(t1, r.t1);
    t2 = std::max(t2, r.t2);
  }
  const std::string over = std::to_string(cases.size()) + " primary data with delta <= 5";
  return {make_check("T1 eigenvalue identity", kMagnetic, t1, 1e-9, false, over),
          make_check("T2 shift identity", kMagnetic, t2, 1e-9, false, over)};
}

std::vector<Check> criterion_manybody(const VerifyOptions& o) {
  const auto spec = WaveFunctionSpec::make(validate_wen_datum(wen({{2}}), {2}), CVector::Zero(1), TorusParams::make({0.0, 1.0}));
  return manybody_checks(spec, o, true);
}

std::vector<Check> criterion_bundle(const VerifyOptions& o) {
  std::size_t bad_slope = 0, bad_deg = 0, bad_stable = 0, bad_chern = 0;
  for (std::int64_t p = 1; p <= 6; ++p)
    for (std::int64_t g = 1; g <= 6; ++g)
      if (restricted_invariants(jain_matrix(p, g)).slope() != Rational(-g, p * g + 1)) ++bad_slope;
  const auto ks = sample_wen_matrices(50, 4, 5, o.seed + 909, 0);
  for (const auto& k : ks) {
    const auto b = restricted_invariants(k);
    if (b.degree != -k.rho() || b.rank != k.delta() || b.slope() * b.rank != Rational(b.degree)) ++bad_deg;
    if (b.stable != (std::gcd(k.delta(), k.rho()) == 1)) ++bad_stable;
    bad_chern += total_chern_mismatches(k);
  }
  return {make_check("Jain slopes p, g <= 6", kSlope, static_cast<double>(bad_slope), 0.0, true),
          make_check("rank and degree, 50 random K", kDegree, static_cast<double>(bad_deg), 0.0, true),
          make_check("stability, 50 random K", kStable, static_cast<double>(bad_stable), 0.0, true),
          make_check("total Chern coefficients, 50 random K", kTotalChern, static_cast<double>(bad_chern), 0.0, true)};
}

std::vector<Check> criterion_pairing(const VerifyOptions&) {
  const auto tau = TorusParams::make({0.3, 1.1});
  std::vector<Check> out;
  for (const auto& k : {wen({{2}}), jain_matrix(1, 2), jain_matrix(2, 3)}) {
    const auto p = check_dual_pairing(k, tau);
    out.push_back(make_check("pairing integrality " + matrix_label(k), kPairing, p.max_defect, 1e-12, false,
                             "det of pairing matrix " + format_double(p.determinant)));
  }
  return out;
}

struct CriterionSpec {
  const char* title;
  double limit;
  std::vector<Check> (*run)(const VerifyOptions&);
};

const CriterionSpec kCriteria[kCriterionCount] = {
    {"theta quasi-periodicity and odd theta", 2.0, criterion_theta},
    {"multivariate theta laws and factorisation", 5.0, criterion_multivariate},
    {"exact Wen invariants of K_{p,g}", 1.0, criterion_wen},
    {"Heisenberg relations and irreducibility", 10.0, criterion_heisenberg},
    {"center-of-mass Gram matrix", 60.0, criterion_center_gram},
    {"many-body quasi-periodicity", 10.0, criterion_wf_periodicity},
    {"magnetic translations on the many-body basis", 10.0, criterion_magnetic},
    {"many-body Gram matrix by QMC", 120.0, criterion_manybody},
    {"exact bundle invariants", 1.0, criterion_bundle},
    {"dual lattice pairing", 1.0, criterion_pairing},
};

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Info: return "INFO";
  }
  return "FAIL";
}

Check make_check(std::string name, std::string anchor, double measured, double threshold, bool inclusive, std::string detail) {
  Check c{std::move(name), std::move(anchor), measured, threshold, Verdict::Fail, std::move(detail)};
  const bool ok = inclusive ? measured <= threshold : measured < threshold;
  c.verdict = ok ? Verdict::Pass : Verdict::Fail;
  return c;
}

bool CriterionResult::checks_pass() const {
  for (const auto& c : checks)
    if (c.verdict == Verdict::Fail) return false;
  return true;
}

CriterionResult run_criterion(int id, const VerifyOptions& opts) {
  if (id < 1 || id > kCriterionCount) throw std::invalid_argument("criterion id out of range");
  const auto& spec = kCriteria[id - 1];
  CriterionResult r;
  r.id = id;
  r.title = spec.title;
  r.time_limit = spec.limit;
  const auto start = std::chrono::steady_clock::now();
  r.checks = spec.run(opts);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<Check> verify_datum(const InputDocument& doc, const VerifyOptions& opts) {
  const auto k = validate_wen_matrix(doc.K);
  const auto datum = validate_wen_datum(k, doc.n ? *doc.n : minimal_particle_counts(k));
  const auto tau = TorusParams::make(doc.tau ? *doc.tau : cplx(0.0, 1.0));
  CVector xi = CVector::Zero(static_cast<Eigen::Index>(k.g()));
  if (doc.xi) {
    if (doc.xi->size() != k.g()) throw Error(ErrorCode::ShapeMismatch, "xi needs one entry per layer");
    for (std::size_t j = 0; j < k.g(); ++j) xi(static_cast<Eigen::Index>(j)) = (*doc.xi)[j];
  }
  std::mt19937_64 rng(opts.seed + 1);
  std::vector<Check> out;

  add_theta_checks(out, theta_laws(rng, 50, &tau), 1e-11);

  const auto snf = smith_normal_form(k.K());
  Integer order = 1;
  for (const auto& d : snf.diagonal) order *= d;
  const bool pi_ok = order == k.delta() && pi_group(k).size() == static_cast<std::size_t>(k.delta());
  out.push_back(make_check("|Pi| = delta", "|K^{-1}Z^g / Z^g| = det K", pi_ok ? 0.0 : 1.0, 0.0, true));

  HeisenbergCounts counts;
  heisenberg_relations(k, counts);
  out.push_back(make_check("T1, T2 relations", kHeisRel, static_cast<double>(counts.relation_failures), 0.0, true));
  out.push_back(make_check("q primitive iff primary", kPrimitive, static_cast<double>(counts.primitive_failures), 0.0, true));
  if (k.delta() <= 10) out.push_back(make_check("|(chi, chi) - 1|", kIrreducible, std::abs(irreducibility_norm(k) - 1.0), 1e-10));

  const auto wf = wavefunction_residuals(datum, xi, tau, rng, 20, true);
  out.push_back(make_check("many-body unit shift", kWfPeriod, wf.unit, 1e-9));
  out.push_back(make_check("many-body tau shift", kWfPeriod, wf.tau, 1e-9));
  out.push_back(make_check("T1 eigenvalue identity", kMagnetic, wf.t1, 1e-9));
  out.push_back(make_check("T2 shift identity", kMagnetic, wf.t2, 1e-9));

  if (k.g() <= 2)
    for (auto& c : center_gram_checks(k, xi, tau, opts.points, false)) out.push_back(std::move(c));

  std::size_t particles = 0;
  for (auto n : datum.n_vec()) particles += static_cast<std::size_t>(n);
  if (particles <= 3) {
    const auto spec = WaveFunctionSpec::make(datum, xi, tau);
    for (auto& c : manybody_checks(spec, opts, k.primary())) out.push_back(std::move(c));
  }

  const auto b = restricted_invariants(k);
  out.push_back(make_check("slope times rank is degree", kDegree, b.slope() * b.rank == Rational(b.degree) ? 0.0 : 1.0, 0.0, true,
                           "slope " + b.slope_display()));
  out.push_back(make_check("stable iff gcd(delta, rho) = 1", kStable,
                           b.stable == (u_order(k) == k.delta()) ? 0.0 : 1.0, 0.0, true));
  out.push_back(make_check("total Chern coefficients", kTotalChern, static_cast<double>(total_chern_mismatches(k)), 0.0, true));
  out.push_back(make_check("dual pairing integrality", kPairing, check_dual_pairing(k, tau).max_defect, 1e-12));
  return out;
}

Json to_json(const Check& c) {
  Json j;
  j["name"] = c.name;
  j["anchor"] = c.anchor;
  j["measured"] = c.measured;
  j["threshold"] = c.threshold;
  j["verdict"] = to_string(c.verdict);
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

Json to_json(const CriterionResult& r) {
  Json j;
  j["id"] = r.id;
  j["title"] = r.title;
  j["time_limit_s"] = r.time_limit;
  j["verdict"] = r.checks_pass() ? "PASS" : "FAIL";
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  j["checks"] = checks;
  return j;
}

}  // namespace kvw
