#include <cmath>
#include <random>

#include "doctest.h"
#include "kvw/error.hpp"
#include "kvw/wavefunctions.hpp"
#include "support.hpp"

using namespace kvw;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

WenMatrix single(std::int64_t m) { return validate_wen_matrix(IntMatrix::from_rows({{m}})); }

CVector random_xi(std::size_t g, const TorusParams& tau, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CVector xi(static_cast<Eigen::Index>(g));
  for (std::size_t i = 0; i < g; ++i) {
    const double b = u(rng);
    xi(static_cast<Eigen::Index>(i)) = b + tau.tau * u(rng);
  }
  return xi;
}

std::vector<Configuration> samples(const WenDatum& datum, const TorusParams& tau, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Configuration> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_configuration(datum.n_vec(), tau, rng));
  return out;
}

}  // namespace

TEST_CASE("one-particle basis") {
  std::mt19937_64 rng(2);
  const auto tau = TorusParams::make({0.2, 0.9});
  for (int trial = 0; trial < 20; ++trial) {
    const cplx xi = kvw::testing::random_point(rng), z = kvw::testing::random_point(rng, -0.5, 0.5);
    CHECK(rel(one_particle_basis(1, xi, tau, 1, z), jacobi_theta(0, 0, z + xi, tau)) < 1e-14);
    for (std::int64_t k = 2; k <= 4; ++k)
      for (std::int64_t j = 1; j <= k; ++j) {
        const cplx h = one_particle_basis(k, xi, tau, j, z);
        const cplx q = std::polar(1.0, 2 * kPi * static_cast<double>(j - 1) / static_cast<double>(k));
        CHECK(rel(one_particle_basis(k, xi, tau, j, z + 1.0), h) < 1e-12);
        CHECK(rel(one_particle_basis(k, xi, tau, j, z + 1.0 / static_cast<double>(k)), q * h) < 1e-12);
        // T2 moves h_j to h_{j+1}
        const double kd = static_cast<double>(k);
        const cplx t2 = std::exp((2.0 * kI * kPi * xi + kI * kPi * tau.tau) / kd + 2.0 * kI * kPi * z) *
                        one_particle_basis(k, xi, tau, j, z + tau.tau / kd);
        CHECK(rel(t2, one_particle_basis(k, xi, tau, j % k + 1, z)) < 1e-11);
      }
  }
  CHECK_THROWS_AS(one_particle_basis(3, 0.0, tau, 4, 0.1), Error);
  CHECK_THROWS_AS(one_particle_basis(3, 0.0, tau, 0, 0.1), Error);
}

TEST_CASE("center basis on one layer is the one-particle basis") {
  std::mt19937_64 rng(4);
  const auto tau = TorusParams::make({-0.1, 1.3});
  for (std::int64_t m = 1; m <= 4; ++m) {
    const auto datum = validate_wen_datum(single(m), {1});
    const auto xi = random_xi(1, tau, rng);
    const auto spec = WaveFunctionSpec::make(datum, xi, tau);
    for (std::int64_t j = 1; j <= m; ++j) {
      CVector w(1);
      w << kvw::testing::random_point(rng);
      CHECK(rel(center_basis(spec, PiElement({j - 1}, m), w), one_particle_basis(m, xi(0), tau, j, w(0))) < 1e-12);
    }
  }
}

TEST_CASE("center basis is periodic and diagonalises S, permutes under R") {
  std::mt19937_64 rng(6);
  const auto tau = TorusParams::make({0.3, 1.1});
  for (const auto& k : {jain_matrix(1, 2), validate_wen_matrix(IntMatrix::from_rows({{2, 0}, {0, 2}})), single(3)}) {
    const auto datum = validate_wen_datum(k, minimal_particle_counts(k));
    const auto spec = WaveFunctionSpec::make(datum, random_xi(k.g(), tau, rng), tau);
    for (const auto& c : spec.pi().elements()) {
      CVector w(static_cast<Eigen::Index>(k.g()));
      for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = kvw::testing::random_point(rng, 0.0, 1.0);
      const cplx h = center_basis(spec, c, w);
      RVector l = RVector::Zero(w.size());
      l(0) = 1;
      CHECK(rel(center_basis(spec, c, w + l.cast<cplx>()), h) < 1e-12);
      // H(w + tau l) = U_l H(w) for integer l
      CHECK(rel(center_basis(spec, c, w + tau.tau * l.cast<cplx>()), automorphy_factor(spec, l, w) * h) < 1e-11);
      for (const auto& a : spec.pi().elements()) {
        const cplx ups = std::polar(1.0, 2 * kPi * static_cast<double>(upsilon(a, c, k)) / static_cast<double>(k.delta()));
        CHECK(rel(center_shift_s(spec, c, Eigen::Map<const RVector>(a.values().data(), w.size()), w), ups * h) < 1e-11);
        const auto bv = a.values();
        CHECK(rel(center_shift_r(spec, c, Eigen::Map<const RVector>(bv.data(), w.size()), w), center_basis(spec, c + a, w)) <
              1e-11);
      }
    }
  }
}

TEST_CASE("jastrow factor") {
  const auto tau = TorusParams::make({0.0, 1.0});
  std::mt19937_64 rng(12);
  const auto datum = validate_wen_datum(jain_matrix(1, 2), {2, 2});
  auto config = random_configuration(datum.n_vec(), tau, rng);
  const cplx base = jastrow_factor(datum, tau, config);
  CHECK(std::abs(base) > 0);
  // swapping within a layer multiplies by (-1)^{K_kk}
  auto swapped = config;
  std::swap(swapped.coords[0][0], swapped.coords[0][1]);
  CHECK(rel(jastrow_factor(datum, tau, swapped), base) < 1e-12);
  const auto fermi = validate_wen_datum(jain_matrix(2, 2), {2, 2});
  const cplx fbase = jastrow_factor(fermi, tau, config);
  CHECK(rel(jastrow_factor(fermi, tau, swapped), -fbase) < 1e-12);
  // coincident coordinates within a layer or across coupled layers
  auto same = config;
  same.coords[1][1] = same.coords[1][0];
  CHECK(std::abs(jastrow_factor(datum, tau, same)) < 1e-12);
  same = config;
  same.coords[1][0] = same.coords[0][1];
  CHECK(std::abs(jastrow_factor(datum, tau, same)) < 1e-12);
  // single layer is D_m
  const auto hr = validate_wen_datum(single(3), {3});
  auto one = random_configuration({3}, tau, rng);
  cplx dm = 1.0;
  for (int p = 0; p < 3; ++p)
    for (int q = p + 1; q < 3; ++q) dm *= std::pow(theta_odd(one.coords[0][p] - one.coords[0][q], tau), 3);
  CHECK(rel(jastrow_factor(hr, tau, one), dm) < 1e-12);
  Configuration wrong{{{0.1, 0.2}}};
  CHECK_THROWS_AS(jastrow_factor(hr, tau, wrong), Error);
}

TEST_CASE("wave function factorises into centre of mass and jastrow parts") {
  std::mt19937_64 rng(13);
  const auto tau = TorusParams::make({0.3, 1.1});
  const auto datum = validate_wen_datum(jain_matrix(1, 2), {1, 1});
  const auto spec = WaveFunctionSpec::make(datum, random_xi(2, tau, rng), tau);
  for (const auto& config : samples(datum, tau, 10, 3))
    for (const auto& c : spec.pi().elements())
      CHECK(rel(kvw_wavefunction(spec, c, config), center_basis(spec, c, config.w()) * jastrow_factor(datum, tau, config)) <
            1e-12);
}

TEST_CASE("one layer reproduces the Haldane-Rezayi functions") {
  std::mt19937_64 rng(14);
  const auto tau = TorusParams::make({0.1, 0.8});
  for (std::int64_t m = 1; m <= 3; ++m)
    for (std::int64_t n = 1; n <= 3; ++n) {
      const auto datum = validate_wen_datum(single(m), {n});
      const auto xi = random_xi(1, tau, rng);
      const auto spec = WaveFunctionSpec::make(datum, xi, tau);
      for (const auto& config : samples(datum, tau, 5, 20 + m * 7 + n))
        for (std::int64_t j = 1; j <= m; ++j)
          CHECK(rel(kvw_wavefunction(spec, PiElement({j - 1}, m), config),
                    hr_wavefunction(m, n, xi(0), tau, j, config.coords[0])) < 1e-11);
    }
}

TEST_CASE("Haldane-Rezayi symmetry and vanishing order") {
  std::mt19937_64 rng(15);
  const auto tau = TorusParams::make({0.0, 1.0});
  for (std::int64_t m = 1; m <= 4; ++m) {
    std::vector<cplx> z{0.11 + 0.3 * kI, 0.52 + 0.61 * kI, 0.27 + 0.83 * kI};
    auto swapped = z;
    std::swap(swapped[0], swapped[2]);
    const cplx v = hr_wavefunction(m, 3, 0.2, tau, 1, z);
    CHECK(rel(hr_wavefunction(m, 3, 0.2, tau, 1, swapped), (m % 2 ? -1.0 : 1.0) * v) < 1e-12);
    // |Phi| ~ h^m as z_2 approaches z_1
    std::vector<double> lh, lv;
    for (double h : {1e-2, 3e-3, 1e-3}) {
      auto near = z;
      near[1] = z[0] + h * std::polar(1.0, 0.7);
      lh.push_back(std::log(h));
      lv.push_back(std::log(std::abs(hr_wavefunction(m, 3, 0.2, tau, 1, near))));
    }
    const double slope = (lv.back() - lv.front()) / (lh.back() - lh.front());
    CHECK(std::abs(slope - static_cast<double>(m)) < 0.1);
    auto same = z;
    same[1] = same[0];
    CHECK(std::abs(hr_wavefunction(m, 3, 0.2, tau, 1, same)) < 1e-12);
  }
  // single particle: no jastrow factor
  CHECK(rel(hr_wavefunction(2, 1, 0.3, tau, 2, {0.1 + 0.2 * kI}), one_particle_basis(2, 0.3, tau, 2, 0.1 + 0.2 * kI)) < 1e-13);
  CHECK_THROWS_AS(hr_wavefunction(2, 1, 0.3, tau, 3, {0.1}), Error);
}

TEST_CASE("quasi-periodicity of the multilayer wave functions") {
  std::mt19937_64 rng(16);
  struct Case { WenMatrix k; std::vector<std::int64_t> n; };
  const std::vector<Case> cases{{single(2), {2}}, {single(3), {2}}, {single(3), {3}}, {jain_matrix(1, 2), {1, 1}},
                                {jain_matrix(2, 2), {1, 1}}, {jain_matrix(2, 2), {2, 2}}, {validate_wen_matrix(IntMatrix::from_rows({{2, 0}, {0, 2}})), {1, 1}}};
  for (cplx t : {cplx(0, 1), cplx(0.3, 1.1)}) {
    const auto tau = TorusParams::make(t);
    for (const auto& cs : cases) {
      const auto datum = validate_wen_datum(cs.k, cs.n);
      const auto spec = WaveFunctionSpec::make(datum, random_xi(cs.k.g(), tau, rng), tau);
      const auto smp = samples(datum, tau, 20, 77);
      for (const auto& c : spec.pi().elements()) {
        const auto r = quasi_periodicity_residual(spec, c, smp);
        CHECK(r.unit_shift < 1e-9);
        CHECK(r.tau_shift < 1e-9);
      }
    }
  }
}

TEST_CASE("sign of the unit shift") {
  const auto tau = TorusParams::make({0, 1});
  // m = 3, n = 2: d = 6, odd diagonal, sign -1 (antisymmetric pair)
  const auto s1 = WaveFunctionSpec::make(validate_wen_datum(single(3), {2}), CVector::Zero(1), tau);
  CHECK(s1.sign_eps() == -1);
  const auto s2 = WaveFunctionSpec::make(validate_wen_datum(single(2), {2}), CVector::Zero(1), tau);
  CHECK(s2.sign_eps() == 1);
  const auto s3 = WaveFunctionSpec::make(validate_wen_datum(jain_matrix(2, 2), {1, 1}), CVector::Zero(2), tau);
  CHECK(s3.sign_eps() == 1);  // d = 5, odd diagonal
  const auto s4 = WaveFunctionSpec::make(validate_wen_datum(jain_matrix(2, 2), {2, 2}), CVector::Zero(2), tau);
  CHECK(s4.sign_eps() == -1);  // d = 10, odd diagonal
}

TEST_CASE("magnetic translations act on the basis") {
  std::mt19937_64 rng(17);
  const auto tau = TorusParams::make({0.3, 1.1});
  struct Case { WenMatrix k; std::vector<std::int64_t> n; };
  const std::vector<Case> cases{{single(2), {2}}, {single(3), {1}}, {single(5), {2}}, {jain_matrix(1, 2), {1, 1}},
                                {jain_matrix(2, 2), {1, 1}}, {jain_matrix(1, 4), {1, 1, 1, 1}}};
  for (const auto& cs : cases) {
    const auto datum = validate_wen_datum(cs.k, cs.n);
    const auto spec = WaveFunctionSpec::make(datum, random_xi(cs.k.g(), tau, rng), tau);
    const auto smp = samples(datum, tau, 20, 5);
    for (const auto& c : spec.pi().elements()) {
      CHECK(magnetic_action_residual(spec, c, Translation::T1, smp) < 1e-9);
      CHECK(magnetic_action_residual(spec, c, Translation::T2, smp) < 1e-9);
    }
  }
}

TEST_CASE("T1 eigenvalue ratio is constant; T2 cycles through the u-orbit") {
  std::mt19937_64 rng(18);
  const auto tau = TorusParams::make({0, 1});
  const auto datum = validate_wen_datum(jain_matrix(1, 2), {1, 1});
  const auto spec = WaveFunctionSpec::make(datum, random_xi(2, tau, rng), tau);
  const auto u = u_element(datum.matrix());
  const auto smp = samples(datum, tau, 10, 9);
  for (const auto& c : spec.pi().elements()) {
    const cplx expected = std::polar(1.0, 2 * kPi * static_cast<double>(upsilon(u, c, datum.matrix())) / 3.0);
    for (const auto& config : smp)
      CHECK(rel(apply_translation(spec, c, Translation::T1, config) / kvw_wavefunction(spec, c, config), expected) < 1e-9);
  }
  // c = 0 has eigenvalue 1
  const auto zero = PiElement::zero(2, 3);
  CHECK(rel(apply_translation(spec, zero, Translation::T1, smp[0]), kvw_wavefunction(spec, zero, smp[0])) < 1e-9);
  // delta applications of T2 return to the start
  PiElement c = zero;
  for (int i = 0; i < 3; ++i) c = c + u;
  CHECK(c == zero);
}
