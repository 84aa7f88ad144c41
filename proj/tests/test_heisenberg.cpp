#include <numeric>
#include <random>

#include "doctest.h"
#include "kvw/error.hpp"
#include "kvw/heisenberg.hpp"
#include "support.hpp"

using namespace kvw;

namespace {

HeisenbergElement random_element(const WenMatrix& k, const PiGroup& pi, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> idx(0, pi.size() - 1);
  std::uniform_int_distribution<std::int64_t> g(0, k.delta() - 1);
  const auto& a = pi.element(idx(rng));
  const auto& b = pi.element(idx(rng));
  return {a, b, g(rng), false};
}

WenMatrix single(std::int64_t m) { return validate_wen_matrix(IntMatrix::from_rows({{m}})); }

}  // namespace

TEST_CASE("pairing on a single layer") {
  for (std::int64_t kk = 1; kk <= 7; ++kk) {
    const auto k = single(kk);
    for (std::int64_t j = 0; j < kk; ++j)
      for (std::int64_t l = 0; l < kk; ++l)
        CHECK(upsilon(PiElement({j}, kk), PiElement({l}, kk), k) == (j * l) % kk);
  }
}

TEST_CASE("pairing is symmetric, biadditive and trivial on zero") {
  for (const auto& k : kvw::testing::random_wen_matrices(20, 3, 4, 41, 60)) {
    const auto pi = pi_group(k);
    const auto zero = PiElement::zero(k.g(), k.delta());
    for (const auto& a : pi.elements()) {
      CHECK(upsilon(zero, a, k) == 0);
      for (const auto& b : pi.elements()) {
        CHECK(upsilon(a, b, k) == upsilon(b, a, k));
        const auto& c = pi.element(pi.size() / 2);
        CHECK(upsilon(a + c, b, k) == (upsilon(a, b, k) + upsilon(c, b, k)) % k.delta());
      }
    }
  }
}

TEST_CASE("group law") {
  std::mt19937_64 rng(3);
  for (const auto& k : {jain_matrix(1, 2), jain_matrix(2, 2), single(4), validate_wen_matrix(IntMatrix::from_rows({{2, 0}, {0, 2}}))}) {
    const auto pi = pi_group(k);
    const auto e = HeisenbergElement::identity(k);
    for (int trial = 0; trial < 50; ++trial) {
      const auto x = random_element(k, pi, rng), y = random_element(k, pi, rng), z = random_element(k, pi, rng);
      CHECK(multiply(e, x, k) == x);
      CHECK(multiply(x, e, k) == x);
      CHECK(multiply(x, inverse(x, k), k) == e);
      CHECK(multiply(inverse(x, k), x, k) == e);
      CHECK(multiply(multiply(x, y, k), z, k) == multiply(x, multiply(y, z, k), k));
      // cocycle conditions for omega((a1,b1),(a2,b2)) = upsilon(a1, b2)
      const auto w = [&](const HeisenbergElement& p, const HeisenbergElement& q) { return upsilon(p.a, q.b, k); };
      const HeisenbergElement xy{x.a + y.a, x.b + y.b, 0, false}, yz{y.a + z.a, y.b + z.b, 0, false};
      CHECK((w(x, y) + w(xy, z)) % k.delta() == (w(x, yz) + w(y, z)) % k.delta());
      CHECK(w(e, x) == 0);
      CHECK(w(x, e) == 0);
    }
  }
}

TEST_CASE("commutator of (a,0) and (0,b) is the pairing") {
  const auto k = jain_matrix(2, 2);
  const auto pi = pi_group(k);
  const auto zero = PiElement::zero(2, 5);
  for (const auto& a : pi.elements())
    for (const auto& b : pi.elements()) {
      const HeisenbergElement x{a, zero, 0, false}, y{zero, b, 0, false};
      const auto xy = multiply(x, y, k), yx = multiply(y, x, k);
      CHECK(xy.a == yx.a);
      CHECK(xy.b == yx.b);
      CHECK((xy.gamma - yx.gamma + 5) % 5 == upsilon(a, b, k));
    }
}

TEST_CASE("standard action is a homomorphism") {
  std::mt19937_64 rng(8);
  for (const auto& k : {jain_matrix(1, 2), single(3), validate_wen_matrix(IntMatrix::from_rows({{3, 1}, {1, 3}}))}) {
    const auto pi = pi_group(k);
    for (int trial = 0; trial < 50; ++trial) {
      auto x = random_element(k, pi, rng), y = random_element(k, pi, rng);
      x.flip = trial % 2;
      y.flip = trial % 3 == 0;
      for (bool sharp : {false, true})
        CHECK(standard_action(x, k, pi, sharp) * standard_action(y, k, pi, sharp) ==
              standard_action(multiply(x, y, k), k, pi, sharp));
    }
  }
}

TEST_CASE("single layer representation matrices") {
  const auto k3 = validate_wen_datum(single(3), {1});
  const auto r = rep_matrices(k3);
  CHECK(r.T1.phase() == std::vector<std::int64_t>{0, 1, 2});
  CHECK(r.T2.perm() == std::vector<std::size_t>{1, 2, 0});
  CHECK(r.q_exponent == 1);
  const auto one = rep_matrices(validate_wen_datum(single(1), {1}));
  CHECK(one.T1.is_identity());
  CHECK(one.T2.is_identity());
  CHECK(one.T1.size() == 1);
}

TEST_CASE("two-layer K_{2,2} gives a primitive fifth root") {
  const auto r = rep_matrices(validate_wen_datum(jain_matrix(2, 2), {1, 1}));
  CHECK(r.delta == 5);
  CHECK(r.q_exponent == 2);
  CHECK(r.q_primitive());
  CHECK(r.u_powers);
}

TEST_CASE("relations hold exactly for delta up to 12") {
  std::size_t seen = 0;
  for (const auto& k : kvw::testing::random_wen_matrices(80, 3, 5, 99, 12)) {
    const auto datum = validate_wen_datum(k, minimal_particle_counts(k));
    const auto r = rep_matrices(datum);
    CHECK(r.T1.pow(r.delta).is_identity());
    CHECK(r.T2.pow(r.delta).is_identity());
    CHECK(r.T1 * r.T2 == (r.T2 * r.T1).scaled(r.q_exponent));
    CHECK(r.q_primitive() == k.primary());
    // q = exp(2 pi i n / d)
    CHECK(Rational(r.q_exponent, r.delta) == Rational(datum.n() % datum.d(), datum.d()));
    const CMatrix t1 = r.T1.to_complex(), t2 = r.T2.to_complex();
    const auto id = CMatrix::Identity(t1.rows(), t1.cols());
    CHECK((t1 * t1.adjoint() - id).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((t2 * t2.adjoint() - id).cwiseAbs().maxCoeff() < 1e-14);
    ++seen;
  }
  CHECK(seen == 80);
}

TEST_CASE("u-power order needs a primary matrix") {
  const auto two = validate_wen_datum(validate_wen_matrix(IntMatrix::from_rows({{2, 0}, {0, 2}})), {1, 1});
  try {
    rep_matrices(two, BasisOrder::UPowers);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonCyclicBasisOrder);
  }
  const auto r = rep_matrices(two);
  CHECK_FALSE(r.u_powers);
  CHECK(r.basis.size() == 4);
}

TEST_CASE("character norm of the standard representation") {
  CHECK(irreducibility_norm(single(2)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(irreducibility_norm(jain_matrix(1, 2)) - 1.0) < 1e-10);
  for (const auto& k : kvw::testing::random_wen_matrices(15, 3, 4, 5, 7)) CHECK(std::abs(irreducibility_norm(k) - 1.0) < 1e-10);
  CHECK_THROWS_AS(irreducibility_norm(jain_matrix(1, 10)), std::invalid_argument);
}

TEST_CASE("character norm of direct sums") {
  // V + V has (chi, chi) = 4; V + conj(V) has 2 because the central characters differ for delta >= 3
  for (const auto& k : {jain_matrix(1, 2), single(4), single(5)}) {
    const auto pi = pi_group(k);
    const auto n = static_cast<Eigen::Index>(pi.size());
    auto doubled = [&](const HeisenbergElement& x, bool conj) {
      const CMatrix m = standard_action(x, k, pi).to_complex();
      CMatrix out = CMatrix::Zero(2 * n, 2 * n);
      out.topLeftCorner(n, n) = m;
      out.bottomRightCorner(n, n) = conj ? CMatrix(m.conjugate()) : m;
      return out;
    };
    CHECK(std::abs(character_norm(k, [&](const HeisenbergElement& x) { return doubled(x, false); }) - 4.0) < 1e-10);
    CHECK(std::abs(character_norm(k, [&](const HeisenbergElement& x) { return doubled(x, true); }) - 2.0) < 1e-10);
  }
}
