#include <doctest.h>

#include <numeric>

#include "kvw/bundle.hpp"
#include "support.hpp"

using namespace kvw;

namespace {

WenMatrix wen(std::vector<std::vector<std::int64_t>> rows) { return validate_wen_matrix(IntMatrix::from_rows(rows)); }

// C(n, i) from Pascal's triangle.
Integer pascal(std::int64_t n, std::int64_t i) {
  std::vector<Integer> row{1};
  for (std::int64_t r = 1; r <= n; ++r) {
    std::vector<Integer> next(static_cast<std::size_t>(r + 1), 1);
    for (std::int64_t j = 1; j < r; ++j) next[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j - 1)] + row[static_cast<std::size_t>(j)];
    row = std::move(next);
  }
  return i <= n ? row[static_cast<std::size_t>(i)] : Integer(0);
}

}  // namespace

TEST_CASE("first Chern coefficients") {
  for (std::int64_t p = 1; p <= 4; ++p)
    for (std::int64_t g = 1; g <= 4; ++g) {
      const auto c1 = chern1_matrix(jain_matrix(p, g));
      for (std::int64_t i = 0; i < g; ++i)
        for (std::int64_t j = 0; j < g; ++j)
          CHECK(c1[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == (i == j ? Rational(p * (g - 1) + 1) : Rational(-p)));
    }
  CHECK(chern1_matrix(wen({{5}})) == RationalMatrix{{Rational(1)}});
  for (const auto& k : testing::random_wen_matrices(40, 4, 5, 17)) {
    const auto c1 = chern1_matrix(k);
    for (std::size_t i = 0; i < k.g(); ++i)
      for (std::size_t j = 0; j < k.g(); ++j) CHECK(c1[i][j] == c1[j][i]);
  }
}

TEST_CASE("total Chern coefficients") {
  CHECK(total_chern(wen({{1}})) == std::vector<Rational>{1, 1});
  CHECK(total_chern(wen({{1, 0}, {0, 1}})) == std::vector<Rational>{1, 1});
  const auto k22 = total_chern(jain_matrix(2, 2));
  REQUIRE(k22.size() == 3);
  CHECK(k22[2] == Rational(2, 5));
  for (const auto& k : testing::random_wen_matrices(40, 4, 5, 23)) {
    const auto c = total_chern(k);
    const auto delta = k.delta();
    CHECK(c.size() == static_cast<std::size_t>(std::min<std::int64_t>(static_cast<std::int64_t>(k.g()), delta) + 1));
    CHECK(c[1] == Rational(1));
    Integer power = 1;
    for (std::size_t i = 0; i < c.size(); ++i) {
      CHECK(c[i] == Rational(pascal(delta, static_cast<std::int64_t>(i)), power));
      power *= delta;
    }
  }
}

TEST_CASE("restricted bundle invariants") {
  const auto k3 = restricted_invariants(wen({{3}}));
  CHECK(k3.rank == 3);
  CHECK(k3.degree == -1);
  CHECK(k3.stable);
  const auto two = restricted_invariants(wen({{2, 0}, {0, 2}}));
  CHECK(two.rank == 4);
  CHECK(two.degree == -4);
  CHECK(two.slope_display() == "-4/4");
  CHECK(two.slope() == Rational(-1));
  CHECK_FALSE(two.stable);
  CHECK_FALSE(two.jain_p.has_value());

  const auto j22 = restricted_invariants(jain_matrix(2, 2));
  CHECK(j22.slope_display() == "-2/5");
  REQUIRE(j22.jain_fraction.has_value());
  CHECK(*j22.jain_fraction == Rational(2, 5));

  for (std::int64_t p = 1; p <= 6; ++p)
    for (std::int64_t g = 1; g <= 6; ++g) {
      const auto b = restricted_invariants(jain_matrix(p, g));
      CHECK(b.slope() == Rational(-g, p * g + 1));
      REQUIRE(b.jain_fraction.has_value());
      CHECK(abs(b.slope()) == *b.jain_fraction);
      CHECK(b.stable);
    }
}

TEST_CASE("bundle invariants on random Wen matrices") {
  for (const auto& k : testing::random_wen_matrices(60, 5, 6, 41)) {
    const auto b = restricted_invariants(k);
    CHECK(b.slope() * b.rank == Rational(b.degree));
    CHECK(b.rank == k.delta());
    CHECK(b.degree == -k.rho());
    CHECK(b.stable == (std::gcd(k.delta(), k.rho()) == 1));
    CHECK(b.stable == (u_order(k) == k.delta()));
    // adjugate row sums are delta u
    for (std::size_t i = 0; i < k.g(); ++i) {
      Rational row = 0;
      for (std::size_t j = 0; j < k.g(); ++j) row += b.c1_coeff[i][j];
      CHECK(row == k.u()[i] * k.delta());
    }
  }
}

TEST_CASE("dual lattice generators") {
  const auto i = TorusParams::make({0.0, 1.0});
  const auto half = dual_lattice_generators(wen({{2}}), i);
  REQUIRE(half.size() == 2);
  CHECK(std::abs(half[0](0) - cplx(0.5, 0.0)) < 1e-15);
  CHECK(std::abs(half[1](0) - cplx(0.0, 1.0)) < 1e-15);

  const auto id = dual_lattice_generators(wen({{1, 0}, {0, 1}}), i);
  CHECK((id[0] - CVector::Unit(2, 0)).norm() < 1e-15);
  CHECK((id[3] - kI * CVector::Unit(2, 1)).norm() < 1e-15);

  const auto tau = TorusParams::make({0.3, 1.1});
  std::vector<WenMatrix> ks = {wen({{2}}), jain_matrix(1, 2), jain_matrix(2, 3)};
  for (const auto& k : testing::random_wen_matrices(20, 4, 5, 5)) ks.push_back(k);
  for (const auto& k : ks) {
    const auto check = check_dual_pairing(k, tau);
    CHECK(check.max_defect < 1e-12);
    CHECK(std::abs(std::abs(check.determinant) - 1.0) < 1e-9);
  }
}
