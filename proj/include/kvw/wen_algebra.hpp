#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace kvw {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// "p/q" (or "p" when q == 1), always in lowest terms with q > 0.
std::string to_string(const Rational& r);
Rational parse_rational(const std::string& text);

// Small dense row-major integer matrix.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols, std::int64_t fill = 0);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  std::int64_t& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<std::vector<std::int64_t>> to_rows() const;
  std::vector<std::int64_t> apply(const std::vector<std::int64_t>& v) const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> data_;
};

// Exact determinant (fraction-free Bareiss elimination).
Integer determinant(const IntMatrix& m);

// Leading principal minors det(M[0..k, 0..k]) for k = 1..n.
std::vector<Integer> leading_principal_minors(const IntMatrix& m);

// U * M * V = D with U, V unimodular and D diagonal, d_i | d_{i+1}, d_i >= 0.
struct SmithForm {
  std::vector<Integer> diagonal;
  std::vector<std::vector<Integer>> left;   // U
  std::vector<std::vector<Integer>> right;  // V
};

// Pivoting rule: the nonzero entry of smallest absolute value in the
// remaining block (first in row-major order on ties) is moved to the corner.
SmithForm smith_normal_form(const IntMatrix& m);

enum class Statistic { Bosonic, Fermionic };

// Validated Wen matrix with its cached exact invariants.
//
// Only `validate_wen_matrix` and `jain_matrix` construct values of this
// type, so holding one is proof the axioms were checked.
class WenMatrix {
 public:
  std::size_t g() const noexcept { return k_.rows(); }
  const IntMatrix& K() const noexcept { return k_; }
  std::int64_t delta() const noexcept { return delta_; }
  const IntMatrix& adjugate() const noexcept { return adjugate_; }
  std::int64_t rho() const noexcept { return rho_; }
  Statistic statistic() const noexcept { return statistic_; }
  // +1 bosonic (even diagonal), -1 fermionic (odd diagonal).
  int epsilon() const noexcept { return statistic_ == Statistic::Bosonic ? 1 : -1; }
  // Parity (0 or 1) shared by all diagonal entries.
  int diagonal_parity() const noexcept { return statistic_ == Statistic::Bosonic ? 0 : 1; }
  // u = K^{-1} e.
  const std::vector<Rational>& u() const noexcept { return u_; }
  // delta * u = row sums of the adjugate.
  std::vector<std::int64_t> u_numerators() const;
  bool primary() const noexcept { return primary_; }

 private:
  friend WenMatrix validate_wen_matrix(const IntMatrix& m);
  WenMatrix() = default;

  IntMatrix k_;
  std::int64_t delta_ = 0;
  IntMatrix adjugate_;
  std::int64_t rho_ = 0;
  Statistic statistic_ = Statistic::Bosonic;
  std::vector<Rational> u_;
  bool primary_ = false;
};

// Checks, in order: square, symmetric, positive definite (leading minors),
// uniform diagonal parity, u = K^{-1}e > 0, non-negative entries.
// Throws kvw::Error naming the first violated axiom.
WenMatrix validate_wen_matrix(const IntMatrix& m);

// K_{p,g} = I + pN, N the all-ones matrix.
WenMatrix jain_matrix(std::int64_t p, std::int64_t g);

// True when K = K_{p,g} for some p >= 1; sets p_out.
bool detect_jain(const WenMatrix& k, std::int64_t* p_out = nullptr);

// Classical adjugate K^# with K K^# = det(K) I.
IntMatrix adjugate(const IntMatrix& m);

class WenDatum {
 public:
  const WenMatrix& matrix() const noexcept { return matrix_; }
  const std::vector<std::int64_t>& n_vec() const noexcept { return n_vec_; }
  std::int64_t d() const noexcept { return d_; }
  std::int64_t n() const noexcept { return n_; }

 private:
  friend WenDatum validate_wen_datum(const WenMatrix& k, const std::vector<std::int64_t>& n_vec);
  WenDatum(WenMatrix m, std::vector<std::int64_t> n_vec, std::int64_t d, std::int64_t n)
      : matrix_(std::move(m)), n_vec_(std::move(n_vec)), d_(d), n_(n) {}

  WenMatrix matrix_;
  std::vector<std::int64_t> n_vec_;
  std::int64_t d_ = 0;
  std::int64_t n_ = 0;
};

// Requires n_vec > 0 entrywise and K n_vec = d e with d > 0.
WenDatum validate_wen_datum(const WenMatrix& k, const std::vector<std::int64_t>& n_vec);

// Smallest particle-count vector: the primitive multiple of K^# e.
std::vector<std::int64_t> minimal_particle_counts(const WenMatrix& k);

// Element of K^{-1}Z^g / Z^g stored as numerators over delta, each in [0, delta).
class PiElement {
 public:
  PiElement() = default;
  PiElement(std::vector<std::int64_t> numerators, std::int64_t denominator);

  static PiElement zero(std::size_t g, std::int64_t denominator);

  std::size_t size() const noexcept { return num_.size(); }
  std::int64_t denominator() const noexcept { return den_; }
  const std::vector<std::int64_t>& numerators() const noexcept { return num_; }
  double value(std::size_t i) const { return static_cast<double>(num_[i]) / static_cast<double>(den_); }
  std::vector<double> values() const;
  Rational exact(std::size_t i) const { return Rational(num_[i], den_); }
  bool is_zero() const;

  PiElement operator+(const PiElement& o) const;
  PiElement operator-() const;
  PiElement operator-(const PiElement& o) const { return *this + (-o); }
  PiElement scaled(std::int64_t k) const;

  friend bool operator==(const PiElement&, const PiElement&) = default;
  friend auto operator<=>(const PiElement& a, const PiElement& b) { return a.num_ <=> b.num_; }

 private:
  std::vector<std::int64_t> num_;
  std::int64_t den_ = 1;
};

// Reduces an arbitrary rational vector to its canonical representative in [0,1)^g.
// Throws ShapeMismatch if the vector does not lie in K^{-1}Z^g.
PiElement make_pi_element(const WenMatrix& k, const std::vector<Rational>& value);

// Class of u = K^{-1}e in Pi.
PiElement u_element(const WenMatrix& k);

class PiGroup {
 public:
  const std::vector<std::int64_t>& invariant_factors() const noexcept { return factors_; }
  const std::vector<PiElement>& elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }
  const PiElement& element(std::size_t index) const { return elements_.at(index); }
  // Index of a canonical element; throws IndexOutOfRange if not a member.
  std::size_t index_of(const PiElement& e) const;
  bool contains(const PiElement& e) const { return index_.count(e) != 0; }

 private:
  friend PiGroup pi_group(const WenMatrix& k);
  std::vector<std::int64_t> factors_;
  std::vector<PiElement> elements_;
  std::map<PiElement, std::size_t> index_;
};

// All delta cosets of K^{-1}Z^g / Z^g, sorted lexicographically by numerators.
PiGroup pi_group(const WenMatrix& k);

// Order of the class of u in Pi.
std::int64_t u_order(const WenDatum& datum);
std::int64_t u_order(const WenMatrix& k);

}  // namespace kvw
