#include "kvw/wen_algebra.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "kvw/error.hpp"

namespace kvw {

namespace {

std::int64_t narrow(const Integer& v, const char* what) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error(std::string(what) + " does not fit in 64 bits");
  return v.convert_to<std::int64_t>();
}

std::int64_t mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::string matrix_text(const IntMatrix& m) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j);
    os << ']';
  }
  os << ']';
  return os.str();
}

IntMatrix minor_without(const IntMatrix& m, std::size_t row, std::size_t col) {
  IntMatrix out(m.rows() - 1, m.cols() - 1);
  for (std::size_t i = 0, r = 0; i < m.rows(); ++i) {
    if (i == row) continue;
    for (std::size_t j = 0, c = 0; j < m.cols(); ++j) {
      if (j == col) continue;
      out(r, c++) = m(i, j);
    }
    ++r;
  }
  return out;
}

}  // namespace

std::string to_string(const Rational& r) {
  const Integer num = boost::multiprecision::numerator(r);
  const Integer den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational parse_rational(const std::string& text) {
  auto parse_int = [&](const std::string& s) {
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (start == s.size() || !std::all_of(s.begin() + start, s.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
      throw Error(ErrorCode::ParseError, "not a rational: '" + text + "'");
    return Integer(s[0] == '+' ? s.substr(1) : s);
  };
  const auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_int(text));
  const Integer den = parse_int(text.substr(slash + 1));
  if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + text + "'");
  return Rational(parse_int(text.substr(0, slash)), den);
}

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, std::int64_t fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  for (const auto& r : rows)
    if (r.size() != cols) throw Error(ErrorCode::NotSquare, "ragged rows");
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  return m;
}

std::vector<std::vector<std::int64_t>> IntMatrix::to_rows() const {
  std::vector<std::vector<std::int64_t>> out(rows_, std::vector<std::int64_t>(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j);
  return out;
}

std::vector<std::int64_t> IntMatrix::apply(const std::vector<std::int64_t>& v) const {
  if (v.size() != cols_) throw Error(ErrorCode::ShapeMismatch, "vector length differs from column count");
  std::vector<std::int64_t> out(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::ShapeMismatch, "inner dimensions differ");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
  return c;
}

Integer determinant(const IntMatrix& m) {
  if (!m.square()) throw Error(ErrorCode::NotSquare, "determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  std::vector<std::vector<Integer>> a(n, std::vector<Integer>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m(i, j);
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

std::vector<Integer> leading_principal_minors(const IntMatrix& m) {
  std::vector<Integer> out;
  for (std::size_t k = 1; k <= m.rows(); ++k) {
    IntMatrix sub(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) sub(i, j) = m(i, j);
    out.push_back(determinant(sub));
  }
  return out;
}

IntMatrix adjugate(const IntMatrix& m) {
  if (!m.square()) throw Error(ErrorCode::NotSquare, "adjugate of non-square matrix");
  const std::size_t n = m.rows();
  IntMatrix adj(n, n);
  if (n == 1) {
    adj(0, 0) = 1;
    return adj;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Integer c = determinant(minor_without(m, j, i));
      if ((i + j) % 2) c = -c;
      adj(i, j) = narrow(c, "adjugate entry");
    }
  return adj;
}

SmithForm smith_normal_form(const IntMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::vector<Integer>> a(rows, std::vector<Integer>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = m(i, j);
  std::vector<std::vector<Integer>> u(rows, std::vector<Integer>(rows, 0));
  std::vector<std::vector<Integer>> v(cols, std::vector<Integer>(cols, 0));
  for (std::size_t i = 0; i < rows; ++i) u[i][i] = 1;
  for (std::size_t j = 0; j < cols; ++j) v[j][j] = 1;

  // row ops act on a and u, column ops on a and v
  auto swap_rows = [&](std::size_t i, std::size_t k) { std::swap(a[i], a[k]); std::swap(u[i], u[k]); };
  auto swap_cols = [&](std::size_t j, std::size_t k) {
    for (auto& r : a) std::swap(r[j], r[k]);
    for (auto& r : v) std::swap(r[j], r[k]);
  };
  auto add_row = [&](std::size_t dst, std::size_t src, const Integer& f) {
    for (std::size_t j = 0; j < cols; ++j) a[dst][j] += f * a[src][j];
    for (std::size_t j = 0; j < rows; ++j) u[dst][j] += f * u[src][j];
  };
  auto add_col = [&](std::size_t dst, std::size_t src, const Integer& f) {
    for (std::size_t i = 0; i < rows; ++i) a[i][dst] += f * a[i][src];
    for (std::size_t i = 0; i < cols; ++i) v[i][dst] += f * v[i][src];
  };
  auto negate_row = [&](std::size_t i) {
    for (auto& x : a[i]) x = -x;
    for (auto& x : u[i]) x = -x;
  };

  const std::size_t n = std::min(rows, cols);
  for (std::size_t t = 0; t < n; ++t) {
    for (;;) {
      bool found = false;
      std::size_t pi = t, pj = t;
      Integer best = 0;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (a[i][j] != 0 && (!found || abs(a[i][j]) < best)) {
            found = true;
            best = abs(a[i][j]);
            pi = i;
            pj = j;
          }
      if (!found) break;
      if (pi != t) swap_rows(t, pi);
      if (pj != t) swap_cols(t, pj);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i)
        if (a[i][t] != 0) {
          add_row(i, t, -(a[i][t] / a[t][t]));
          if (a[i][t] != 0) clean = false;
        }
      for (std::size_t j = t + 1; j < cols; ++j)
        if (a[t][j] != 0) {
          add_col(j, t, -(a[t][j] / a[t][t]));
          if (a[t][j] != 0) clean = false;
        }
      if (!clean) continue;
      // divisibility: pull in any entry the pivot does not divide
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            add_row(t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (a[t][t] < 0) negate_row(t);
  }
  SmithForm out;
  for (std::size_t t = 0; t < n; ++t) out.diagonal.push_back(a[t][t]);
  out.left = std::move(u);
  out.right = std::move(v);
  return out;
}

std::vector<std::int64_t> WenMatrix::u_numerators() const {
  std::vector<std::int64_t> out(g(), 0);
  for (std::size_t i = 0; i < g(); ++i)
    for (std::size_t j = 0; j < g(); ++j) out[i] += adjugate_(i, j);
  return out;
}

WenMatrix validate_wen_matrix(const IntMatrix& m) {
  if (!m.square() || m.rows() == 0)
    throw Error(ErrorCode::NotSquare, "expected a non-empty square matrix, got " + std::to_string(m.rows()) + "x" +
                                          std::to_string(m.cols()));
  const std::size_t g = m.rows();
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = i + 1; j < g; ++j)
      if (m(i, j) != m(j, i))
        throw Error(ErrorCode::NotSymmetric, "K(" + std::to_string(i) + "," + std::to_string(j) + ") != K(" +
                                                 std::to_string(j) + "," + std::to_string(i) + ") in " + matrix_text(m));
  const auto minors = leading_principal_minors(m);
  for (std::size_t k = 0; k < g; ++k)
    if (minors[k] <= 0)
      throw Error(ErrorCode::NotPositiveDefinite,
                  "leading minor of order " + std::to_string(k + 1) + " is " + minors[k].str() + " in " + matrix_text(m));
  const int parity = static_cast<int>(mod(m(0, 0), 2));
  for (std::size_t i = 1; i < g; ++i)
    if (mod(m(i, i), 2) != parity) throw Error(ErrorCode::MixedParity, "diagonal parities differ in " + matrix_text(m));

  WenMatrix w;
  w.k_ = m;
  w.delta_ = narrow(minors.back(), "determinant");
  w.adjugate_ = adjugate(m);
  const auto sums = w.u_numerators();
  for (std::size_t i = 0; i < g; ++i)
    if (sums[i] <= 0)
      throw Error(ErrorCode::NonPositiveU, "u_" + std::to_string(i) + " = " + std::to_string(sums[i]) + "/" +
                                               std::to_string(w.delta_) + " in " + matrix_text(m));
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j)
      if (m(i, j) < 0)
        throw Error(ErrorCode::NegativeEntry, "K(" + std::to_string(i) + "," + std::to_string(j) + ") = " +
                                                  std::to_string(m(i, j)) + " in " + matrix_text(m));
  w.rho_ = std::accumulate(sums.begin(), sums.end(), std::int64_t{0});
  w.statistic_ = parity == 0 ? Statistic::Bosonic : Statistic::Fermionic;
  for (std::size_t i = 0; i < g; ++i) w.u_.emplace_back(sums[i], w.delta_);
  w.primary_ = std::gcd(w.delta_, w.rho_) == 1;
  return w;
}

WenMatrix jain_matrix(std::int64_t p, std::int64_t g) {
  if (p < 1 || g < 1) throw std::invalid_argument("jain_matrix needs p >= 1 and g >= 1");
  IntMatrix m(static_cast<std::size_t>(g), static_cast<std::size_t>(g), p);
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) += 1;
  return validate_wen_matrix(m);
}

bool detect_jain(const WenMatrix& k, std::int64_t* p_out) {
  const auto& m = k.K();
  const std::int64_t p = m(0, 0) - 1;
  if (p < 1) return false;
  for (std::size_t i = 0; i < k.g(); ++i)
    for (std::size_t j = 0; j < k.g(); ++j)
      if (m(i, j) != (i == j ? p + 1 : p)) return false;
  if (p_out) *p_out = p;
  return true;
}

WenDatum validate_wen_datum(const WenMatrix& k, const std::vector<std::int64_t>& n_vec) {
  if (n_vec.size() != k.g())
    throw Error(ErrorCode::ShapeMismatch,
                "particle counts have length " + std::to_string(n_vec.size()) + ", expected " + std::to_string(k.g()));
  for (std::size_t i = 0; i < n_vec.size(); ++i)
    if (n_vec[i] <= 0) throw Error(ErrorCode::NonPositiveCounts, "n_" + std::to_string(i) + " = " + std::to_string(n_vec[i]));
  const auto kn = k.K().apply(n_vec);
  for (std::size_t i = 1; i < kn.size(); ++i)
    if (kn[i] != kn[0]) {
      std::string text;
      for (std::size_t j = 0; j < kn.size(); ++j) text += (j ? "," : "") + std::to_string(kn[j]);
      throw Error(ErrorCode::NotEigenvectorOfE, "K n = (" + text + ") is not a multiple of e");
    }
  const std::int64_t d = kn[0];
  const std::int64_t n = std::accumulate(n_vec.begin(), n_vec.end(), std::int64_t{0});
  if ((n * k.delta()) % d != 0 || (n * k.delta()) / d != k.rho())
    throw Error(ErrorCode::NotEigenvectorOfE, "rho != n delta / d");
  return WenDatum(k, n_vec, d, n);
}

std::vector<std::int64_t> minimal_particle_counts(const WenMatrix& k) {
  auto sums = k.u_numerators();
  std::int64_t g = 0;
  for (auto s : sums) g = std::gcd(g, s);
  for (auto& s : sums) s /= g;
  return sums;
}

PiElement::PiElement(std::vector<std::int64_t> numerators, std::int64_t denominator)
    : num_(std::move(numerators)), den_(denominator) {
  if (den_ <= 0) throw std::invalid_argument("PiElement denominator must be positive");
  for (auto& x : num_) x = mod(x, den_);
}

PiElement PiElement::zero(std::size_t g, std::int64_t denominator) {
  return PiElement(std::vector<std::int64_t>(g, 0), denominator);
}

std::vector<double> PiElement::values() const {
  std::vector<double> out(num_.size());
  for (std::size_t i = 0; i < num_.size(); ++i) out[i] = value(i);
  return out;
}

bool PiElement::is_zero() const {
  return std::all_of(num_.begin(), num_.end(), [](std::int64_t x) { return x == 0; });
}

PiElement PiElement::operator+(const PiElement& o) const {
  if (o.den_ != den_ || o.num_.size() != num_.size()) throw Error(ErrorCode::ShapeMismatch, "elements of different groups");
  std::vector<std::int64_t> s(num_.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = num_[i] + o.num_[i];
  return PiElement(std::move(s), den_);
}

PiElement PiElement::operator-() const {
  std::vector<std::int64_t> s(num_.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = -num_[i];
  return PiElement(std::move(s), den_);
}

PiElement PiElement::scaled(std::int64_t k) const {
  std::vector<std::int64_t> s(num_.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<std::int64_t>((static_cast<__int128>(num_[i]) * k) % den_);
  return PiElement(std::move(s), den_);
}

PiElement make_pi_element(const WenMatrix& k, const std::vector<Rational>& value) {
  if (value.size() != k.g()) throw Error(ErrorCode::ShapeMismatch, "element length differs from g");
  std::vector<std::int64_t> num(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    const Rational scaled = value[i] * k.delta();
    if (boost::multiprecision::denominator(scaled) != 1)
      throw Error(ErrorCode::ShapeMismatch, to_string(value[i]) + " is not a multiple of 1/" + std::to_string(k.delta()));
    num[i] = mod(narrow(boost::multiprecision::numerator(scaled) % k.delta(), "numerator"), k.delta());
  }
  for (auto x : k.K().apply(num))
    if (x % k.delta() != 0) throw Error(ErrorCode::ShapeMismatch, "vector is not in K^{-1}Z^g");
  return PiElement(std::move(num), k.delta());
}

PiElement u_element(const WenMatrix& k) { return PiElement(k.u_numerators(), k.delta()); }

std::size_t PiGroup::index_of(const PiElement& e) const {
  const auto it = index_.find(e);
  if (it == index_.end()) throw Error(ErrorCode::IndexOutOfRange, "element is not a canonical member of Pi");
  return it->second;
}

PiGroup pi_group(const WenMatrix& k) {
  const auto snf = smith_normal_form(k.K());
  const std::size_t g = k.g();
  const std::int64_t delta = k.delta();
  PiGroup out;
  for (const auto& d : snf.diagonal) out.factors_.push_back(narrow(d, "invariant factor"));

  // elements are V D^{-1} beta, beta_i in [0, d_i); times delta that is V (delta/d_i) beta_i
  std::vector<std::vector<std::int64_t>> v(g, std::vector<std::int64_t>(g));
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j) v[i][j] = narrow(snf.right[i][j] % delta, "transform entry");
  std::vector<std::int64_t> beta(g, 0);
  for (;;) {
    std::vector<std::int64_t> num(g, 0);
    for (std::size_t i = 0; i < g; ++i)
      for (std::size_t j = 0; j < g; ++j)
        num[i] = mod(num[i] + mod(v[i][j] * (delta / out.factors_[j]) % delta * beta[j], delta), delta);
    out.elements_.emplace_back(std::move(num), delta);
    std::size_t pos = 0;
    while (pos < g && ++beta[pos] == out.factors_[pos]) beta[pos++] = 0;
    if (pos == g) break;
  }
  std::sort(out.elements_.begin(), out.elements_.end());
  for (std::size_t i = 0; i < out.elements_.size(); ++i) out.index_.emplace(out.elements_[i], i);
  return out;
}

std::int64_t u_order(const WenMatrix& k) {
  std::int64_t g = k.delta();
  for (auto s : k.u_numerators()) g = std::gcd(g, s);
  return k.delta() / g;
}

std::int64_t u_order(const WenDatum& datum) { return u_order(datum.matrix()); }

}  // namespace kvw
