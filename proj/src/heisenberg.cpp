#include "kvw/heisenberg.hpp"

#include <numeric>
#include <stdexcept>

#include "kvw/error.hpp"
#include "kvw/parallel.hpp"

namespace kvw {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

cplx root(std::int64_t e, std::int64_t order) {
  const double angle = 2.0 * kPi * static_cast<double>(mod(e, order)) / static_cast<double>(order);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

std::int64_t upsilon(const PiElement& a, const PiElement& b, const WenMatrix& k) {
  const std::int64_t d = k.delta();
  if (a.denominator() != d || b.denominator() != d || a.size() != k.g() || b.size() != k.g())
    throw Error(ErrorCode::ShapeMismatch, "pairing arguments do not belong to this K");
  // a^T K b = alpha^T K beta / delta^2 and K beta = 0 mod delta
  __int128 total = 0;
  for (std::size_t i = 0; i < k.g(); ++i) {
    __int128 row = 0;
    for (std::size_t j = 0; j < k.g(); ++j) row += static_cast<__int128>(k.K()(i, j)) * b.numerators()[j];
    total += static_cast<__int128>(a.numerators()[i]) * row;
  }
  const __int128 dd = d;
  if (total % dd != 0) throw Error(ErrorCode::ShapeMismatch, "argument is not in K^{-1}Z^g");
  const __int128 r = (total / dd) % dd;
  return static_cast<std::int64_t>(r < 0 ? r + dd : r);
}

HeisenbergElement HeisenbergElement::identity(const WenMatrix& k) {
  return {PiElement::zero(k.g(), k.delta()), PiElement::zero(k.g(), k.delta()), 0, false};
}

HeisenbergElement multiply(const HeisenbergElement& x, const HeisenbergElement& y, const WenMatrix& k) {
  return {x.a + y.a, x.b + y.b, mod(x.gamma + y.gamma + upsilon(x.a, y.b, k), k.delta()), x.flip != y.flip};
}

HeisenbergElement inverse(const HeisenbergElement& x, const WenMatrix& k) {
  return {-x.a, -x.b, mod(-x.gamma + upsilon(x.a, x.b, k), k.delta()), x.flip};
}

std::vector<HeisenbergElement> group_elements(const WenMatrix& k) {
  const auto pi = pi_group(k);
  std::vector<HeisenbergElement> out;
  out.reserve(pi.size() * pi.size() * static_cast<std::size_t>(k.delta()));
  for (const auto& a : pi.elements())
    for (const auto& b : pi.elements())
      for (std::int64_t g = 0; g < k.delta(); ++g) out.push_back({a, b, g, false});
  return out;
}

MonomialMatrix::MonomialMatrix(std::vector<std::size_t> perm, std::vector<std::int64_t> phase, std::int64_t order, int sign)
    : perm_(std::move(perm)), phase_(std::move(phase)), order_(order), sign_(sign) {
  if (perm_.size() != phase_.size() || order_ <= 0 || (sign_ != 1 && sign_ != -1))
    throw std::invalid_argument("malformed monomial matrix");
  std::vector<bool> seen(perm_.size(), false);
  for (auto p : perm_) {
    if (p >= perm_.size() || seen[p]) throw std::invalid_argument("monomial matrix needs a permutation");
    seen[p] = true;
  }
  for (auto& e : phase_) e = mod(e, order_);
}

MonomialMatrix MonomialMatrix::identity(std::size_t n, std::int64_t order) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  return MonomialMatrix(std::move(perm), std::vector<std::int64_t>(n, 0), order);
}

MonomialMatrix MonomialMatrix::operator*(const MonomialMatrix& o) const {
  if (o.size() != size() || o.order_ != order_) throw std::invalid_argument("incompatible monomial matrices");
  std::vector<std::size_t> perm(size());
  std::vector<std::int64_t> phase(size());
  for (std::size_t c = 0; c < size(); ++c) {
    perm[c] = perm_[o.perm_[c]];
    phase[c] = phase_[o.perm_[c]] + o.phase_[c];
  }
  return MonomialMatrix(std::move(perm), std::move(phase), order_, sign_ * o.sign_);
}

MonomialMatrix MonomialMatrix::pow(std::int64_t e) const {
  if (e < 0) throw std::invalid_argument("negative power");
  MonomialMatrix out = identity(size(), order_);
  MonomialMatrix base = *this;
  for (; e > 0; e >>= 1) {
    if (e & 1) out = out * base;
    base = base * base;
  }
  return out;
}

MonomialMatrix MonomialMatrix::scaled(std::int64_t e) const {
  auto phase = phase_;
  for (auto& p : phase) p += e;
  return MonomialMatrix(perm_, std::move(phase), order_, sign_);
}

MonomialMatrix MonomialMatrix::negated() const { return MonomialMatrix(perm_, phase_, order_, -sign_); }

bool MonomialMatrix::is_identity() const { return *this == identity(size(), order_); }

std::vector<std::int64_t> MonomialMatrix::trace_exponents() const {
  std::vector<std::int64_t> out;
  for (std::size_t c = 0; c < size(); ++c)
    if (perm_[c] == c) out.push_back(phase_[c]);
  return out;
}

CMatrix MonomialMatrix::to_complex() const {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(size()));
  for (std::size_t c = 0; c < size(); ++c)
    m(static_cast<Eigen::Index>(perm_[c]), static_cast<Eigen::Index>(c)) = static_cast<double>(sign_) * root(phase_[c], order_);
  return m;
}

bool RepMatrices::q_primitive() const { return std::gcd(q_exponent, delta) == 1; }

bool sharp_sector(const WenDatum& datum) { return (datum.matrix().diagonal_parity() + datum.d()) % 2 != 0; }

RepMatrices rep_matrices(const WenDatum& datum, BasisOrder order) {
  const auto& k = datum.matrix();
  const std::int64_t delta = k.delta();
  if (order == BasisOrder::UPowers && !k.primary())
    throw Error(ErrorCode::NonCyclicBasisOrder, "u does not generate Pi when gcd(delta, rho) = " +
                                                    std::to_string(std::gcd(delta, k.rho())));
  const bool cyclic = order == BasisOrder::UPowers || (order == BasisOrder::Auto && k.primary());
  const PiElement u = u_element(k);

  RepMatrices out;
  out.delta = delta;
  out.u_powers = cyclic;
  out.sharp = sharp_sector(datum);
  out.q_exponent = upsilon(u, u, k);
  if (cyclic) {
    for (std::int64_t i = 0; i < delta; ++i) out.basis.push_back(u.scaled(i));
  } else {
    out.basis = pi_group(k).elements();
  }
  std::map<PiElement, std::size_t> index;
  for (std::size_t i = 0; i < out.basis.size(); ++i) index.emplace(out.basis[i], i);

  const std::size_t n = out.basis.size();
  std::vector<std::size_t> id(n), shift(n);
  std::vector<std::int64_t> t1_phase(n), zero(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    id[i] = i;
    t1_phase[i] = upsilon(u, out.basis[i], k);
    shift[i] = index.at(out.basis[i] + u);
  }
  out.T1 = MonomialMatrix(id, t1_phase, delta);
  out.T2 = MonomialMatrix(shift, zero, delta);
  return out;
}

MonomialMatrix standard_action(const HeisenbergElement& x, const WenMatrix& k, const PiGroup& pi, bool sharp) {
  const std::size_t n = pi.size();
  std::vector<std::size_t> perm(n);
  std::vector<std::int64_t> phase(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = pi.element(i);
    perm[i] = pi.index_of(c + x.b);
    phase[i] = x.gamma + upsilon(x.a, c, k);
  }
  return MonomialMatrix(std::move(perm), std::move(phase), k.delta(), (sharp && x.flip) ? -1 : 1);
}

double character_norm(const WenMatrix& k, const std::function<CMatrix(const HeisenbergElement&)>& rep) {
  const auto elements = group_elements(k);
  constexpr std::size_t chunk = 64;
  std::vector<double> partial(chunk_count(elements.size(), chunk), 0.0);
  parallel_chunks(elements.size(), chunk, [&](std::size_t idx, std::size_t begin, std::size_t end) {
    double s = 0;
    for (std::size_t i = begin; i < end; ++i) s += std::norm(rep(elements[i]).trace());
    partial[idx] = s;
  });
  double total = 0;
  for (double p : partial) total += p;
  const double d = static_cast<double>(k.delta());
  return total / (d * d * d);
}

double irreducibility_norm(const WenMatrix& k) {
  if (k.delta() > 10) throw std::invalid_argument("irreducibility_norm is limited to delta <= 10");
  const auto pi = pi_group(k);
  return character_norm(k, [&](const HeisenbergElement& x) { return standard_action(x, k, pi).to_complex(); });
}

}  // namespace kvw
