#pragma once

// Dense univariate polynomials: Euclidean gcd, squarefree decomposition and
// root finding in the coefficient field (rational roots by p-adic lifting,
// prime-field roots by equal-degree splitting).

#include "p2ode/mpoly.hpp"

#include <algorithm>
#include <random>
#include <utility>
#include <vector>

namespace p2ode {

template <class Field>
class UPoly {
 public:
  using Elem = typename Field::Elem;

  explicit UPoly(Field f) : field_(std::move(f)) {}
  UPoly(Field f, std::vector<Elem> coeffs) : field_(std::move(f)), c_(std::move(coeffs)) { trim(); }

  static UPoly x(const Field& f) { return UPoly(f, {f.zero(), f.one()}); }
  static UPoly constant(const Field& f, const Elem& c) { return UPoly(f, {c}); }

  const Field& field() const { return field_; }
  const std::vector<Elem>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  Elem coeff(std::size_t i) const { return i < c_.size() ? c_[i] : field_.zero(); }
  const Elem& lc() const { return c_.back(); }

  Elem evaluate(const Elem& x) const {
    Elem acc = field_.zero();
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = field_.add(field_.mul(acc, x), *it);
    return acc;
  }

  friend UPoly operator+(const UPoly& a, const UPoly& b) {
    std::vector<Elem> r(std::max(a.c_.size(), b.c_.size()), a.field_.zero());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.field_.add(a.coeff(i), b.coeff(i));
    return UPoly(a.field_, std::move(r));
  }
  friend UPoly operator-(const UPoly& a, const UPoly& b) {
    std::vector<Elem> r(std::max(a.c_.size(), b.c_.size()), a.field_.zero());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.field_.sub(a.coeff(i), b.coeff(i));
    return UPoly(a.field_, std::move(r));
  }
  friend UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return UPoly(a.field_);
    std::vector<Elem> r(a.c_.size() + b.c_.size() - 1, a.field_.zero());
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        r[i + j] = a.field_.add(r[i + j], a.field_.mul(a.c_[i], b.c_[j]));
    return UPoly(a.field_, std::move(r));
  }
  bool operator==(const UPoly& o) const {
    if (c_.size() != o.c_.size()) return false;
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (!field_.eq(c_[i], o.c_[i])) return false;
    return true;
  }

  UPoly scaled(const Elem& s) const {
    std::vector<Elem> r(c_);
    for (auto& v : r) v = field_.mul(v, s);
    return UPoly(field_, std::move(r));
  }
  UPoly monic() const { return is_zero() ? *this : scaled(field_.inv(lc())); }
  UPoly derivative() const {
    std::vector<Elem> r;
    for (std::size_t i = 1; i < c_.size(); ++i) r.push_back(field_.mul(c_[i], field_.from_int(static_cast<long long>(i))));
    return UPoly(field_, std::move(r));
  }

  /// (quotient, remainder) with deg remainder < deg d.
  std::pair<UPoly, UPoly> divmod(const UPoly& d) const {
    if (d.is_zero()) throw DomainError("univariate division by zero");
    std::vector<Elem> rem(c_);
    int dd = d.degree();
    int n = degree();
    if (n < dd) return {UPoly(field_), *this};
    std::vector<Elem> q(n - dd + 1, field_.zero());
    Elem inv = field_.inv(d.lc());
    for (int i = n; i >= dd; --i) {
      Elem f = field_.mul(rem[i], inv);
      q[i - dd] = f;
      if (field_.is_zero(f)) continue;
      for (int j = 0; j <= dd; ++j) rem[i - dd + j] = field_.sub(rem[i - dd + j], field_.mul(f, d.c_[j]));
    }
    rem.resize(dd);
    return {UPoly(field_, std::move(q)), UPoly(field_, std::move(rem))};
  }
  UPoly operator%(const UPoly& d) const { return divmod(d).second; }
  UPoly operator/(const UPoly& d) const { return divmod(d).first; }

  /// Composition with x -> x + s.
  UPoly shifted(const Elem& s) const {
    UPoly r(field_);
    UPoly lin(field_, {s, field_.one()});
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * lin + constant(field_, *it);
    return r;
  }

 private:
  void trim() {
    while (!c_.empty() && field_.is_zero(c_.back())) c_.pop_back();
  }

  Field field_;
  std::vector<Elem> c_;
};

template <class Field>
UPoly<Field> gcd(UPoly<Field> a, UPoly<Field> b) {
  while (!b.is_zero()) {
    auto r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// a^e mod m.
template <class Field, class Int>
UPoly<Field> powmod(UPoly<Field> a, Int e, const UPoly<Field>& m) {
  UPoly<Field> r = UPoly<Field>::constant(a.field(), a.field().one()) % m;
  a = a % m;
  while (e > 0) {
    if (e % 2 == 1) r = (r * a) % m;
    e /= 2;
    if (e > 0) a = (a * a) % m;
  }
  return r;
}

/// Squarefree decomposition f = lc * prod g_i^{m_i} (Yun). Needs degree below
/// the characteristic.
template <class Field>
std::vector<std::pair<UPoly<Field>, unsigned>> squarefree_decomposition(const UPoly<Field>& f) {
  std::vector<std::pair<UPoly<Field>, unsigned>> out;
  if (f.degree() <= 0) return out;
  if constexpr (Field::kIsPrime) {
    if (static_cast<std::uint64_t>(f.degree()) >= f.field().modulus())
      throw DomainError("squarefree decomposition needs degree below the characteristic");
  }
  auto fd = f.derivative();
  auto a = gcd(f, fd);
  auto b = f / a;
  auto c = fd / a;
  auto d = c - b.derivative();
  unsigned i = 1;
  while (b.degree() > 0) {
    auto g = gcd(b, d);
    if (g.degree() > 0) out.emplace_back(g, i);
    b = b / g;
    c = d / g;
    d = c - b.derivative();
    ++i;
  }
  return out;
}

template <class Field>
UPoly<Field> squarefree_part(const UPoly<Field>& f) {
  if (f.degree() <= 0) return f;
  return (f / gcd(f, f.derivative())).monic();
}

/// Univariate polynomial from an MPoly that involves at most variable var.
template <class Field>
UPoly<Field> to_upoly(const MPoly<Field>& f, std::size_t var) {
  std::vector<typename Field::Elem> c(std::max(f.degree_in(var) + 1, 0), f.field().zero());
  for (const auto& [m, v] : f.terms()) {
    for (std::size_t i = 0; i < f.nvars(); ++i)
      if (i != var && m.exp[i]) throw DomainError("polynomial is not univariate");
    c[m.exp[var]] = v;
  }
  return UPoly<Field>(f.field(), std::move(c));
}

template <class Field>
MPoly<Field> from_upoly(const UPoly<Field>& u, const VarNames& vars, std::size_t var) {
  MPoly<Field> r(u.field(), vars);
  for (std::size_t i = 0; i < u.coeffs().size(); ++i) {
    Monomial m;
    m.exp[var] = static_cast<std::uint16_t>(i);
    r.add_term(m, u.coeffs()[i]);
  }
  return r;
}

/// Distinct roots of f in F_p, sorted.
std::vector<std::uint64_t> roots_in_field(const UPoly<PrimeField>& f);

/// Distinct rational roots of f, sorted.
std::vector<mpq_class> roots_in_field(const UPoly<Rationals>& f);

}  // namespace p2ode
