#pragma once

// Sections of O_M(m, n) on the incidence variety M in P^2 x P^2-dual,
// stored as polynomials in X0 X1 X2 A0 A1 A2 reduced modulo
// A0 X0 + A1 X1 + A2 X2 (no term divisible by A0 X0).

#include "p2ode/linalg.hpp"
#include "p2ode/mpoly.hpp"

#include <random>

namespace p2ode {

enum : std::size_t { kX0 = 0, kX1, kX2, kA0, kA1, kA2 };
enum : std::size_t { kx = 0, ky, kp };

inline const VarNames& incidence_vars() {
  static const VarNames v = make_vars({"X0", "X1", "X2", "A0", "A1", "A2"});
  return v;
}
inline const VarNames& chart_vars() {
  static const VarNames v = make_vars({"x", "y", "p"});
  return v;
}

inline unsigned x_degree(const Monomial& m) { return m.exp[kX0] + m.exp[kX1] + m.exp[kX2]; }
inline unsigned a_degree(const Monomial& m) { return m.exp[kA0] + m.exp[kA1] + m.exp[kA2]; }

template <class Field>
struct BiHomPoly {
  int m = 0;
  int n = 0;
  MPoly<Field> poly;

  BiHomPoly(const Field& f, int m_, int n_) : m(m_), n(n_), poly(f, incidence_vars()) {}
  BiHomPoly(int m_, int n_, MPoly<Field> p) : m(m_), n(n_), poly(std::move(p)) {}

  const Field& field() const { return poly.field(); }
  bool is_zero() const { return poly.is_zero(); }
  bool operator==(const BiHomPoly& o) const { return m == o.m && n == o.n && poly == o.poly; }
  std::string to_string() const { return poly.to_string(); }
};

/// Number of normal-form monomials of bidegree (m, n).
inline std::int64_t normal_form_dimension(int m, int n) {
  if (m < 0 || n < 0) return 0;
  std::int64_t M = m, N = n;
  return (M + 1) * (N + 1) * (M + N + 2) / 2;
}

/// X- and A-degree of a nonzero bihomogeneous polynomial; throws otherwise.
template <class Field>
std::pair<int, int> bidegree_of(const MPoly<Field>& f) {
  if (f.is_zero()) throw DomainError("the zero polynomial has no bidegree");
  const Monomial& lead = f.leading_monomial();
  const int dm = static_cast<int>(x_degree(lead)), dn = static_cast<int>(a_degree(lead));
  for (const auto& [mono, c] : f.terms())
    if (static_cast<int>(x_degree(mono)) != dm || static_cast<int>(a_degree(mono)) != dn)
      throw DomainError("polynomial is not bihomogeneous");
  return {dm, dn};
}

/// Normal form of a bihomogeneous polynomial of bidegree (m, n).
template <class Field>
BiHomPoly<Field> reduce_mod_incidence(const MPoly<Field>& f, int m, int n) {
  if (!same_vars(f.vars(), incidence_vars())) throw DomainError("expected variables X0..X2, A0..A2");
  if (!f.is_zero()) {
    auto [dm, dn] = bidegree_of(f);
    if (dm != m || dn != n) throw DomainError("polynomial does not have the declared bidegree");
  }
  const Field& F = f.field();
  MPoly<Field> r = f;
  for (bool changed = true; changed;) {
    changed = false;
    MPoly<Field> next(F, incidence_vars());
    for (const auto& [mono, c] : r.terms()) {
      if (mono.exp[kX0] == 0 || mono.exp[kA0] == 0) {
        next.add_term(mono, c);
        continue;
      }
      changed = true;
      Monomial rest = mono;
      --rest.exp[kX0];
      --rest.exp[kA0];
      Monomial t1 = rest, t2 = rest;
      ++t1.exp[kX1];
      ++t1.exp[kA1];
      ++t2.exp[kX2];
      ++t2.exp[kA2];
      next.add_term(t1, F.neg(c));
      next.add_term(t2, F.neg(c));
    }
    r = std::move(next);
  }
  return BiHomPoly<Field>(m, n, std::move(r));
}

/// Infers the bidegree; the zero polynomial is given bidegree (0, 0).
template <class Field>
BiHomPoly<Field> reduce_mod_incidence(const MPoly<Field>& f) {
  if (f.is_zero()) return BiHomPoly<Field>(f.field(), 0, 0);
  auto [m, n] = bidegree_of(f);
  return reduce_mod_incidence(f, m, n);
}

struct MonomialBasis {
  std::vector<Monomial> monomials;
  bool no_sections = false;
};

/// Normal-form monomials of bidegree (m, n) in graded-lex order.
inline MonomialBasis monomial_basis(int m, int n) {
  MonomialBasis out;
  if (m < 0 || n < 0) {
    out.no_sections = true;
    return out;
  }
  for (int i0 = 0; i0 <= m; ++i0)
    for (int i1 = 0; i0 + i1 <= m; ++i1)
      for (int j0 = 0; j0 <= n; ++j0)
        for (int j1 = 0; j0 + j1 <= n; ++j1) {
          if (i0 > 0 && j0 > 0) continue;
          Monomial mono;
          mono.exp[kX0] = static_cast<std::uint16_t>(i0);
          mono.exp[kX1] = static_cast<std::uint16_t>(i1);
          mono.exp[kX2] = static_cast<std::uint16_t>(m - i0 - i1);
          mono.exp[kA0] = static_cast<std::uint16_t>(j0);
          mono.exp[kA1] = static_cast<std::uint16_t>(j1);
          mono.exp[kA2] = static_cast<std::uint16_t>(n - j0 - j1);
          out.monomials.push_back(mono);
        }
  std::sort(out.monomials.begin(), out.monomials.end(), GrLexGreater{});
  return out;
}

/// Images of X0..A2 under the principal chart X = (1, x, y), A = (px - y, -p, 1).
template <class Field>
std::vector<MPoly<Field>> chart_images(const Field& F) {
  using P = MPoly<Field>;
  const VarNames& v = chart_vars();
  P one = P::constant(F, v, F.one());
  P x = P::variable(F, v, kx), y = P::variable(F, v, ky), p = P::variable(F, v, kp);
  return {one, x, y, p * x - y, -p, one};
}

template <class Field>
MPoly<Field> chart_restrict(const MPoly<Field>& f) {
  if (!same_vars(f.vars(), incidence_vars())) throw DomainError("expected variables X0..X2, A0..A2");
  if (f.is_zero()) return MPoly<Field>(f.field(), chart_vars());
  return f.compose(chart_images(f.field()));
}

template <class Field>
MPoly<Field> chart_restrict(const BiHomPoly<Field>& f) {
  return chart_restrict(f.poly);
}

/// The normal form whose chart restriction is g, if one of bidegree (m, n)
/// exists. Restriction to the chart is injective on normal forms.
template <class Field>
std::optional<BiHomPoly<Field>> from_chart(const MPoly<Field>& g, int m, int n) {
  const Field& F = g.field();
  if (!same_vars(g.vars(), chart_vars())) throw DomainError("expected chart variables x, y, p");
  if (g.is_zero()) return BiHomPoly<Field>(F, m, n);
  auto basis = monomial_basis(m, n);
  if (basis.no_sections) return std::nullopt;
  const auto images = chart_images(F);
  std::vector<MPoly<Field>> cols;
  std::map<Monomial, std::size_t, GrLexGreater> row_of;
  auto index = [&](const Monomial& mono) {
    auto [it, inserted] = row_of.emplace(mono, row_of.size());
    return it->second;
  };
  for (const auto& mono : basis.monomials) {
    MPoly<Field> e = MPoly<Field>::monomial(F, incidence_vars(), mono, F.one()).compose(images);
    for (const auto& [cm, c] : e.terms()) index(cm);
    cols.push_back(std::move(e));
  }
  for (const auto& [cm, c] : g.terms()) index(cm);
  Matrix<Field> mat(F, row_of.size(), cols.size());
  std::vector<typename Field::Elem> rhs(row_of.size(), F.zero());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& [cm, c] : cols[j].terms()) mat.at(row_of[cm], j) = c;
  for (const auto& [cm, c] : g.terms()) rhs[row_of[cm]] = c;
  auto sol = solve_linear(mat, rhs);
  if (!sol) return std::nullopt;
  MPoly<Field> f(F, incidence_vars());
  for (std::size_t j = 0; j < cols.size(); ++j) f.add_term(basis.monomials[j], (*sol)[j]);
  return BiHomPoly<Field>(m, n, std::move(f));
}

/// Integer in [-range, range] drawn portably from a 64-bit engine.
inline long random_coefficient(std::mt19937_64& rng, long range) {
  return static_cast<long>(rng() % static_cast<std::uint64_t>(2 * range + 1)) - range;
}

/// Random normal form of bidegree (m, n) with integer coefficients in
/// [-range, range]; zero when (m, n) has no sections.
template <class Field>
BiHomPoly<Field> random_bihom(const Field& F, int m, int n, std::mt19937_64& rng, long range = 5) {
  BiHomPoly<Field> out(F, m, n);
  for (const auto& mono : monomial_basis(m, n).monomials)
    out.poly.add_term(mono, F.from_int(random_coefficient(rng, range)));
  return out;
}

/// Applies the same coordinate permutation to points and lines:
/// X_i -> X_perm[i], A_i -> A_perm[i]. The incidence relation is preserved.
template <class Field>
BiHomPoly<Field> permute(const BiHomPoly<Field>& f, const std::array<std::size_t, 3>& perm) {
  using P = MPoly<Field>;
  const Field& F = f.field();
  std::vector<P> images;
  for (std::size_t i = 0; i < 3; ++i) images.push_back(P::variable(F, incidence_vars(), kX0 + perm[i]));
  for (std::size_t i = 0; i < 3; ++i) images.push_back(P::variable(F, incidence_vars(), kA0 + perm[i]));
  return reduce_mod_incidence(f.is_zero() ? f.poly : f.poly.compose(images), f.m, f.n);
}

/// Product in the quotient ring.
template <class Field>
BiHomPoly<Field> operator*(const BiHomPoly<Field>& f, const BiHomPoly<Field>& g) {
  return reduce_mod_incidence(f.poly * g.poly, f.m + g.m, f.n + g.n);
}

template <class Field>
BiHomPoly<Field> operator-(const BiHomPoly<Field>& f, const BiHomPoly<Field>& g) {
  if (f.m != g.m || f.n != g.n) throw DomainError("bidegree mismatch");
  return BiHomPoly<Field>(f.m, f.n, f.poly - g.poly);
}

template <class Field>
BiHomPoly<Field> operator+(const BiHomPoly<Field>& f, const BiHomPoly<Field>& g) {
  if (f.m != g.m || f.n != g.n) throw DomainError("bidegree mismatch");
  return BiHomPoly<Field>(f.m, f.n, f.poly + g.poly);
}

/// Image over F_p of a rational section; nullopt on bad reduction.
inline std::optional<BiHomPoly<PrimeField>> reduce_mod(const BiHomPoly<Rationals>& f, const PrimeField& F) {
  auto r = reduce_mod(f.poly, F);
  if (!r) return std::nullopt;
  return BiHomPoly<PrimeField>(f.m, f.n, std::move(*r));
}

}  // namespace p2ode
