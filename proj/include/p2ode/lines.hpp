#pragma once

// Lines L in P^2 such that a polynomial S(X, A) vanishes at (X, L) for every
// point X on L. With S = F2 this finds straight-line solutions of an
// equation, with S = a web section its invariant lines, and with S = g(X)
// the lines contained in the curve g = 0.

#include "p2ode/bihom.hpp"
#include "p2ode/contact.hpp"
#include "p2ode/gcd.hpp"
#include "p2ode/resultant.hpp"
#include "p2ode/upoly.hpp"

#include <set>

namespace p2ode {

template <class Field>
using Point3 = std::array<typename Field::Elem, 3>;

/// Scales so that the first nonzero coordinate is 1.
template <class Field>
Point3<Field> normalize_projective(const Field& F, Point3<Field> v) {
  for (int i = 0; i < 3; ++i) {
    if (F.is_zero(v[i])) continue;
    auto inv = F.inv(v[i]);
    for (int j = i; j < 3; ++j) v[j] = F.mul(v[j], inv);
    return v;
  }
  throw DomainError("zero vector is not a projective point");
}

template <class Field>
struct LineSolutions {
  /// Positive-dimensional solution set. Over a prime field `lines` then
  /// still lists every F_p-rational solution; over Q only isolated ones.
  bool family = false;
  std::vector<Point3<Field>> lines;  // normalized, sorted
};

namespace detail {

inline const VarNames& line_solver_vars() {
  static const VarNames v = make_vars({"l0", "l1", "s", "t"});
  return v;
}

enum : std::size_t { kL0 = 0, kL1, kS, kT };

// Coefficients in (s, t) of S restricted to the line parametrization given
// by images of X0..A2; each coefficient lives in (l0, l1).
template <class Field>
std::vector<MPoly<Field>> line_conditions(const MPoly<Field>& S, const std::vector<MPoly<Field>>& images) {
  const Field& F = S.field();
  MPoly<Field> r = S.is_zero() ? MPoly<Field>(F, line_solver_vars()) : S.compose(images);
  std::map<std::pair<unsigned, unsigned>, MPoly<Field>> by_st;
  for (const auto& [m, c] : r.terms()) {
    Monomial rest = m;
    rest.exp[kS] = 0;
    rest.exp[kT] = 0;
    auto key = std::make_pair<unsigned, unsigned>(m.exp[kS], m.exp[kT]);
    auto it = by_st.try_emplace(key, MPoly<Field>(F, line_solver_vars())).first;
    it->second.add_term(rest, c);
  }
  std::vector<MPoly<Field>> out;
  for (auto& [k, v] : by_st) out.push_back(std::move(v));
  return out;
}

template <class Field>
std::vector<typename Field::Elem> univariate_common_roots(const std::vector<MPoly<Field>>& es, std::size_t var,
                                                          bool& all_zero) {
  std::optional<UPoly<Field>> g;
  all_zero = true;
  for (const auto& e : es) {
    if (e.is_zero()) continue;
    all_zero = false;
    auto u = to_upoly(e, var);
    g = g ? gcd(*g, u) : u.monic();
  }
  if (all_zero || g->degree() <= 0) return {};
  return roots_in_field(*g);
}

}  // namespace detail

template <class Field>
bool vanishes_on_line(const MPoly<Field>& S, const Point3<Field>& L) {
  const Field& F = S.field();
  auto [P, Q] = orthogonal_pair(F, L);
  using MP = MPoly<Field>;
  const VarNames& v = detail::line_solver_vars();
  MP s = MP::variable(F, v, detail::kS), t = MP::variable(F, v, detail::kT);
  std::vector<MP> images;
  for (int i = 0; i < 3; ++i) images.push_back(s.scaled(P[i]) + t.scaled(Q[i]));
  for (int i = 0; i < 3; ++i) images.push_back(MP::constant(F, v, L[i]));
  return S.is_zero() || S.compose(images).is_zero();
}

template <class Field>
LineSolutions<Field> lines_where_vanishes(const MPoly<Field>& S, std::mt19937_64& rng) {
  using MP = MPoly<Field>;
  using E = typename Field::Elem;
  const Field& F = S.field();
  const VarNames& v = detail::line_solver_vars();
  MP l0 = MP::variable(F, v, detail::kL0), l1 = MP::variable(F, v, detail::kL1);
  MP s = MP::variable(F, v, detail::kS), t = MP::variable(F, v, detail::kT);
  MP one = MP::constant(F, v, F.one()), zero(F, v);

  LineSolutions<Field> out;
  std::set<std::vector<std::string>> seen;
  auto add = [&](Point3<Field> L) {
    L = normalize_projective(F, L);
    std::vector<std::string> key;
    for (auto& c : L) key.push_back(F.to_string(c));
    if (seen.insert(key).second) out.lines.push_back(L);
  };

  // Chart L = (l0, l1, 1), X = (s, t, -l0 s - l1 t).
  auto es = detail::line_conditions(S, {s, t, -(l0 * s) - l1 * t, l0, l1, one});
  std::vector<MP> nz;
  for (auto& e : es)
    if (!e.is_zero()) nz.push_back(e);
  bool family = nz.empty();
  if (!family) {
    MP g(F, v);
    for (auto& e : nz) g = poly_gcd(g, e);
    family = !g.is_constant();
  }
  if (!family) {
    bool any_l1 = false, any_unit = false;
    for (auto& e : nz) {
      any_l1 = any_l1 || e.involves(detail::kL1);
      any_unit = any_unit || e.is_constant();
    }
    // Without l1 the conditions are univariate in l0 with constant gcd.
    std::vector<E> l0_roots;
    if (any_l1 && !any_unit) {
      MP R(F, v);
      for (int attempt = 0; attempt < 16 && R.is_zero(); ++attempt) {
        MP e1(F, v), e2(F, v);
        for (auto& e : nz) {
          e1 += e.scaled(F.from_int(random_coefficient(rng, 50)));
          e2 += e.scaled(F.from_int(random_coefficient(rng, 50)));
        }
        if (e1.is_zero() || e2.is_zero()) continue;
        if (!e1.involves(detail::kL1) && !e2.involves(detail::kL1)) continue;
        R = resultant(e1, e2, detail::kL1);
      }
      if (!R.is_zero()) {
        if (!R.is_constant()) l0_roots = roots_in_field(to_upoly(R, detail::kL0));
      } else if constexpr (Field::kIsPrime) {
        for (std::uint64_t a = 0; a < F.modulus(); ++a) l0_roots.push_back(a);
      } else {
        throw DomainError("line elimination failed to separate the conditions");
      }
    }
    for (const auto& r0 : l0_roots) {
      std::vector<MP> sub;
      for (auto& e : nz) sub.push_back(e.substitute(detail::kL0, MP::constant(F, v, r0)));
      bool all_zero = false;
      for (const auto& r1 : detail::univariate_common_roots(sub, detail::kL1, all_zero)) add({r0, r1, F.one()});
    }
  }

  // Chart L = (l0, 1, 0), X = (s, -l0 s, t).
  auto es1 = detail::line_conditions(S, {s, -(l0 * s), t, l0, one, zero});
  bool all_zero1 = false;
  auto r1 = detail::univariate_common_roots(es1, detail::kL0, all_zero1);
  if (all_zero1) family = true;
  for (const auto& r : r1) add({r, F.one(), F.zero()});

  // L = (1, 0, 0), X = (0, s, t).
  auto es2 = detail::line_conditions(S, {zero, s, t, one, zero, zero});
  bool at_inf = true;
  for (auto& e : es2) at_inf = at_inf && e.is_zero();
  if (at_inf) add({F.one(), F.zero(), F.zero()});

  out.family = family;
  if constexpr (Field::kIsPrime) {
    const std::uint64_t p = F.modulus();
    if (family) {
      out.lines.clear();
      seen.clear();
    }
    if (family && p <= 4096) {
      // Enumerate every rational line instead.
      for (std::uint64_t a = 0; a < p; ++a)
        for (std::uint64_t b = 0; b < p; ++b)
          if (vanishes_on_line(S, Point3<Field>{a, b, F.one()})) add({a, b, F.one()});
      for (std::uint64_t a = 0; a < p; ++a)
        if (vanishes_on_line(S, Point3<Field>{a, F.one(), F.zero()})) add({a, F.one(), F.zero()});
      if (vanishes_on_line(S, Point3<Field>{F.one(), F.zero(), F.zero()})) add({F.one(), F.zero(), F.zero()});
    }
  } else {
    if (family) out.lines.clear();
  }
  std::sort(out.lines.begin(), out.lines.end());
  return out;
}

}  // namespace p2ode
