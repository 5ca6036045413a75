#pragma once

// Exact invariance and solution checks for plane curves.

#include "p2ode/webs.hpp"

namespace p2ode {

/// G(X0, X1, X2) = X0^deg f(X1/X0, X2/X0) for a chart polynomial f(x, y).
template <class Field>
MPoly<Field> homogenize_curve(const MPoly<Field>& f) {
  if (!same_vars(f.vars(), chart_vars())) throw DomainError("expected a polynomial in x, y");
  if (f.involves(kp)) throw DomainError("a plane curve cannot involve p");
  const int deg = static_cast<int>(f.total_degree());
  MPoly<Field> g(f.field(), incidence_vars());
  for (const auto& [m, c] : f.terms()) {
    Monomial h;
    h.exp[kX0] = static_cast<std::uint16_t>(deg - m.exp[kx] - m.exp[ky]);
    h.exp[kX1] = m.exp[kx];
    h.exp[kX2] = m.exp[ky];
    g.add_term(h, c);
  }
  return g;
}

/// f(x, y) = G(1, x, y).
template <class Field>
MPoly<Field> dehomogenize_curve(const MPoly<Field>& G) {
  MPoly<Field> f(G.field(), chart_vars());
  for (const auto& [m, c] : G.terms()) {
    Monomial h;
    h.exp[kx] = m.exp[kX1];
    h.exp[ky] = m.exp[kX2];
    f.add_term(h, c);
  }
  return f;
}

/// Validates a curve equation: nonzero form of positive degree in X only.
template <class Field>
int curve_degree(const MPoly<Field>& G) {
  if (!same_vars(G.vars(), incidence_vars())) throw DomainError("expected a form in X0, X1, X2");
  if (G.is_zero() || G.is_constant()) throw DomainError("curve equation must be a nonconstant form");
  auto [m, n] = bidegree_of(G);
  if (n != 0) throw DomainError("curve equation must not involve A0..A2");
  return m;
}

/// Reduced equation: G / gcd(G, dG/dX0, dG/dX1, dG/dX2).
template <class Field>
MPoly<Field> curve_radical(const MPoly<Field>& G) {
  MPoly<Field> d = G;
  for (std::size_t i = kX0; i <= kX2; ++i) d = poly_gcd(d, G.derivative(i));
  return d.is_constant() ? G : *G.divide_exact(d);
}

template <class Field>
bool is_squarefree_curve(const MPoly<Field>& G) {
  MPoly<Field> d = G;
  for (std::size_t i = kX0; i <= kX2; ++i) d = poly_gcd(d, G.derivative(i));
  return d.is_constant();
}

// ---------------------------------------------------------------------------
// Webs

template <class Field>
struct WebInvariance {
  bool invariant = false;
  std::optional<MPoly<Field>> cofactor;  // H with S(X, grad G) = G H
};

/// S_W(X, grad G(X)): the web evaluated on the tangent lines of G = 0.
template <class Field>
MPoly<Field> web_on_tangents(const PlaneWeb<Field>& w, const MPoly<Field>& G) {
  const Field& F = G.field();
  std::vector<MPoly<Field>> images;
  for (std::size_t i = 0; i < 3; ++i) images.push_back(MPoly<Field>::variable(F, incidence_vars(), kX0 + i));
  for (std::size_t i = 0; i < 3; ++i) images.push_back(G.derivative(kX0 + i));
  return w.section.poly.compose(images);
}

template <class Field>
WebInvariance<Field> is_invariant_curve_web(const PlaneWeb<Field>& w, const MPoly<Field>& G) {
  curve_degree(G);
  auto q = web_on_tangents(w, G).divide_exact(G);
  if (!q) return {};
  return {true, std::move(q)};
}

/// Chart form of the same test: sum_i a_i f_y^(k-i) (-f_x)^i.
template <class Field>
MPoly<Field> chart_invariance_polynomial(const PlaneWeb<Field>& w, const MPoly<Field>& f) {
  MPoly<Field> fx = -f.derivative(kx), fy = f.derivative(ky);
  MPoly<Field> e(f.field(), chart_vars());
  for (int i = 0; i <= w.k; ++i) e += w.chart_coeffs[i] * fy.pow(w.k - i) * fx.pow(i);
  return e;
}

// ---------------------------------------------------------------------------
// Second order equations

/// Lines x = alpha for every root alpha of c(x) solve e. Decided without
/// extracting roots: c(-l0) must divide each line condition in the chart
/// L = (l0, 1, 0).
template <class Field>
bool vertical_lines_solve(const SecondOrderODE<Field>& e, const MPoly<Field>& c) {
  if (c.is_constant()) return true;
  const Field& F = c.field();
  using MP = MPoly<Field>;
  const VarNames& v = detail::line_solver_vars();
  MP l0 = MP::variable(F, v, detail::kL0), s = MP::variable(F, v, detail::kS), t = MP::variable(F, v, detail::kT);
  auto conds = detail::line_conditions(e.F2.poly, {s, -(l0 * s), t, l0, MP::constant(F, v, F.one()), MP(F, v)});
  auto cu = to_upoly(c, kx);
  std::vector<typename Field::Elem> neg(cu.coeffs());
  for (std::size_t i = 1; i < neg.size(); i += 2) neg[i] = F.neg(neg[i]);
  UPoly<Field> target(F, std::move(neg));
  for (const auto& cond : conds)
    if (!(to_upoly(cond, detail::kL0) % target).is_zero()) return false;
  return true;
}

/// R(x, y): X(f_x + p f_y) with p = -f_x / f_y, times f_y^N.
template <class Field>
MPoly<Field> solution_numerator(const ChartField<Field>& cf, const MPoly<Field>& f) {
  const Field& F = f.field();
  MPoly<Field> p = MPoly<Field>::variable(F, chart_vars(), kp);
  MPoly<Field> fx = f.derivative(kx), fy = f.derivative(ky);
  MPoly<Field> g = fx + p * fy;
  MPoly<Field> xg = cf.B * (g.derivative(kx) + p * g.derivative(ky)) + cf.A * g.derivative(kp);
  if (xg.is_zero()) return xg;
  auto coeffs = xg.coefficients_in(kp);
  const int N = static_cast<int>(coeffs.size()) - 1;
  MPoly<Field> r(F, chart_vars());
  MPoly<Field> mfx = -fx;
  for (int j = 0; j <= N; ++j)
    if (!coeffs[j].is_zero()) r += coeffs[j] * mfx.pow(j) * fy.pow(N - j);
  return r;
}

/// Whether every component of the curve G = 0 is a solution of e.
template <class Field>
bool is_solution_ode(const SecondOrderODE<Field>& e, const MPoly<Field>& G) {
  curve_degree(G);
  MPoly<Field> rad = curve_radical(G);
  const Field& F = G.field();
  MPoly<Field> f = dehomogenize_curve(rad);
  // The line at infinity X0 = 0.
  if (f.total_degree() < curve_degree(rad) && !vanishes_on_line(e.F2.poly, Point3<Field>{F.one(), F.zero(), F.zero()}))
    return false;
  if (f.is_constant()) return true;
  // Vertical lines: the part of f free of y.
  MPoly<Field> c = content_in(f, ky);
  if (!c.is_constant()) {
    if (!vertical_lines_solve(e, c)) return false;
    f = *f.divide_exact(c);
  }
  if (f.is_constant()) return true;
  if (f.derivative(ky).is_zero()) throw DomainError("curve has f_y = 0 identically in this characteristic");
  return solution_numerator(chart_vector_field(e), f).divisible_by(f);
}

template <class Field>
LineSolutions<Field> find_invariant_lines_ode(const SecondOrderODE<Field>& e, std::mt19937_64& rng) {
  return lines_where_vanishes(e.F2.poly, rng);
}

/// The line with coordinates L as a curve equation.
template <class Field>
MPoly<Field> line_equation(const Field& F, const Point3<Field>& L) {
  MPoly<Field> g(F, incidence_vars());
  for (std::size_t i = 0; i < 3; ++i) g += MPoly<Field>::variable(F, incidence_vars(), kX0 + i).scaled(L[i]);
  return g;
}

}  // namespace p2ode
