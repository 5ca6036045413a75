#pragma once

// Resultants through fraction-free (Bareiss) Sylvester determinants.

#include "p2ode/mpoly.hpp"

namespace p2ode {

/// Determinant of a square matrix with polynomial entries; consumes m.
template <class Field>
MPoly<Field> bareiss_determinant(std::vector<std::vector<MPoly<Field>>> m, const Field& F,
                                 const VarNames& vars) {
  const std::size_t n = m.size();
  using P = MPoly<Field>;
  if (n == 0) return P::constant(F, vars, F.one());
  bool negate = false;
  P prev = P::constant(F, vars, F.one());
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t piv = k;
    while (piv < n && m[piv][k].is_zero()) ++piv;
    if (piv == n) return P(F, vars);
    if (piv != k) {
      std::swap(m[piv], m[k]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        P num = m[k][k] * m[i][j] - m[i][k] * m[k][j];
        auto q = num.divide_exact(prev);
        if (!q) throw DomainError("Bareiss step not exact");
        m[i][j] = std::move(*q);
      }
      m[i][k] = P(F, vars);
    }
    prev = m[k][k];
  }
  return negate ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

/// Res_var(f, g). If one input does not involve var the answer is that
/// input raised to the degree of the other; both constant is an error.
template <class Field>
MPoly<Field> resultant(const MPoly<Field>& f, const MPoly<Field>& g, std::size_t var) {
  f.check_ring(g);
  const Field& F = f.field();
  using P = MPoly<Field>;
  if (f.is_zero() || g.is_zero()) return P(F, f.vars());
  const int m = f.degree_in(var), n = g.degree_in(var);
  if (m == 0 && n == 0) throw DomainError("resultant of two polynomials constant in the variable");
  if (m == 0) return f.pow(static_cast<unsigned>(n));
  if (n == 0) return g.pow(static_cast<unsigned>(m));
  auto fc = f.coefficients_in(var), gc = g.coefficients_in(var);
  const std::size_t N = static_cast<std::size_t>(m + n);
  std::vector<std::vector<P>> s(N, std::vector<P>(N, P(F, f.vars())));
  for (int i = 0; i < n; ++i)
    for (int e = 0; e <= m; ++e) s[i][i + (m - e)] = fc[e];
  for (int i = 0; i < m; ++i)
    for (int e = 0; e <= n; ++e) s[n + i][i + (n - e)] = gc[e];
  return bareiss_determinant(std::move(s), F, f.vars());
}

/// Discriminant-style helper: Res_var(f, df/dvar).
template <class Field>
MPoly<Field> resultant_with_derivative(const MPoly<Field>& f, std::size_t var) {
  return resultant(f, f.derivative(var), var);
}

}  // namespace p2ode
