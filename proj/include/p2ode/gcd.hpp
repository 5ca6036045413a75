#pragma once

// Multivariate gcd by recursive primitive pseudo-remainder sequences.

#include "p2ode/mpoly.hpp"

namespace p2ode {

/// Pseudo-remainder of a by b with respect to var (deg_var b >= 0, b != 0).
template <class Field>
MPoly<Field> pseudo_remainder(const MPoly<Field>& a, const MPoly<Field>& b, std::size_t var) {
  if (b.is_zero()) throw DomainError("pseudo-remainder by zero");
  const int n = b.degree_in(var);
  const MPoly<Field> lcb = b.coefficients_in(var).back();
  MPoly<Field> r = a;
  int e = std::max(a.degree_in(var) - n + 1, 0);
  while (!r.is_zero() && r.degree_in(var) >= n) {
    const int d = r.degree_in(var);
    MPoly<Field> lr = r.coefficients_in(var).back();
    Monomial shift;
    shift.exp[var] = static_cast<std::uint16_t>(d - n);
    r = lcb * r - (lr * b).times_monomial(shift, r.field().one());
    --e;
  }
  if (e > 0) r = lcb.pow(static_cast<unsigned>(e)) * r;
  return r;
}

template <class Field>
MPoly<Field> poly_gcd(const MPoly<Field>& a, const MPoly<Field>& b);

/// Gcd of the coefficients of f viewed as a polynomial in var (monic).
template <class Field>
MPoly<Field> content_in(const MPoly<Field>& f, std::size_t var) {
  MPoly<Field> g(f.field(), f.vars());
  for (const auto& c : f.coefficients_in(var)) {
    if (c.is_zero()) continue;
    g = poly_gcd(g, c);
    if (g.is_constant()) break;
  }
  return g;
}

template <class Field>
MPoly<Field> primitive_part_in(const MPoly<Field>& f, std::size_t var) {
  if (f.is_zero()) return f;
  return *f.divide_exact(content_in(f, var));
}

/// Monic gcd (leading coefficient 1 in graded-lex order); gcd(0,0) = 0.
template <class Field>
MPoly<Field> poly_gcd(const MPoly<Field>& a, const MPoly<Field>& b) {
  a.check_ring(b);
  const Field& F = a.field();
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return MPoly<Field>::constant(F, a.vars(), F.one());

  std::size_t var = 0;
  while (!a.involves(var) && !b.involves(var)) ++var;
  if (!a.involves(var)) return poly_gcd(a, content_in(b, var));
  if (!b.involves(var)) return poly_gcd(content_in(a, var), b);

  MPoly<Field> ca = content_in(a, var), cb = content_in(b, var);
  MPoly<Field> c = poly_gcd(ca, cb);
  MPoly<Field> pa = *a.divide_exact(ca), pb = *b.divide_exact(cb);
  if (pa.degree_in(var) < pb.degree_in(var)) std::swap(pa, pb);
  while (!pb.is_zero()) {
    MPoly<Field> r = pseudo_remainder(pa, pb, var);
    pa = std::move(pb);
    if (r.is_zero()) break;
    if (!r.involves(var)) {
      pa = MPoly<Field>::constant(F, a.vars(), F.one());
      break;
    }
    pb = primitive_part_in(r, var).monic();
  }
  return (c * primitive_part_in(pa, var)).monic();
}

}  // namespace p2ode
