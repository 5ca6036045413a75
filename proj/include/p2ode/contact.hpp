#pragma once

// Second-order ODEs on P^2 as sections F1 X_L + F2 X_V on the contact
// variety M, where X_L generates the foliation by lifted lines and X_V the
// foliation by fibers. In the chart (x, y, p) the field reads
// X = B d/dx + p B d/dy + A d/dp with B = chart(F1), A = chart(F2).

#include "p2ode/bihom.hpp"
#include "p2ode/chow.hpp"
#include "p2ode/gcd.hpp"
#include "p2ode/upoly.hpp"

#include <array>

namespace p2ode {

template <class Field>
struct SecondOrderODE {
  int a = 0;
  int b = 0;
  BiHomPoly<Field> F1;  // bidegree (a+2, b-1)
  BiHomPoly<Field> F2;  // bidegree (a-1, b+2)

  const Field& field() const { return F1.field(); }
  Bidegree bidegree() const { return {a, b}; }
};

/// Validates bidegrees (a+2, b-1) and (a-1, b+2) and that the pair is nonzero.
template <class Field>
SecondOrderODE<Field> build_ode(const BiHomPoly<Field>& F1, const BiHomPoly<Field>& F2) {
  const int a = F1.m - 2, b = F1.n + 1;
  if (F2.m != a - 1 || F2.n != b + 2)
    throw DomainError("inconsistent bidegrees: F1 (" + std::to_string(F1.m) + "," + std::to_string(F1.n) +
                      ") and F2 (" + std::to_string(F2.m) + "," + std::to_string(F2.n) + ")");
  if (F1.is_zero() && F2.is_zero()) throw DomainError("both components of the equation are zero");
  for (const auto* f : {&F1, &F2})
    if ((f->m < 0 || f->n < 0) && !f->is_zero()) throw DomainError("nonzero component of negative bidegree");
  return SecondOrderODE<Field>{a, b, F1, F2};
}

/// Builds E(a, b) from raw polynomials in X0..A2 (reduced to normal form).
template <class Field>
SecondOrderODE<Field> build_ode(int a, int b, const MPoly<Field>& F1, const MPoly<Field>& F2) {
  return build_ode(reduce_mod_incidence(F1, a + 2, b - 1), reduce_mod_incidence(F2, a - 1, b + 2));
}

/// The lines equation: F1 = 1, F2 = 0, class (-2, 1).
template <class Field>
SecondOrderODE<Field> lines_ode(const Field& F) {
  BiHomPoly<Field> one(0, 0, MPoly<Field>::constant(F, incidence_vars(), F.one()));
  return build_ode(one, BiHomPoly<Field>(F, -3, 3));
}

/// The vertical foliation: F1 = 0, F2 = 1, class (1, -2).
template <class Field>
SecondOrderODE<Field> vertical_ode(const Field& F) {
  BiHomPoly<Field> one(0, 0, MPoly<Field>::constant(F, incidence_vars(), F.one()));
  return build_ode(BiHomPoly<Field>(F, 3, -3), one);
}

/// Random element of E(a, b) with both components drawn from the monomial bases.
template <class Field>
SecondOrderODE<Field> random_ode(const Field& F, int a, int b, std::mt19937_64& rng, long range = 5) {
  for (;;) {
    auto F1 = random_bihom(F, a + 2, b - 1, rng, range);
    auto F2 = random_bihom(F, a - 1, b + 2, rng, range);
    if (!F1.is_zero() || !F2.is_zero()) return build_ode(F1, F2);
  }
}

template <class Field>
struct ChartField {
  MPoly<Field> A;  // coefficient of d/dp
  MPoly<Field> B;  // coefficient of d/dx
};

template <class Field>
ChartField<Field> chart_vector_field(const SecondOrderODE<Field>& e) {
  return {chart_restrict(e.F2), chart_restrict(e.F1)};
}

/// Converts chart data (A, B) into an element of E(a, b), if it is one.
template <class Field>
std::optional<SecondOrderODE<Field>> ode_from_chart(int a, int b, const MPoly<Field>& A, const MPoly<Field>& B) {
  auto F1 = from_chart(B, a + 2, b - 1);
  auto F2 = from_chart(A, a - 1, b + 2);
  if (!F1 || !F2) return std::nullopt;
  return build_ode(*F1, *F2);
}

/// X1 ^ X2 against the frame X_L ^ X_V; bidegree (a1+a2+1, b1+b2+1).
template <class Field>
BiHomPoly<Field> tangency_section_pair(const SecondOrderODE<Field>& e1, const SecondOrderODE<Field>& e2) {
  auto cls = tangency_class_pair(e1.bidegree(), e2.bidegree());
  MPoly<Field> w = e1.F1.poly * e2.F2.poly - e1.F2.poly * e2.F1.poly;
  return reduce_mod_incidence(w, cls.a, cls.b);
}

/// T1 = F2 and T2 = F1 (sign normalized to +).
template <class Field>
std::pair<BiHomPoly<Field>, BiHomPoly<Field>> extract_T1_T2(const SecondOrderODE<Field>& e) {
  return {e.F2, e.F1};
}

enum class Embedding { R1, R2 };

/// R1(F) = F X_L lies in E(m-2, n+1); R2(F) = F X_V lies in E(m+1, n-2).
template <class Field>
SecondOrderODE<Field> embed_R1_R2(const BiHomPoly<Field>& f, Embedding which) {
  if (f.is_zero()) throw DomainError("cannot embed the zero section");
  if (f.m < 0 || f.n < 0) throw DomainError("section bidegree must be non-negative");
  const Field& F = f.field();
  if (which == Embedding::R1) {
    const int a = f.m - 2, b = f.n + 1;
    return build_ode(f, BiHomPoly<Field>(F, a - 1, b + 2));
  }
  const int a = f.m + 1, b = f.n - 2;
  return build_ode(BiHomPoly<Field>(F, a + 2, b - 1), f);
}

// ---------------------------------------------------------------------------
// Tangency along the two families of contact curves.

/// Lifted line of L (all (X, L) with X on L) or fiber over a point P (all
/// (P, A) with A through P).
enum class ContactCurveKind { LiftedLine, Fiber };

template <class Field>
struct ContactCurve {
  ContactCurveKind kind;
  std::array<typename Field::Elem, 3> coords;  // L for lifted lines, P for fibers
};

template <class Field>
ContactCurve<Field> chart_line(const Field& F, const typename Field::Elem& slope, const typename Field::Elem& icpt) {
  // y = slope * x + icpt  <->  A = (-icpt, -slope, 1)
  return {ContactCurveKind::LiftedLine, {F.neg(icpt), F.neg(slope), F.one()}};
}

template <class Field>
ContactCurve<Field> chart_fiber(const Field& F, const typename Field::Elem& x0, const typename Field::Elem& y0) {
  return {ContactCurveKind::Fiber, {F.one(), x0, y0}};
}

/// Two independent vectors orthogonal to v (a basis of the line v = 0),
/// ordered so that P + lambda Q matches the chart parameters used by
/// chart_line and chart_fiber when v has that shape.
template <class Field>
std::pair<std::array<typename Field::Elem, 3>, std::array<typename Field::Elem, 3>> orthogonal_pair(
    const Field& F, const std::array<typename Field::Elem, 3>& v) {
  using E = typename Field::Elem;
  std::array<E, 3> P{F.zero(), F.zero(), F.zero()}, Q = P;
  if (!F.is_zero(v[2])) {
    // Solve for the last coordinate: w2 = -(v0 w0 + v1 w1)/v2.
    E inv = F.inv(v[2]);
    P = {F.one(), F.zero(), F.neg(F.mul(v[0], inv))};
    Q = {F.zero(), F.one(), F.neg(F.mul(v[1], inv))};
  } else if (!F.is_zero(v[1])) {
    E inv = F.inv(v[1]);
    P = {F.zero(), F.zero(), F.one()};
    Q = {F.one(), F.neg(F.mul(v[0], inv)), F.zero()};
  } else if (!F.is_zero(v[0])) {
    P = {F.zero(), F.one(), F.zero()};
    Q = {F.zero(), F.zero(), F.one()};
  } else {
    throw DomainError("zero vector does not define a point or line");
  }
  return {P, Q};
}

/// Restriction of a section to the curve as a binary form G(s, t), returned
/// as g(lambda) = G(1, lambda) together with the formal degree of G.
/// Lifted lines use lambda = x and fibers lambda = p when the chart applies.
template <class Field>
std::pair<UPoly<Field>, int> restrict_to_contact_curve(const BiHomPoly<Field>& f, const ContactCurve<Field>& c) {
  using P = MPoly<Field>;
  const Field& F = f.field();
  const auto& v = c.coords;
  auto [u, w] = orthogonal_pair(F, v);
  if (c.kind == ContactCurveKind::Fiber && !F.is_zero(v[0])) {
    // Lines through (1, x0, y0): (p x0 - y0, -p, 1) = u + p w.
    auto inv = F.inv(v[0]);
    u = {F.neg(F.mul(v[2], inv)), F.zero(), F.one()};
    w = {F.mul(v[1], inv), F.neg(F.one()), F.zero()};
  }
  const bool fiber = c.kind == ContactCurveKind::Fiber;
  const int formal = fiber ? f.n : f.m;
  if (f.is_zero()) return {UPoly<Field>(F), formal};
  auto lam_vars = make_vars({"l"});
  P lam = P::variable(F, lam_vars, 0);
  std::vector<P> moving, fixed;
  for (int i = 0; i < 3; ++i) {
    moving.push_back(P::constant(F, lam_vars, u[i]) + lam.scaled(w[i]));
    fixed.push_back(P::constant(F, lam_vars, v[i]));
  }
  std::vector<P> images = fiber ? fixed : moving;
  const auto& rest = fiber ? moving : fixed;
  images.insert(images.end(), rest.begin(), rest.end());
  return {to_upoly(f.poly.compose(images), 0), formal};
}

template <class Field>
struct TangencyDivisor {
  bool invariant = false;  // the tangency function vanishes identically
  /// Squarefree factors in the affine parameter with multiplicities.
  std::vector<std::pair<UPoly<Field>, unsigned>> factors;
  unsigned multiplicity_at_infinity = 0;
  std::int64_t total = 0;
};

/// Tangency points of E with a lifted line (zeros of F2) or a fiber (zeros of
/// F1), counted with multiplicity on the whole projective curve.
template <class Field>
TangencyDivisor<Field> tangency_on_curve(const SecondOrderODE<Field>& e, const ContactCurve<Field>& c) {
  const BiHomPoly<Field>& f = c.kind == ContactCurveKind::LiftedLine ? e.F2 : e.F1;
  auto [g, formal] = restrict_to_contact_curve(f, c);
  TangencyDivisor<Field> out;
  if (g.is_zero()) {
    out.invariant = true;
    return out;
  }
  out.multiplicity_at_infinity = static_cast<unsigned>(formal - g.degree());
  if (g.degree() > 0) {
    for (auto& [fac, mult] : squarefree_decomposition(g.monic())) {
      if (fac.degree() > 0) out.factors.emplace_back(fac, mult);
    }
  }
  out.total = out.multiplicity_at_infinity;
  for (const auto& [fac, mult] : out.factors) out.total += static_cast<std::int64_t>(fac.degree()) * mult;
  return out;
}

/// Class of E recovered from tangency counts: b - 1 tangencies on a fiber,
/// a - 1 on a lifted line. When every lifted line (resp. fiber) is
/// invariant the missing entry comes from the surface equation
/// (a h + b hv + T) T = [tang(E, T)] with T = h (resp. hv), applied to the
/// saturated foliation.
template <class Field>
Bidegree recover_bidegree(const SecondOrderODE<Field>& e, std::mt19937_64& rng, int attempts = 32) {
  const Field& F = e.field();
  auto draw = [&] { return F.from_int(random_coefficient(rng, 1000)); };
  std::optional<int> a, b;
  bool lines_invariant = true, fibers_invariant = true;
  for (int i = 0; i < attempts && (!a || !b); ++i) {
    if (!b) {
      auto t = tangency_on_curve(e, chart_fiber(F, draw(), draw()));
      if (!t.invariant) {
        fibers_invariant = false;
        b = static_cast<int>(t.total) + 1;
      }
    }
    if (!a) {
      auto t = tangency_on_curve(e, chart_line(F, draw(), draw()));
      if (!t.invariant) {
        lines_invariant = false;
        a = static_cast<int>(t.total) + 1;
      }
    }
  }
  // Intersection numbers of the observed tangency curve in T with h and hv:
  // for T = h (the preimage of a line l) the tangency curve of a field with
  // every lifted line invariant and F1 constant is the lift of l, which meets
  // the preimage of another line once and {A through q} never.
  auto solve_surface = [](std::int64_t dot_h, std::int64_t dot_hv, ChowClass T, int known, bool known_is_b) {
    // class u h^2 + v h hv: (.)h = v, (.)hv = u + v
    ChowClass observed = ChowClass::h2();
    observed.c[3] = dot_hv - dot_h;
    observed.c[4] = dot_h;
    for (int cand = -8; cand <= 8; ++cand) {
      Bidegree guess = known_is_b ? Bidegree{cand, known} : Bidegree{known, cand};
      if (tangency_class_surface(guess, T) == observed) return cand;
    }
    throw DomainError("no bidegree reproduces the observed tangency class");
  };
  // A field with every lifted line (fiber) invariant is F1 X_L (F2 X_V); the
  // zeros of that factor along a lifted line and a fiber shift the class of
  // the saturated foliation.
  auto zeros = [&](const BiHomPoly<Field>& f, ContactCurveKind kind) -> std::optional<std::int64_t> {
    for (int i = 0; i < attempts; ++i) {
      auto c = kind == ContactCurveKind::Fiber ? chart_fiber(F, draw(), draw()) : chart_line(F, draw(), draw());
      auto [g, formal] = restrict_to_contact_curve(f, c);
      if (g.is_zero()) continue;
      std::int64_t n = formal - g.degree();
      if (g.degree() > 0)
        for (auto& [fac, mult] : squarefree_decomposition(g.monic())) n += static_cast<std::int64_t>(fac.degree()) * mult;
      return n;
    }
    return std::nullopt;
  };
  if (lines_invariant && b) {
    auto on_line = zeros(e.F1, ContactCurveKind::LiftedLine), on_fiber = zeros(e.F1, ContactCurveKind::Fiber);
    if (on_line && on_fiber)
      a = solve_surface(1, 0, ChowClass::h(), *b - static_cast<int>(*on_fiber), true) + static_cast<int>(*on_line);
  }
  if (fibers_invariant && a) {
    auto on_line = zeros(e.F2, ContactCurveKind::LiftedLine), on_fiber = zeros(e.F2, ContactCurveKind::Fiber);
    if (on_line && on_fiber)
      b = solve_surface(0, 1, ChowClass::hv(), *a - static_cast<int>(*on_line), false) + static_cast<int>(*on_fiber);
  }
  if (!a || !b) throw DomainError("tangency counts did not determine the bidegree");
  return {*a, *b};
}

// ---------------------------------------------------------------------------
// Curves in the chart and tangency to the contact distribution.

template <class Field>
struct LiftedCurve {
  MPoly<Field> f;  // plane curve, in x, y
  MPoly<Field> g;  // f_x + p f_y
};

template <class Field>
bool is_squarefree_plane_curve(const MPoly<Field>& f) {
  MPoly<Field> d = poly_gcd(f, f.derivative(kx));
  d = poly_gcd(d, f.derivative(ky));
  return d.is_constant();
}

template <class Field>
LiftedCurve<Field> lift_plane_curve(const MPoly<Field>& f) {
  if (!same_vars(f.vars(), chart_vars())) throw DomainError("expected a polynomial in x, y");
  if (f.involves(kp)) throw DomainError("a plane curve must not involve p");
  if (f.is_constant()) throw DomainError("a plane curve needs a nonconstant equation");
  if (!is_squarefree_plane_curve(f)) throw DomainError("plane curve equation is not squarefree");
  MPoly<Field> p = MPoly<Field>::variable(f.field(), chart_vars(), kp);
  return {f, f.derivative(kx) + p * f.derivative(ky)};
}

/// Coefficient of dx^dy^dp in (dy - p dx) ^ df ^ dg.
template <class Field>
MPoly<Field> contact_wedge(const MPoly<Field>& f, const MPoly<Field>& g) {
  using P = MPoly<Field>;
  const Field& F = f.field();
  P p = P::variable(F, chart_vars(), kp);
  P r0[3] = {-p, P::constant(F, chart_vars(), F.one()), P(F, chart_vars())};
  P r1[3] = {f.derivative(kx), f.derivative(ky), f.derivative(kp)};
  P r2[3] = {g.derivative(kx), g.derivative(ky), g.derivative(kp)};
  return r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0]) +
         r0[2] * (r1[0] * r2[1] - r1[1] * r2[0]);
}

/// Whether the chart curve cut by (f, g) is tangent to the contact
/// distribution. Supported shapes: one generator free of p and the other of
/// degree at most 1 in p, or both free of p and affine-linear (a fiber).
template <class Field>
bool is_tangent_to_contact(MPoly<Field> f, MPoly<Field> g) {
  using P = MPoly<Field>;
  const Field& F = f.field();
  if (f.is_zero() || g.is_zero() || f.is_constant() || g.is_constant())
    throw DomainError("generators do not cut a curve");
  if (f.involves(kp) && !g.involves(kp)) std::swap(f, g);
  const P w = contact_wedge(f, g);
  if (f.involves(kp)) throw DomainError("unsupported ideal: both generators involve p");

  if (!g.involves(kp)) {
    // Both p-free: the curve is a union of fibers over the common zeros.
    if (f.total_degree() != 1 || g.total_degree() != 1) throw DomainError("unsupported ideal: expected a fiber");
    Matrix<Field> m(F, 2, 2);
    std::vector<typename Field::Elem> rhs(2);
    const P* gens[2] = {&f, &g};
    for (int i = 0; i < 2; ++i) {
      Monomial mx, my;
      mx.exp[kx] = 1;
      my.exp[ky] = 1;
      m.at(i, 0) = gens[i]->coeff(mx);
      m.at(i, 1) = gens[i]->coeff(my);
      rhs[i] = F.neg(gens[i]->constant_term());
    }
    if (matrix_rank(m) != 2) throw DomainError("generators do not cut a curve");
    auto pt = *solve_linear(m, rhs);
    return w.substitute(kx, P::constant(F, chart_vars(), pt[0]))
        .substitute(ky, P::constant(F, chart_vars(), pt[1]))
        .is_zero();
  }

  if (g.degree_in(kp) != 1) throw DomainError("unsupported ideal: second generator must be linear in p");
  auto gc = g.coefficients_in(kp);
  const P& g0 = gc[0];
  const P& g1 = gc[1];
  // On the curve p = -g0/g1; clear denominators.
  auto wc = w.coefficients_in(kp);
  const int dw = static_cast<int>(wc.size()) - 1;
  P red(F, chart_vars());
  P neg_g0 = -g0;
  for (int i = 0; i <= dw; ++i) red += wc[i] * neg_g0.pow(i) * g1.pow(dw - i);
  // Components of f along g1 = 0 leave the chart.
  P f_eff = *f.divide_exact(poly_gcd(f, g1));
  if (f_eff.is_constant()) throw DomainError("curve lies outside the chart");
  if (red.is_zero()) return true;
  // Radical of f_eff in characteristic zero.
  P rad = *f_eff.divide_exact(poly_gcd(poly_gcd(f_eff, f_eff.derivative(kx)), f_eff.derivative(ky)));
  return red.divisible_by(rad);
}

template <class Field>
bool is_tangent_to_contact(const LiftedCurve<Field>& c) {
  return is_tangent_to_contact(c.f, c.g);
}

/// Common factor of F1 and F2 as polynomials (the non-saturated part).
template <class Field>
MPoly<Field> ode_content(const SecondOrderODE<Field>& e) {
  return poly_gcd(e.F1.poly, e.F2.poly);
}

}  // namespace p2ode
