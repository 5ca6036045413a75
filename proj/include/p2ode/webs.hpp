#pragma once

// k-webs of degree d on P^2, stored as sections of O_M(d, k). In the chart
// the section reads F(x, y, p) = a_0 + a_1 p + ... + a_k p^k and the leaves
// through (x, y) have slopes p with F(x, y, p) = 0.

#include "p2ode/lines.hpp"

namespace p2ode {

template <class Field>
struct PlaneWeb {
  int k = 1;
  int d = 0;
  BiHomPoly<Field> section;
  std::vector<MPoly<Field>> chart_coeffs;  // a_0 .. a_k in x, y

  const Field& field() const { return section.field(); }
  MPoly<Field> chart() const { return chart_restrict(section); }
};

/// Validates k >= 1, d >= 0 and chart p-degree exactly k.
template <class Field>
PlaneWeb<Field> build_web(const BiHomPoly<Field>& section) {
  const int d = section.m, k = section.n;
  if (k < 1) throw DomainError("a web needs A-degree k >= 1");
  if (d < 0) throw DomainError("web degree must be non-negative");
  if (section.is_zero()) throw DomainError("the zero section is not a web");
  MPoly<Field> c = chart_restrict(section);
  auto coeffs = c.coefficients_in(kp);
  if (static_cast<int>(coeffs.size()) - 1 != k) {
    // The top coefficient is F(X; vertical line through X); it vanishes
    // identically exactly when A2 divides the section.
    throw DomainError("chart p-degree " + std::to_string(static_cast<int>(coeffs.size()) - 1) + " < k = " +
                      std::to_string(k) + ": the section has the vertical factor A2");
  }
  return PlaneWeb<Field>{k, d, section, std::move(coeffs)};
}

template <class Field>
PlaneWeb<Field> web_from_chart(int k, int d, const MPoly<Field>& chart) {
  auto s = from_chart(chart, d, k);
  if (!s) throw DomainError("chart expression is not a section of bidegree (" + std::to_string(d) + "," +
                            std::to_string(k) + ")");
  return build_web(*s);
}

template <class Field>
PlaneWeb<Field> random_web(const Field& F, int k, int d, std::mt19937_64& rng, long range = 5) {
  for (;;) {
    auto s = random_bihom(F, d, k, rng, range);
    try {
      return build_web(s);
    } catch (const DomainError&) {
    }
  }
}

template <class Field>
PlaneWeb<Field> web_product(const PlaneWeb<Field>& w1, const PlaneWeb<Field>& w2) {
  return build_web(w1.section * w2.section);
}

/// Pencil of lines through the point c: section A . c of bidegree (0, 1).
template <class Field>
PlaneWeb<Field> pencil_web(const Field& F, const Point3<Field>& c) {
  MPoly<Field> s(F, incidence_vars());
  for (int i = 0; i < 3; ++i) s += MPoly<Field>::variable(F, incidence_vars(), kA0 + i).scaled(c[i]);
  return build_web(reduce_mod_incidence(s, 0, 1));
}

// ---------------------------------------------------------------------------
// Degree 0: webs of lines tangent to a plane curve, viewed on the dual plane.

template <class Field>
struct CurveDualWeb {
  PlaneWeb<Field> web;
  bool has_linear_factor = false;  // a rational line is a component of the curve
};

/// For a curve g(X) = 0 of degree k, the web on the dual plane whose leaves
/// through a line l are the pencils of the points of C on l. In the dual
/// plane's own coordinates this is the section g(A) of bidegree (0, k).
template <class Field>
CurveDualWeb<Field> dual_web_of_curve(const MPoly<Field>& g) {
  if (!same_vars(g.vars(), incidence_vars())) throw DomainError("expected a form in X0, X1, X2");
  if (g.is_zero() || g.is_constant()) throw DomainError("curve equation must be a nonconstant form");
  auto [m, n] = bidegree_of(g);
  if (n != 0) throw DomainError("curve equation must not involve A0..A2");
  MPoly<Field> d = g;
  for (std::size_t i = kX0; i <= kX2; ++i) d = poly_gcd(d, g.derivative(i));
  if (!d.is_constant()) throw DomainError("curve equation is not squarefree");
  const Field& F = g.field();
  std::vector<MPoly<Field>> swap;
  for (std::size_t i = 0; i < 3; ++i) swap.push_back(MPoly<Field>::variable(F, incidence_vars(), kA0 + i));
  for (std::size_t i = 0; i < 3; ++i) swap.push_back(MPoly<Field>::variable(F, incidence_vars(), kX0 + i));
  CurveDualWeb<Field> out{build_web(reduce_mod_incidence(g.compose(swap), 0, m)), false};
  std::mt19937_64 rng(0);
  auto lines = lines_where_vanishes(g, rng);
  out.has_linear_factor = !lines.lines.empty();
  return out;
}

// ---------------------------------------------------------------------------
// Degree 1: k-webs of degree 1 and degree-k foliations on the dual plane.

inline const VarNames& dual_vars() {
  static const VarNames v = make_vars({"a0", "a1", "a2"});
  return v;
}

/// The 1-form X0 da0 + X1 da1 + X2 da2 on the dual plane.
template <class Field>
struct DualFoliation {
  int k;
  std::array<MPoly<Field>, 3> X;

  const Field& field() const { return X[0].field(); }
};

template <class Field>
MPoly<Field> euler_contraction(const DualFoliation<Field>& f) {
  const Field& F = f.field();
  MPoly<Field> s(F, dual_vars());
  for (std::size_t i = 0; i < 3; ++i) s += MPoly<Field>::variable(F, dual_vars(), i) * f.X[i];
  return s;
}

template <class Field>
MPoly<Field> foliation_content(const DualFoliation<Field>& f) {
  return poly_gcd(poly_gcd(f.X[0], f.X[1]), f.X[2]);
}

template <class Field>
bool is_saturated(const DualFoliation<Field>& f) {
  return foliation_content(f).is_constant();
}

/// Coefficients L_i(a) of X_i in a section linear in X.
template <class Field>
std::array<MPoly<Field>, 3> linear_coefficients(const BiHomPoly<Field>& s) {
  const Field& F = s.field();
  std::array<MPoly<Field>, 3> L{MPoly<Field>(F, dual_vars()), MPoly<Field>(F, dual_vars()),
                                MPoly<Field>(F, dual_vars())};
  for (const auto& [m, c] : s.poly.terms()) {
    int which = -1;
    for (int i = 0; i < 3; ++i)
      if (m.exp[kX0 + i] == 1) which = i;
    if (x_degree(m) != 1 || which < 0) throw DomainError("section is not linear in X");
    Monomial a;
    for (int i = 0; i < 3; ++i) a.exp[i] = m.exp[kA0 + i];
    L[which].add_term(a, c);
  }
  return L;
}

/// X(a) = L(a) x a for F = X0 L0(a) + X1 L1(a) + X2 L2(a).
template <class Field>
DualFoliation<Field> dual_foliation_of_degree1_web(const PlaneWeb<Field>& w) {
  if (w.d != 1) throw DomainError("dual foliation needs a web of degree 1");
  const Field& F = w.field();
  auto L = linear_coefficients(w.section);
  auto a = [&](std::size_t i) { return MPoly<Field>::variable(F, dual_vars(), i); };
  return DualFoliation<Field>{w.k, {L[1] * a(2) - L[2] * a(1), L[2] * a(0) - L[0] * a(2), L[0] * a(1) - L[1] * a(0)}};
}

/// Inverse of dual_foliation_of_degree1_web: solves L x a = X and returns
/// the normal form of X0 L0(A) + X1 L1(A) + X2 L2(A).
template <class Field>
PlaneWeb<Field> web_of_foliation(const DualFoliation<Field>& f) {
  const Field& F = f.field();
  if (!euler_contraction(f).is_zero()) throw DomainError("coefficients do not satisfy the Euler identity");
  if (!is_saturated(f)) throw DomainError("foliation is not saturated: " + foliation_content(f).to_string());
  const int k = f.k;
  // Unknowns: coefficients of L0, L1, L2 in the degree-k monomials of a.
  std::vector<Monomial> mons;
  for (int i0 = k; i0 >= 0; --i0)
    for (int i1 = k - i0; i1 >= 0; --i1) {
      Monomial m;
      m.exp[0] = static_cast<std::uint16_t>(i0);
      m.exp[1] = static_cast<std::uint16_t>(i1);
      m.exp[2] = static_cast<std::uint16_t>(k - i0 - i1);
      mons.push_back(m);
    }
  const std::size_t nm = mons.size();
  auto unit = [](std::size_t i) {
    Monomial m;
    m.exp[i] = 1;
    return m;
  };
  // (L x a)_0 = L1 a2 - L2 a1, (L x a)_1 = L2 a0 - L0 a2, (L x a)_2 = L0 a1 - L1 a0.
  struct Contribution {
    std::size_t comp, which, var;
    int sign;
  };
  const Contribution contribs[6] = {{0, 1, 2, 1}, {0, 2, 1, -1}, {1, 2, 0, 1}, {1, 0, 2, -1}, {2, 0, 1, 1}, {2, 1, 0, -1}};
  std::map<std::pair<std::size_t, decltype(Monomial::exp)>, std::size_t> row_of;
  auto row = [&](std::size_t comp, const Monomial& m) {
    auto key = std::make_pair(comp, m.exp);
    auto it = row_of.find(key);
    if (it == row_of.end()) it = row_of.emplace(key, row_of.size()).first;
    return it->second;
  };
  for (std::size_t c = 0; c < 3; ++c)
    for (const auto& [m, v] : f.X[c].terms()) row(c, m);
  for (const auto& ct : contribs)
    for (const auto& m : mons) row(ct.comp, m * unit(ct.var));
  Matrix<Field> mat(F, row_of.size(), 3 * nm);
  std::vector<typename Field::Elem> rhs(row_of.size(), F.zero());
  for (const auto& ct : contribs)
    for (std::size_t j = 0; j < nm; ++j) {
      auto& e = mat.at(row(ct.comp, mons[j] * unit(ct.var)), ct.which * nm + j);
      e = F.add(e, F.from_int(ct.sign));
    }
  for (std::size_t c = 0; c < 3; ++c)
    for (const auto& [m, v] : f.X[c].terms()) rhs[row(c, m)] = v;
  auto sol = solve_linear(mat, rhs);
  if (!sol) throw DomainError("foliation is not of the form L x a with deg L = k");
  MPoly<Field> s(F, incidence_vars());
  for (std::size_t which = 0; which < 3; ++which)
    for (std::size_t j = 0; j < nm; ++j) {
      Monomial m;
      m.exp[kX0 + which] = 1;
      for (int i = 0; i < 3; ++i) m.exp[kA0 + i] = mons[j].exp[i];
      s.add_term(m, (*sol)[which * nm + j]);
    }
  return build_web(reduce_mod_incidence(s, 1, k));
}

template <class Field>
struct SingularityReport {
  bool degenerate = false;  // non-isolated singularities
  std::int64_t count = 0;   // with multiplicity
  std::vector<Point3<Field>> rational;  // normalized, sorted
};

/// Singularities of a foliation on the dual plane, counted with multiplicity
/// through a resultant in a random projective frame with no singularity on
/// the line at infinity.
template <class Field>
SingularityReport<Field> singularity_count(const DualFoliation<Field>& f, std::mt19937_64& rng, int attempts = 64) {
  using P = MPoly<Field>;
  const Field& F = f.field();
  if (!euler_contraction(f).is_zero()) throw DomainError("coefficients do not satisfy the Euler identity");
  SingularityReport<Field> out;
  if (!is_saturated(f)) {
    out.degenerate = true;
    return out;
  }
  const VarNames& bv = dual_vars();
  auto b = [&](std::size_t i) { return P::variable(F, bv, i); };
  for (int attempt = 0; attempt < attempts; ++attempt) {
    std::array<std::array<typename Field::Elem, 3>, 3> M;
    for (auto& r : M)
      for (auto& e : r) e = F.from_int(random_coefficient(rng, 3));
    auto minor = [&](int i, int j, int k, int l) { return F.sub(F.mul(M[1][i], M[2][j]), F.mul(M[1][k], M[2][l])); };
    auto det = F.add(F.sub(F.mul(M[0][0], minor(1, 2, 2, 1)), F.mul(M[0][1], minor(0, 2, 2, 0))),
                     F.mul(M[0][2], minor(0, 1, 1, 0)));
    if (F.is_zero(det)) continue;
    // X'(b) = M^T X(M b).
    std::vector<P> Mb;
    for (int i = 0; i < 3; ++i) Mb.push_back(b(0).scaled(M[i][0]) + b(1).scaled(M[i][1]) + b(2).scaled(M[i][2]));
    std::array<P, 3> Xm{f.X[0].compose(Mb), f.X[1].compose(Mb), f.X[2].compose(Mb)};
    std::array<P, 3> Xp{P(F, bv), P(F, bv), P(F, bv)};
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) Xp[j] += Xm[i].scaled(M[i][j]);
    // On b2 = 0: X'0 = b1 G, X'1 = -b0 G.
    P zero_b2 = P(F, bv);
    P X0inf = Xp[0].substitute(2, zero_b2);
    if (X0inf.is_zero()) continue;
    auto G = X0inf.divide_exact(b(1));
    if (!G) throw DomainError("internal: Euler identity violated at infinity");
    P G01 = G->substitute(0, zero_b2).substitute(1, P::constant(F, bv, F.one()));
    if (G01.is_zero()) continue;
    // Singularities at infinity: common roots of G(1, s) and X'2(1, s, 0).
    P one = P::constant(F, bv, F.one());
    auto Gs = to_upoly(G->substitute(0, one), 1);
    auto X2s = to_upoly(Xp[2].substitute(2, zero_b2).substitute(0, one), 1);
    if (Gs.degree() > 0 && (X2s.is_zero() || gcd(Gs, X2s).degree() > 0)) continue;
    P Pc = Xp[0].substitute(2, one);
    P Qc = (Xp[0] + Xp[1]).substitute(2, one);
    P R = resultant(Pc, Qc, 1);
    if (R.is_zero()) {
      out.degenerate = true;
      return out;
    }
    out.count = std::max(R.degree_in(0), 0);
    if (out.count > 0) {
      for (const auto& u0 : roots_in_field(to_upoly(R, 0))) {
        P uc = P::constant(F, bv, u0);
        auto pv = to_upoly(Pc.substitute(0, uc), 1);
        auto qv = to_upoly(Qc.substitute(0, uc), 1);
        auto g = gcd(pv, qv);
        if (g.degree() <= 0) continue;
        for (const auto& v0 : roots_in_field(g)) {
          std::array<typename Field::Elem, 3> bpt{u0, v0, F.one()};
          Point3<Field> a;
          for (int i = 0; i < 3; ++i)
            a[i] = F.add(F.add(F.mul(M[i][0], bpt[0]), F.mul(M[i][1], bpt[1])), F.mul(M[i][2], bpt[2]));
          out.rational.push_back(normalize_projective(F, a));
        }
      }
      std::sort(out.rational.begin(), out.rational.end());
    }
    return out;
  }
  throw DomainError("no projective frame avoided singularities at infinity");
}

// ---------------------------------------------------------------------------
// Singular locus of the foliation induced on the lift surface.

template <class Field>
struct WebSingularLocus {
  std::vector<MPoly<Field>> generators;  // F, F_p, F_x + p F_y in the chart
  bool finite = false;
};

namespace detail {

// Projection of V(F, F_p, F_x + p F_y) to the (x, y)-plane is finite when the
// two resultants in p share no curve and the a_i have no common curve.
inline bool singular_locus_finite(const FpPoly& f, const std::vector<FpPoly>& coeffs) {
  FpPoly content(f.field(), chart_vars());
  for (const auto& a : coeffs) content = poly_gcd(content, a);
  if (!content.is_constant()) return false;
  FpPoly p = FpPoly::variable(f.field(), chart_vars(), kp);
  FpPoly fp = f.derivative(kp), g = f.derivative(kx) + p * f.derivative(ky);
  if (fp.is_zero() || g.is_zero()) return false;
  FpPoly r1 = resultant(f, fp, kp), r2 = resultant(f, g, kp);
  if (r1.is_zero() || r2.is_zero()) return false;
  return poly_gcd(r1, r2).is_constant();
}

}  // namespace detail

template <class Field>
WebSingularLocus<Field> web_singular_locus(const PlaneWeb<Field>& w) {
  MPoly<Field> f = w.chart();
  MPoly<Field> p = MPoly<Field>::variable(w.field(), chart_vars(), kp);
  WebSingularLocus<Field> out{{f, f.derivative(kp), f.derivative(kx) + p * f.derivative(ky)}, false};
  if constexpr (Field::kIsPrime) {
    out.finite = detail::singular_locus_finite(f, w.chart_coeffs);
  } else {
    // Exact elimination over Q swells quickly; decide modulo a large prime.
    // A nonconstant common factor over Q survives reduction for all but
    // finitely many primes, so "finite" here errs only with negligible odds.
    for (std::uint64_t q : {2305843009213693951ull, 4611686018427387847ull, 1152921504606846883ull}) {
      PrimeField Fq(q);
      auto fq = reduce_mod(f, Fq);
      if (!fq || fq->degree_in(kp) != w.k) continue;
      std::vector<FpPoly> cq;
      for (const auto& a : w.chart_coeffs) cq.push_back(*reduce_mod(a, Fq));
      out.finite = detail::singular_locus_finite(*fq, cq);
      break;
    }
  }
  return out;
}

/// Whether the chart point (x, y, p) lies in the singular locus.
template <class Field>
bool in_singular_locus(const WebSingularLocus<Field>& s, const std::vector<typename Field::Elem>& pt) {
  for (const auto& g : s.generators)
    if (!s.generators.front().field().is_zero(g.evaluate(pt))) return false;
  return true;
}

template <class Field>
struct WebLines {
  bool family = false;
  std::int64_t count = -1;  // with multiplicity, when known
  std::vector<Point3<Field>> lines;
};

template <class Field>
WebLines<Field> invariant_lines_of_web(const PlaneWeb<Field>& w, std::mt19937_64& rng) {
  WebLines<Field> out;
  if (w.d == 0) {
    out.family = true;
    return out;
  }
  if (w.d == 1) {
    auto fol = dual_foliation_of_degree1_web(w);
    if (is_saturated(fol)) {
      auto rep = singularity_count(fol, rng);
      if (!rep.degenerate) {
        out.count = rep.count;
        out.lines = rep.rational;
        return out;
      }
    }
  }
  auto sol = lines_where_vanishes(w.section.poly, rng);
  out.family = sol.family;
  out.lines = sol.lines;
  return out;
}

}  // namespace p2ode
