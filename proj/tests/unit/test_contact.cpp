#include "doctest.h"

#include "p2ode/contact.hpp"

using namespace p2ode;

namespace {

const Rationals QQ;

QPoly iv(std::size_t i) { return QPoly::variable(QQ, incidence_vars(), i); }
QPoly cv(std::size_t i) { return QPoly::variable(QQ, chart_vars(), i); }
QPoly cc(long v) { return QPoly::constant(QQ, chart_vars(), v); }

// Random raw (not reduced) bihomogeneous polynomial.
QPoly raw_bihom(int m, int n, std::mt19937_64& rng) {
  QPoly f(QQ, incidence_vars());
  for (int t = 0; t < 6; ++t) {
    Monomial mono;
    int left = m;
    for (int i = 0; i < 2; ++i) {
      int e = static_cast<int>(rng() % (left + 1));
      mono.exp[i] = static_cast<std::uint16_t>(e);
      left -= e;
    }
    mono.exp[2] = static_cast<std::uint16_t>(left);
    left = n;
    for (int i = 3; i < 5; ++i) {
      int e = static_cast<int>(rng() % (left + 1));
      mono.exp[i] = static_cast<std::uint16_t>(e);
      left -= e;
    }
    mono.exp[5] = static_cast<std::uint16_t>(left);
    f.add_term(mono, mpq_class(random_coefficient(rng, 4)));
  }
  return f;
}

}  // namespace

TEST_CASE("incidence normal form") {
  QPoly inc = iv(kA0) * iv(kX0) + iv(kA1) * iv(kX1) + iv(kA2) * iv(kX2);
  CHECK(reduce_mod_incidence(inc).is_zero());
  CHECK(reduce_mod_incidence(iv(kA0) * iv(kX0)).poly == -(iv(kA1) * iv(kX1)) - iv(kA2) * iv(kX2));
  CHECK(monomial_basis(1, 1).monomials.size() == 8);
  CHECK(monomial_basis(0, 0).monomials.size() == 1);
  CHECK(monomial_basis(-1, 2).no_sections);
  CHECK_THROWS_AS(reduce_mod_incidence(iv(kX0) + iv(kA0)), DomainError);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    int m1 = static_cast<int>(rng() % 3), n1 = static_cast<int>(rng() % 3);
    int m2 = static_cast<int>(rng() % 3), n2 = static_cast<int>(rng() % 3);
    QPoly f = raw_bihom(m1, n1, rng), g = raw_bihom(m2, n2, rng);
    if (f.is_zero() || g.is_zero()) continue;
    auto rf = reduce_mod_incidence(f, m1, n1), rg = reduce_mod_incidence(g, m2, n2);
    CHECK(reduce_mod_incidence(rf.poly, m1, n1) == rf);
    CHECK(reduce_mod_incidence(f * g, m1 + m2, n1 + n2) == rf * rg);
    CHECK(chart_restrict(rf) == chart_restrict(f));
    for (const auto& [mono, c] : rf.poly.terms()) CHECK_FALSE((mono.exp[kX0] > 0 && mono.exp[kA0] > 0));
  }
}

TEST_CASE("chart restriction") {
  CHECK(chart_restrict(iv(kX1)) == cv(kx));
  CHECK(chart_restrict(iv(kA0)) == cv(kp) * cv(kx) - cv(ky));
  auto back = from_chart(cv(kp) * cv(kx) - cv(ky), 0, 1);
  REQUIRE(back);
  CHECK(chart_restrict(*back) == cv(kp) * cv(kx) - cv(ky));
  CHECK_FALSE(from_chart(cv(kp).pow(3), 1, 1));
}

TEST_CASE("building equations and chart fields") {
  auto L = lines_ode(QQ);
  CHECK(L.bidegree() == bundles::kLifted);
  auto lf = chart_vector_field(L);
  CHECK(lf.A.is_zero());
  CHECK(lf.B == cc(1));
  auto V = vertical_ode(QQ);
  CHECK(V.bidegree() == bundles::kVertical);
  auto vf = chart_vector_field(V);
  CHECK(vf.A == cc(1));
  CHECK(vf.B.is_zero());

  std::mt19937_64 rng(23);
  auto e = build_ode(random_bihom(QQ, 5, 0, rng), random_bihom(QQ, 2, 3, rng));
  CHECK(e.bidegree() == Bidegree{3, 1});
  auto f = chart_vector_field(e);
  CHECK(f.A.degree_in(kp) <= 3);
  CHECK(f.B.degree_in(kp) <= 0);
  CHECK_THROWS_AS(build_ode(random_bihom(QQ, 5, 0, rng), random_bihom(QQ, 2, 2, rng)), DomainError);
  CHECK_THROWS_AS(build_ode(BiHomPoly<Rationals>(QQ, 3, 0), BiHomPoly<Rationals>(QQ, 0, 3)), DomainError);

  // y'' = 1 from chart data.
  auto ode = ode_from_chart(1, 1, cc(1), cc(1));
  REQUIRE(ode);
  CHECK(ode->F1.poly == iv(kX0).pow(3));
  CHECK(ode->F2.poly == iv(kA2).pow(3));
}

TEST_CASE("tangency section of two equations") {
  auto L = lines_ode(QQ), V = vertical_ode(QQ);
  auto w = tangency_section_pair(L, V);
  CHECK(w.m == 0);
  CHECK(w.n == 0);
  CHECK(w.poly == QPoly::constant(QQ, incidence_vars(), 1));
  std::mt19937_64 rng(31);
  auto e = random_ode(QQ, 2, 1, rng);
  CHECK(tangency_section_pair(e, e).is_zero());
  for (int trial = 0; trial < 50; ++trial) {
    int a1 = 1 + static_cast<int>(rng() % 2), b1 = 1 + static_cast<int>(rng() % 2);
    int a2 = 1 + static_cast<int>(rng() % 2), b2 = 1 + static_cast<int>(rng() % 2);
    auto e1 = random_ode(QQ, a1, b1, rng, 2), e2 = random_ode(QQ, a2, b2, rng, 2);
    auto s = tangency_section_pair(e1, e2);
    auto cls = tangency_class_pair(e1.bidegree(), e2.bidegree());
    CHECK(s.m == cls.a);
    CHECK(s.n == cls.b);
    if (trial < 8) {
      auto c1 = chart_vector_field(e1), c2 = chart_vector_field(e2);
      CHECK(chart_restrict(s) == c1.B * c2.A - c1.A * c2.B);
    }
  }
}

TEST_CASE("tangency counts on lines and fibers") {
  auto L = lines_ode(QQ);
  auto t = tangency_on_curve(L, chart_fiber(QQ, mpq_class(2), mpq_class(-1)));
  CHECK_FALSE(t.invariant);
  CHECK(t.total == 0);
  CHECK(tangency_on_curve(L, chart_line(QQ, mpq_class(1), mpq_class(0))).invariant);

  auto y2 = *ode_from_chart(1, 1, cc(1), cc(1));
  CHECK(tangency_on_curve(y2, chart_line(QQ, mpq_class(3), mpq_class(2))).total == 0);

  std::mt19937_64 rng(41);
  for (int a = 1; a <= 4; ++a)
    for (int b = 1; b <= 4; ++b)
      for (int trial = 0; trial < 20; ++trial) {
        auto e = random_ode(QQ, a, b, rng, 3);
        mpq_class m(random_coefficient(rng, 9)), c(random_coefficient(rng, 9));
        auto tl = tangency_on_curve(e, chart_line(QQ, m, c));
        auto tf = tangency_on_curve(e, chart_fiber(QQ, m, c));
        if (tl.invariant || tf.invariant) continue;
        CHECK(tl.total == a - 1);
        CHECK(tf.total == b - 1);
        if (trial == 0) {
          // Affine part against the chart: -A(t, c + m t, m).
          auto f = chart_vector_field(e);
          QPoly tt = cv(kx);
          QPoly g = f.A.substitute(ky, cc(0) + tt.scaled(m) + QPoly::constant(QQ, chart_vars(), c))
                        .substitute(kp, QPoly::constant(QQ, chart_vars(), m));
          int affine = 0;
          for (const auto& [fac, mult] : tl.factors) affine += fac.degree() * static_cast<int>(mult);
          CHECK(affine == std::max(g.degree_in(kx), 0));
        }
      }
}

TEST_CASE("recovering the class of the lines and vertical equations") {
  std::mt19937_64 rng(5);
  CHECK(recover_bidegree(lines_ode(QQ), rng) == bundles::kLifted);
  CHECK(recover_bidegree(vertical_ode(QQ), rng) == bundles::kVertical);
  auto e = random_ode(QQ, 2, 3, rng);
  CHECK(recover_bidegree(e, rng) == Bidegree{2, 3});
}

TEST_CASE("recovering the class of twisted lines and vertical equations") {
  std::mt19937_64 rng(9);
  for (auto [a, b] : {std::pair{3, 1}, {1, 2}, {2, 4}}) {
    auto v = build_ode(BiHomPoly<Rationals>(QQ, a + 2, b - 1), random_bihom(QQ, a - 1, b + 2, rng));
    CHECK(recover_bidegree(v, rng) == Bidegree{a, b});
  }
  for (auto [a, b] : {std::pair{3, 3}, {1, 2}, {0, 1}}) {
    auto l = build_ode(random_bihom(QQ, a + 2, b - 1, rng), BiHomPoly<Rationals>(QQ, a - 1, b + 2));
    CHECK(recover_bidegree(l, rng) == Bidegree{a, b});
  }
}

TEST_CASE("T1/T2 and R1/R2") {
  std::mt19937_64 rng(43);
  auto F = random_bihom(QQ, 3, 1, rng);
  auto r1 = embed_R1_R2(F, Embedding::R1);
  CHECK(r1.bidegree() == Bidegree{1, 2});
  CHECK(extract_T1_T2(r1).first.is_zero());
  auto r2 = embed_R1_R2(F, Embedding::R2);
  CHECK(r2.bidegree() == Bidegree{4, -1});
  CHECK(extract_T1_T2(r2).second.is_zero());
  CHECK(extract_T1_T2(r2).first == F);
  auto one = BiHomPoly<Rationals>(0, 0, QPoly::constant(QQ, incidence_vars(), 1));
  CHECK(embed_R1_R2(one, Embedding::R1).bidegree() == bundles::kLifted);
  CHECK_THROWS_AS(embed_R1_R2(BiHomPoly<Rationals>(QQ, 1, 1), Embedding::R1), DomainError);
  for (int trial = 0; trial < 5; ++trial) {
    auto e = random_ode(QQ, 2, 2, rng);
    auto [t1, t2] = extract_T1_T2(e);
    auto back = build_ode(t2, t1);
    CHECK(back.F1 == e.F1);
    CHECK(back.F2 == e.F2);
  }
}

TEST_CASE("lifts of plane curves are tangent to the contact distribution") {
  QPoly x = cv(kx), y = cv(ky), p = cv(kp);
  auto l = lift_plane_curve(y - x.scaled(3) - cc(2));
  CHECK(l.g == p - cc(3));
  CHECK(lift_plane_curve(y - x * x).g == p - x.scaled(2));
  CHECK(lift_plane_curve(x * x + y * y - cc(1)).g == x.scaled(2) + y.scaled(2) * p);
  CHECK_THROWS_AS(lift_plane_curve(cc(3)), DomainError);
  CHECK_THROWS_AS(lift_plane_curve((y - x).pow(2)), DomainError);

  std::vector<QPoly> curves = {y - x * x, x * x + y * y - cc(1), y * y - x.pow(3) - x, x * y - cc(1),
                               y.pow(2) * x - x.pow(3) + y, x * (y - x)};
  // A vertical line lifts to a fiber at p = infinity, outside the chart.
  CHECK_THROWS_AS(is_tangent_to_contact(lift_plane_curve(x - cc(4))), DomainError);
  for (const auto& f : curves) CHECK(is_tangent_to_contact(lift_plane_curve(f)));
  CHECK(is_tangent_to_contact(x - cc(2), y - cc(5)));
  CHECK_FALSE(is_tangent_to_contact(y, p - cc(1)));
  CHECK_FALSE(is_tangent_to_contact(y - x * x, p - x));
}
