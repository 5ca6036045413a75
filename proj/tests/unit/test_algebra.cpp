#include "doctest.h"

#include "p2ode/gcd.hpp"
#include "p2ode/linalg.hpp"
#include "p2ode/resultant.hpp"
#include "p2ode/upoly.hpp"

#include <random>

using namespace p2ode;

namespace {

const Rationals QQ;

QPoly random_qpoly(std::mt19937_64& rng, const VarNames& v, int deg, int terms) {
  QPoly f(QQ, v);
  for (int t = 0; t < terms; ++t) {
    Monomial m;
    int left = static_cast<int>(rng() % (deg + 1));
    for (std::size_t i = 0; i < v->size() && left > 0; ++i) {
      int e = static_cast<int>(rng() % (left + 1));
      m.exp[i] = static_cast<std::uint16_t>(e);
      left -= e;
    }
    f.add_term(m, mpq_class(static_cast<long>(rng() % 11) - 5));
  }
  return f;
}

// Leibniz expansion; only for tiny matrices.
QPoly leibniz(const std::vector<std::vector<QPoly>>& m, const VarNames& v) {
  const std::size_t n = m.size();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  QPoly det(QQ, v);
  do {
    int inv = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inv += perm[i] > perm[j];
    QPoly t = QPoly::constant(QQ, v, 1);
    for (std::size_t i = 0; i < n; ++i) t = t * m[i][perm[i]];
    det += (inv % 2) ? -t : t;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

}  // namespace

TEST_CASE("prime field arithmetic and validation") {
  CHECK_THROWS_AS(PrimeField(1), DomainError);
  CHECK_THROWS_AS(PrimeField(15), DomainError);
  PrimeField F(7);
  CHECK(F.from_int(-1) == 6);
  CHECK(F.mul(F.inv(3), 3) == 1);
  CHECK_THROWS_AS(F.inv(0), DomainError);
  PrimeField big(18446744073709551557ull);
  CHECK(big.mul(big.from_int(-1), big.from_int(-1)) == 1);
  PrimeField::Elem r;
  CHECK_FALSE(reduce_rational(F, mpq_class(1, 7), r));
  CHECK(reduce_rational(F, mpq_class(1, 2), r));
  CHECK(r == 4);
}

TEST_CASE("polynomial arithmetic, division and composition") {
  auto v = make_vars({"x", "y"});
  QPoly x = QPoly::variable(QQ, v, 0), y = QPoly::variable(QQ, v, 1);
  QPoly f = (x + y).pow(3);
  CHECK(f.total_degree() == 3);
  CHECK(f.coeff(Monomial{{2, 1}}) == 3);
  auto q = f.divide_exact(x + y);
  REQUIRE(q);
  CHECK(*q == (x + y) * (x + y));
  CHECK_FALSE(f.divide_exact(x - y));
  CHECK(f.substitute(1, -x).is_zero());
  CHECK(f.derivative(0) == (x + y).pow(2).scaled(3));
  CHECK(f.evaluate({1, 2}) == 27);
  CHECK((x * y - y * x).is_zero());
  auto w = make_vars({"u"});
  CHECK_THROWS_AS(x + QPoly::variable(QQ, w, 0), DomainError);
}

TEST_CASE("multivariate gcd recovers planted common factors") {
  auto v = make_vars({"x", "y", "z"});
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 12; ++trial) {
    QPoly g = random_qpoly(rng, v, 2, 3);
    QPoly a = random_qpoly(rng, v, 2, 3), b = random_qpoly(rng, v, 2, 3);
    if (g.is_zero() || a.is_zero() || b.is_zero()) continue;
    QPoly d = poly_gcd(g * a, g * b);
    // g divides the gcd, and the gcd divides both inputs.
    CHECK(d.divisible_by(g));
    CHECK((g * a).divisible_by(d));
    CHECK((g * b).divisible_by(d));
  }
  QPoly x = QPoly::variable(QQ, v, 0), y = QPoly::variable(QQ, v, 1);
  CHECK(poly_gcd(x, y).is_constant());
  CHECK(poly_gcd(x * x - y * y, x * x + x * y) == x + y);
}

TEST_CASE("resultant matches the Leibniz determinant and root products") {
  auto v = make_vars({"t", "s"});
  QPoly t = QPoly::variable(QQ, v, 0), s = QPoly::variable(QQ, v, 1);
  // Res_t((t-1)(t-2), t-s) = (s-1)(s-2) up to the sign convention.
  QPoly f = (t - QPoly::constant(QQ, v, 1)) * (t - QPoly::constant(QQ, v, 2));
  QPoly r = resultant(f, t - s, 0);
  QPoly expect = (s - QPoly::constant(QQ, v, 1)) * (s - QPoly::constant(QQ, v, 2));
  CHECK(r == expect);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<std::vector<QPoly>> m(4, std::vector<QPoly>(4, QPoly(QQ, v)));
    for (auto& row : m)
      for (auto& e : row) e = random_qpoly(rng, v, 1, 2);
    CHECK(bareiss_determinant(m, QQ, v) == leibniz(m, v));
  }
  CHECK_THROWS_AS(resultant(QPoly::constant(QQ, v, 2), s, 0), DomainError);
  CHECK(resultant(QPoly::constant(QQ, v, 2), f, 0) == QPoly::constant(QQ, v, 4));
}

TEST_CASE("univariate roots over Q and F_p") {
  const Rationals F;
  UPoly<Rationals> x = UPoly<Rationals>::x(F);
  auto c = [&](long n, long d = 1) { return UPoly<Rationals>::constant(F, mpq_class(n, d)); };
  auto f = (x - c(3, 7)) * (x - c(3, 7)) * (x + c(5)) * x * (x * x + c(1));
  auto roots = roots_in_field(f);
  REQUIRE(roots.size() == 3);
  CHECK(roots[0] == -5);
  CHECK(roots[1] == 0);
  CHECK(roots[2] == mpq_class(3, 7));

  auto sqf = squarefree_decomposition(f);
  int total = 0;
  for (auto& [g, mult] : sqf) total += g.degree() * static_cast<int>(mult);
  CHECK(total == f.degree());

  for (std::uint64_t p : {5ull, 7919ull, 1000003ull}) {
    PrimeField Fp(p);
    UPoly<PrimeField> X = UPoly<PrimeField>::x(Fp);
    auto k = [&](long v) { return UPoly<PrimeField>::constant(Fp, Fp.from_int(v)); };
    auto g = (X - k(1)) * (X - k(3)) * (X * X - k(2)) * (X - k(3));
    auto rs = roots_in_field(g);
    std::vector<std::uint64_t> brute;
    if (p < 10000)
      for (std::uint64_t a = 0; a < p; ++a)
        if (g.evaluate(a) == 0) brute.push_back(a);
    if (p < 10000) CHECK(rs == brute);
    for (auto r0 : rs) CHECK(g.evaluate(r0) == 0);
    CHECK(std::find(rs.begin(), rs.end(), 1) != rs.end());
  }
}

TEST_CASE("nullspace over Q and F_p") {
  Matrix<Rationals> m(QQ, 2, 4);
  long vals[2][4] = {{1, 2, 3, 4}, {2, 4, 7, 1}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 4; ++j) {
      m.at(i, j) = mpq_class(vals[i][j], j + 1);
      m.at(i, j).canonicalize();
    }
  auto ns = exact_nullspace(m);
  CHECK(ns.size() == 2);
  for (auto& v : ns)
    for (int i = 0; i < 2; ++i) {
      mpq_class s = 0;
      for (int j = 0; j < 4; ++j) s += m.at(i, j) * v[j];
      CHECK(s == 0);
    }
  CHECK(matrix_rank(m) == 2);

  std::mt19937_64 rng(9);
  for (std::uint64_t p : {2ull, 5ull, 65521ull, 4294967311ull}) {
    PrimeField F(p);
    Matrix<PrimeField> a(F, 5, 9);
    for (auto& e : a.data) e = rng() % p;
    for (std::size_t j = 0; j < 9; ++j) a.at(4, j) = F.add(a.at(0, j), a.at(1, j));
    auto basis = exact_nullspace(a);
    CHECK(basis.size() >= 5);
    for (auto& v : basis)
      for (std::size_t i = 0; i < 5; ++i) {
        std::uint64_t s = 0;
        for (std::size_t j = 0; j < 9; ++j) s = F.add(s, F.mul(a.at(i, j), v[j]));
        CHECK(s == 0);
      }
  }

  Matrix<Rationals> sq(QQ, 2, 2);
  sq.at(0, 0) = 1;
  sq.at(0, 1) = 1;
  sq.at(1, 0) = 1;
  sq.at(1, 1) = 1;
  CHECK_FALSE(solve_linear(sq, {mpq_class(1), mpq_class(2)}));
  auto sol = solve_linear(sq, {mpq_class(3), mpq_class(3)});
  REQUIRE(sol);
  CHECK((*sol)[0] + (*sol)[1] == 3);
}
