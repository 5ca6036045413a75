#include "p2ode/upoly.hpp"

#include <set>

namespace p2ode {

namespace {

using FpU = UPoly<PrimeField>;

void split_linear_factors(const FpU& g, std::mt19937_64& rng, std::vector<std::uint64_t>& out) {
  const PrimeField& F = g.field();
  if (g.degree() <= 0) return;
  if (g.degree() == 1) {
    out.push_back(F.neg(F.div(g.coeff(0), g.coeff(1))));
    return;
  }
  const std::uint64_t p = F.modulus();
  for (;;) {
    std::uint64_t delta = rng() % p;
    FpU base(F, {delta, F.one()});
    FpU h = powmod(base, (p - 1) / 2, g) - FpU::constant(F, F.one());
    FpU d = gcd(g, h);
    if (d.degree() > 0 && d.degree() < g.degree()) {
      split_linear_factors(d, rng, out);
      split_linear_factors(g / d, rng, out);
      return;
    }
  }
}

// p-adic rational root recovery for a squarefree primitive integer polynomial.
struct IntPoly {
  std::vector<mpz_class> c;
  mpz_class eval_mod(const mpz_class& x, const mpz_class& m) const {
    mpz_class acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
      acc = acc * x + *it;
      acc %= m;
    }
    if (acc < 0) acc += m;
    return acc;
  }
  mpz_class deriv_eval_mod(const mpz_class& x, const mpz_class& m) const {
    mpz_class acc = 0;
    for (std::size_t i = c.size() - 1; i >= 1; --i) {
      acc = acc * x + c[i] * static_cast<unsigned long>(i);
      acc %= m;
    }
    if (acc < 0) acc += m;
    return acc;
  }
};

bool rational_reconstruct(const mpz_class& r, const mpz_class& m, const mpz_class& num_bound,
                          const mpz_class& den_bound, mpq_class& out) {
  mpz_class r0 = m, r1 = r, t0 = 0, t1 = 1;
  while (r1 > num_bound) {
    mpz_class q = r0 / r1;
    mpz_class r2 = r0 - q * r1;
    mpz_class t2 = t0 - q * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  if (t1 == 0 || abs(t1) > den_bound) return false;
  out = mpq_class(r1, t1);
  out.canonicalize();
  return true;
}

}  // namespace

std::vector<std::uint64_t> roots_in_field(const UPoly<PrimeField>& f) {
  std::vector<std::uint64_t> out;
  if (f.is_zero()) throw DomainError("roots of the zero polynomial");
  if (f.degree() <= 0) return out;
  const PrimeField& F = f.field();
  const std::uint64_t p = F.modulus();
  if (p <= 4096) {
    for (std::uint64_t x = 0; x < p; ++x)
      if (f.evaluate(x) == 0) out.push_back(x);
    return out;
  }
  FpU g = f.monic();
  FpU xp = powmod(FpU::x(F), p, g) - FpU::x(F);
  FpU lin = gcd(g, xp);
  if (lin.coeff(0) == 0 && lin.degree() >= 1) {
    out.push_back(0);
    lin = lin / FpU::x(F);
  }
  std::mt19937_64 rng(0x5eed);
  split_linear_factors(lin.monic(), rng, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<mpq_class> roots_in_field(const UPoly<Rationals>& f) {
  std::vector<mpq_class> out;
  if (f.is_zero()) throw DomainError("roots of the zero polynomial");
  if (f.degree() <= 0) return out;
  UPoly<Rationals> g = squarefree_part(f);
  if (sgn(g.coeff(0)) == 0) {
    out.push_back(0);
    g = g / UPoly<Rationals>::x(g.field());
  }
  if (g.degree() <= 0) return out;

  // Clear denominators and content.
  mpz_class den = 1;
  for (const auto& c : g.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
  IntPoly ip;
  mpz_class content = 0;
  for (const auto& c : g.coeffs()) {
    mpz_class v = c.get_num() * (den / c.get_den());
    ip.c.push_back(v);
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), v.get_mpz_t());
  }
  for (auto& v : ip.c) v /= content;
  const mpz_class a0 = abs(ip.c.front());
  const mpz_class lc = abs(ip.c.back());

  // A prime of good reduction: keeps the degree and stays squarefree.
  std::uint64_t p = 3;
  for (;; p += 2) {
    if (!is_prime_u64(p) || p <= static_cast<std::uint64_t>(g.degree())) continue;
    PrimeField F(p);
    std::vector<std::uint64_t> cs;
    for (const auto& v : ip.c) cs.push_back(F.from_mpz(v));
    FpU gp(F, cs);
    if (gp.degree() != g.degree()) continue;
    if (gcd(gp, gp.derivative()).degree() != 0) continue;
    break;
  }
  PrimeField F(p);
  std::vector<std::uint64_t> cs;
  for (const auto& v : ip.c) cs.push_back(F.from_mpz(v));
  auto mod_roots = roots_in_field(FpU(F, cs));

  mpz_class target = 2 * a0 * lc + 1;
  mpz_class pz = PrimeField::mpz_from_u64(p);
  for (std::uint64_t r0 : mod_roots) {
    mpz_class r = PrimeField::mpz_from_u64(r0);
    mpz_class m = pz;
    while (m <= target) {
      mpz_class m2 = m * m;
      mpz_class fv = ip.eval_mod(r, m2);
      mpz_class dv = ip.deriv_eval_mod(r, m2);
      mpz_class inv;
      if (mpz_invert(inv.get_mpz_t(), dv.get_mpz_t(), m2.get_mpz_t()) == 0) break;
      r = (r - fv * inv) % m2;
      if (r < 0) r += m2;
      m = m2;
    }
    mpq_class cand;
    if (!rational_reconstruct(r, m, a0, lc, cand)) continue;
    if (sgn(g.evaluate(cand)) == 0) out.push_back(cand);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace p2ode
