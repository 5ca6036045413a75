#include "p2ode/field.hpp"

namespace p2ode {

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  mpz_class z = PrimeField::mpz_from_u64(n);
  return mpz_probab_prime_p(z.get_mpz_t(), 30) > 0;
}

mpz_class PrimeField::mpz_from_u64(std::uint64_t v) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return z;
}

std::uint64_t PrimeField::u64_from_mpz(const mpz_class& v) {
  std::uint64_t out = 0;
  std::size_t count = 0;
  mpz_export(&out, &count, 1, sizeof(out), 0, 0, v.get_mpz_t());
  return count == 0 ? 0 : out;
}

bool reduce_rational(const PrimeField& f, const mpq_class& q, PrimeField::Elem& out) {
  PrimeField::Elem den = f.from_mpz(q.get_den());
  if (den == 0) return false;
  out = f.div(f.from_mpz(q.get_num()), den);
  return true;
}

}  // namespace p2ode
