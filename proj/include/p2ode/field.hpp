#pragma once

// Exact coefficient fields: the rationals (GMP-backed) and prime fields Z/pZ
// with p < 2^64. Elements are plain values; all arithmetic goes through the
// field object so that a prime field can carry its modulus.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace p2ode {

/// Raised when an operation is applied outside its domain (bad degrees,
/// mismatched rings, non-prime modulus, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Rationals {
  using Elem = mpq_class;

  static constexpr bool kIsPrime = false;

  Elem zero() const { return Elem(0); }
  Elem one() const { return Elem(1); }
  Elem from_int(long long v) const { return Elem(mpz_class(std::to_string(v))); }
  Elem from_mpz(const mpz_class& v) const { return Elem(v); }
  Elem from_ratio(const mpz_class& n, const mpz_class& d) const {
    if (d == 0) throw DomainError("zero denominator");
    Elem q(n, d);
    q.canonicalize();
    return q;
  }

  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem inv(const Elem& a) const {
    if (sgn(a) == 0) throw DomainError("division by zero");
    return 1 / a;
  }
  Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }
  bool is_zero(const Elem& a) const { return sgn(a) == 0; }
  bool is_one(const Elem& a) const { return a == 1; }
  bool eq(const Elem& a, const Elem& b) const { return a == b; }

  std::string to_string(const Elem& a) const { return a.get_str(); }
  std::string name() const { return "Q"; }

  bool operator==(const Rationals&) const { return true; }
};

/// True when n is prime (GMP's BPSW test, exact below 2^64).
bool is_prime_u64(std::uint64_t n);

class PrimeField {
 public:
  using Elem = std::uint64_t;

  static constexpr bool kIsPrime = true;

  explicit PrimeField(std::uint64_t p) : p_(p) {
    if (p < 2 || !is_prime_u64(p)) {
      throw DomainError("modulus " + std::to_string(p) + " is not prime");
    }
  }

  std::uint64_t modulus() const { return p_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1 % p_; }
  Elem from_int(long long v) const {
    __int128 r = static_cast<__int128>(v) % static_cast<__int128>(p_);
    if (r < 0) r += p_;
    return static_cast<Elem>(r);
  }
  Elem from_mpz(const mpz_class& v) const {
    mpz_class r;
    mpz_class m = mpz_from_u64(p_);
    mpz_mod(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
    return u64_from_mpz(r);
  }

  Elem add(Elem a, Elem b) const {
    Elem s = a + b;
    if (s < a || s >= p_) s -= p_;
    return s;
  }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + (p_ - b); }
  Elem mul(Elem a, Elem b) const {
    return static_cast<Elem>(static_cast<unsigned __int128>(a) * b % p_);
  }
  Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
  Elem pow(Elem a, std::uint64_t e) const {
    Elem r = one();
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  Elem inv(Elem a) const {
    if (a == 0) throw DomainError("division by zero in F_" + std::to_string(p_));
    return pow(a, p_ - 2);
  }
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  bool is_zero(Elem a) const { return a == 0; }
  bool is_one(Elem a) const { return a == one(); }
  bool eq(Elem a, Elem b) const { return a == b; }

  std::string to_string(Elem a) const { return std::to_string(a); }
  std::string name() const { return "F_" + std::to_string(p_); }

  bool operator==(const PrimeField& o) const { return p_ == o.p_; }

  static mpz_class mpz_from_u64(std::uint64_t v);
  static std::uint64_t u64_from_mpz(const mpz_class& v);

 private:
  std::uint64_t p_;
};

/// Image of a rational in F_p; false when p divides the denominator.
bool reduce_rational(const PrimeField& f, const mpq_class& q, PrimeField::Elem& out);

}  // namespace p2ode
