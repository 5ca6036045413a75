#pragma once

// Sparse multivariate polynomials over an exact field.
//
// Terms live in a map keyed by exponent vectors under graded-lex order
// (largest first), with no zero coefficients, so structural equality is
// polynomial equality.

#include "p2ode/field.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace p2ode {

inline constexpr std::size_t kMaxVars = 8;

struct Monomial {
  std::array<std::uint16_t, kMaxVars> exp{};

  unsigned degree() const {
    unsigned d = 0;
    for (auto e : exp) d += e;
    return d;
  }
  bool divides(const Monomial& o) const {
    for (std::size_t i = 0; i < kMaxVars; ++i)
      if (exp[i] > o.exp[i]) return false;
    return true;
  }
  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial m;
    for (std::size_t i = 0; i < kMaxVars; ++i) m.exp[i] = a.exp[i] + b.exp[i];
    return m;
  }
  // Requires b | a.
  friend Monomial operator/(const Monomial& a, const Monomial& b) {
    Monomial m;
    for (std::size_t i = 0; i < kMaxVars; ++i) m.exp[i] = a.exp[i] - b.exp[i];
    return m;
  }
  bool operator==(const Monomial&) const = default;
};

/// Graded-lex order, larger monomials first; variable 0 is the largest.
struct GrLexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const {
    unsigned da = a.degree(), db = b.degree();
    if (da != db) return da > db;
    return a.exp > b.exp;
  }
};

using VarNames = std::shared_ptr<const std::vector<std::string>>;

inline VarNames make_vars(std::vector<std::string> names) {
  if (names.size() > kMaxVars) throw DomainError("too many variables");
  return std::make_shared<const std::vector<std::string>>(std::move(names));
}

inline bool same_vars(const VarNames& a, const VarNames& b) {
  return a == b || (a && b && *a == *b);
}

template <class Field>
class MPoly {
 public:
  using Elem = typename Field::Elem;
  using TermMap = std::map<Monomial, Elem, GrLexGreater>;

  MPoly(Field field, VarNames vars) : field_(std::move(field)), vars_(std::move(vars)) {}

  static MPoly constant(const Field& f, const VarNames& v, const Elem& c) {
    MPoly r(f, v);
    if (!f.is_zero(c)) r.terms_.emplace(Monomial{}, c);
    return r;
  }
  static MPoly variable(const Field& f, const VarNames& v, std::size_t i, unsigned power = 1) {
    if (i >= v->size()) throw DomainError("variable index out of range");
    MPoly r(f, v);
    Monomial m;
    m.exp[i] = static_cast<std::uint16_t>(power);
    r.terms_.emplace(m, f.one());
    return r;
  }
  static MPoly monomial(const Field& f, const VarNames& v, const Monomial& m, const Elem& c) {
    MPoly r(f, v);
    if (!f.is_zero(c)) r.terms_.emplace(m, c);
    return r;
  }

  const Field& field() const { return field_; }
  const VarNames& vars() const { return vars_; }
  std::size_t nvars() const { return vars_->size(); }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.degree() == 0);
  }
  Elem constant_term() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? field_.zero() : it->second;
  }
  Elem coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? field_.zero() : it->second;
  }
  int total_degree() const { return terms_.empty() ? -1 : static_cast<int>(terms_.begin()->first.degree()); }
  int degree_in(std::size_t var) const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m.exp[var]));
    return d;
  }
  bool involves(std::size_t var) const { return degree_in(var) > 0; }
  const Monomial& leading_monomial() const { return terms_.begin()->first; }
  const Elem& leading_coeff() const { return terms_.begin()->second; }

  /// Adds c*m in place.
  void add_term(const Monomial& m, const Elem& c) {
    if (field_.is_zero(c)) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second = field_.add(it->second, c);
      if (field_.is_zero(it->second)) terms_.erase(it);
    }
  }

  MPoly& operator+=(const MPoly& o) {
    check_ring(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  MPoly& operator-=(const MPoly& o) {
    check_ring(o);
    for (const auto& [m, c] : o.terms_) add_term(m, field_.neg(c));
    return *this;
  }
  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  MPoly operator-() const {
    MPoly r(field_, vars_);
    for (const auto& [m, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, field_.neg(c));
    return r;
  }
  friend MPoly operator*(const MPoly& a, const MPoly& b) {
    a.check_ring(b);
    MPoly r(a.field_, a.vars_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, a.field_.mul(ca, cb));
    return r;
  }
  MPoly& operator*=(const MPoly& o) { return *this = *this * o; }

  MPoly scaled(const Elem& c) const {
    MPoly r(field_, vars_);
    if (field_.is_zero(c)) return r;
    for (const auto& [m, v] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, field_.mul(v, c));
    return r;
  }
  MPoly times_monomial(const Monomial& mono, const Elem& c) const {
    MPoly r(field_, vars_);
    if (field_.is_zero(c)) return r;
    for (const auto& [m, v] : terms_) r.terms_.emplace_hint(r.terms_.end(), m * mono, field_.mul(v, c));
    return r;
  }
  MPoly pow(unsigned e) const {
    MPoly result = constant(field_, vars_, field_.one());
    MPoly base = *this;
    while (e) {
      if (e & 1) result *= base;
      e >>= 1;
      if (e) base *= base;
    }
    return result;
  }

  /// Leading coefficient scaled to one; zero stays zero.
  MPoly monic() const {
    if (is_zero()) return *this;
    return scaled(field_.inv(leading_coeff()));
  }

  MPoly derivative(std::size_t var) const {
    MPoly r(field_, vars_);
    for (const auto& [m, c] : terms_) {
      if (m.exp[var] == 0) continue;
      Monomial d = m;
      d.exp[var] -= 1;
      r.add_term(d, field_.mul(c, field_.from_int(m.exp[var])));
    }
    return r;
  }

  /// Ring homomorphism sending variable i to images[i]; images share one
  /// target ring.
  MPoly compose(const std::vector<MPoly>& images) const {
    if (images.size() != nvars()) throw DomainError("compose: wrong number of images");
    const MPoly& any = images.front();
    MPoly r(any.field_, any.vars_);
    std::vector<std::vector<MPoly>> powers(images.size());
    auto power_of = [&](std::size_t i, unsigned e) -> const MPoly& {
      auto& cache = powers[i];
      if (cache.empty()) cache.push_back(constant(any.field_, any.vars_, any.field_.one()));
      while (cache.size() <= e) cache.push_back(cache.back() * images[i]);
      return cache[e];
    };
    for (const auto& [m, c] : terms_) {
      MPoly t = constant(any.field_, any.vars_, c);
      for (std::size_t i = 0; i < nvars(); ++i)
        if (m.exp[i]) t = t * power_of(i, m.exp[i]);
      r += t;
    }
    return r;
  }

  /// Replaces variable var by the polynomial value (same ring).
  MPoly substitute(std::size_t var, const MPoly& value) const {
    std::vector<MPoly> images;
    for (std::size_t i = 0; i < nvars(); ++i) images.push_back(i == var ? value : variable(field_, vars_, i));
    return compose(images);
  }

  Elem evaluate(const std::vector<Elem>& point) const {
    Elem acc = field_.zero();
    for (const auto& [m, c] : terms_) {
      Elem t = c;
      for (std::size_t i = 0; i < nvars(); ++i)
        for (unsigned k = 0; k < m.exp[i]; ++k) t = field_.mul(t, point[i]);
      acc = field_.add(acc, t);
    }
    return acc;
  }

  /// Exact quotient by d, or nullopt when d does not divide *this.
  std::optional<MPoly> divide_exact(const MPoly& d) const {
    check_ring(d);
    if (d.is_zero()) throw DomainError("division by the zero polynomial");
    MPoly rem = *this;
    MPoly quo(field_, vars_);
    const Monomial& lm = d.leading_monomial();
    Elem lc_inv = field_.inv(d.leading_coeff());
    while (!rem.is_zero()) {
      const Monomial& m = rem.leading_monomial();
      if (!lm.divides(m)) return std::nullopt;
      Monomial qm = m / lm;
      Elem qc = field_.mul(rem.leading_coeff(), lc_inv);
      quo.add_term(qm, qc);
      rem -= d.times_monomial(qm, qc);
    }
    return quo;
  }
  bool divisible_by(const MPoly& d) const { return divide_exact(d).has_value(); }

  /// Coefficients with respect to one variable: result[e] does not involve var.
  std::vector<MPoly> coefficients_in(std::size_t var) const {
    int deg = degree_in(var);
    std::vector<MPoly> out(deg < 0 ? 0 : deg + 1, MPoly(field_, vars_));
    for (const auto& [m, c] : terms_) {
      Monomial rest = m;
      rest.exp[var] = 0;
      out[m.exp[var]].add_term(rest, c);
    }
    return out;
  }
  static MPoly from_coefficients(const Field& f, const VarNames& v, std::size_t var,
                                 const std::vector<MPoly>& coeffs) {
    MPoly r(f, v);
    for (std::size_t e = 0; e < coeffs.size(); ++e) {
      Monomial shift;
      shift.exp[var] = static_cast<std::uint16_t>(e);
      r += coeffs[e].times_monomial(shift, f.one());
    }
    return r;
  }

  /// Same polynomial in a ring with (possibly more) variables; variable i goes
  /// to slot index_map[i].
  MPoly embed(const VarNames& target, const std::vector<std::size_t>& index_map) const {
    MPoly r(field_, target);
    for (const auto& [m, c] : terms_) {
      Monomial t;
      for (std::size_t i = 0; i < nvars(); ++i) t.exp[index_map[i]] = m.exp[i];
      r.add_term(t, c);
    }
    return r;
  }

  bool operator==(const MPoly& o) const {
    if (!same_vars(vars_, o.vars_) || !(field_ == o.field_)) return false;
    if (terms_.size() != o.terms_.size()) return false;
    auto it = o.terms_.begin();
    for (const auto& [m, c] : terms_) {
      if (!(m == it->first) || !field_.eq(c, it->second)) return false;
      ++it;
    }
    return true;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      std::string cs = field_.to_string(c);
      bool negative = !cs.empty() && cs[0] == '-';
      if (negative) cs.erase(0, 1);
      if (first) {
        if (negative) os << "-";
      } else {
        os << (negative ? " - " : " + ");
      }
      first = false;
      bool unit = cs == "1";
      bool wrote = false;
      if (!unit || m.degree() == 0) {
        os << cs;
        wrote = true;
      }
      for (std::size_t i = 0; i < nvars(); ++i) {
        if (!m.exp[i]) continue;
        if (wrote) os << "*";
        os << (*vars_)[i];
        if (m.exp[i] > 1) os << "^" << m.exp[i];
        wrote = true;
      }
    }
    return os.str();
  }

  void check_ring(const MPoly& o) const {
    if (!same_vars(vars_, o.vars_)) throw DomainError("polynomials live in different variable sets");
    if (!(field_ == o.field_)) throw DomainError("polynomials live over different fields");
  }

 private:
  Field field_;
  VarNames vars_;
  TermMap terms_;
};

using QPoly = MPoly<Rationals>;
using FpPoly = MPoly<PrimeField>;

/// Image of a rational polynomial in F_p[vars]; nullopt on bad reduction.
inline std::optional<FpPoly> reduce_mod(const QPoly& f, const PrimeField& fp) {
  FpPoly r(fp, f.vars());
  for (const auto& [m, c] : f.terms()) {
    PrimeField::Elem v;
    if (!reduce_rational(fp, c, v)) return std::nullopt;
    r.add_term(m, v);
  }
  return r;
}

}  // namespace p2ode
