#pragma once

// Exhaustive search for invariant curves with coefficients in F_p.
//
// Every projective plane curve of degree 1..r is enumerated once, with its
// coefficient vector (graded-lex monomial order) normalized so the first
// nonzero entry is 1. A cheap necessary condition at the F_p-points of the
// curve runs through the vector kernels; survivors that are reduced get the
// exact divisibility check.

#include "p2ode/invariants.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace p2ode {

struct ScreenOptions {
  int r = 1;
  std::vector<std::uint64_t> primes{5, 7};
  std::uint64_t budget = 50'000'000;  // curves per prime
  unsigned threads = 0;               // 0: hardware concurrency
};

enum class PrimeStatus { Ok, BadReduction, BudgetExceeded };

std::string to_string(PrimeStatus s);

struct FoundCurve {
  int degree = 0;
  std::vector<std::uint64_t> coeffs;  // in curve_monomials(degree) order
  std::string equation;

  friend bool operator==(const FoundCurve&, const FoundCurve&) = default;
};

struct PrimeScreen {
  std::uint64_t prime = 0;
  PrimeStatus status = PrimeStatus::Ok;
  std::uint64_t enumerated = 0;
  std::uint64_t exact_checks = 0;
  std::uint64_t skipped_nonreduced = 0;
  std::vector<FoundCurve> found;
  /// Points X with the whole fiber over X invariant; only filled when
  /// fibers were screened.
  std::vector<Point3<PrimeField>> fibers;
  bool fibers_screened = false;
  std::string note;
};

/// Degree-e monomials in X0, X1, X2, graded-lex descending (X0^e first).
std::vector<Monomial> curve_monomials(int e);

/// Number of curves of degree 1..r over F_p; saturates at UINT64_MAX.
std::uint64_t curve_count(std::uint64_t p, int r);

FpPoly curve_from_coeffs(const PrimeField& F, int e, const std::vector<std::uint64_t>& coeffs);

/// Curves G of degree <= r with G | S(X, grad G).
PrimeScreen screen_web_mod_p(const BiHomPoly<PrimeField>& section, const ScreenOptions& opt);

/// Curves of degree <= r all of whose components solve e.
PrimeScreen screen_ode_mod_p(const SecondOrderODE<PrimeField>& e, const ScreenOptions& opt);

/// Points X of P^2(F_p) with S(X, A) = 0 for every A.
std::vector<Point3<PrimeField>> invariant_fibers_mod_p(const BiHomPoly<PrimeField>& section);

}  // namespace p2ode
