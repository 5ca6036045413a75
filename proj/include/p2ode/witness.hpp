#pragma once

// Seeded constructions of equations and webs with no low-degree invariant
// curves, certified by finite-field screening.

#include "p2ode/certificate.hpp"

namespace p2ode {

enum class WitnessMode {
  V,  // F = (b+2)-web of degree a-1, equation F . X_V
  L,  // F = (b-1)-web of degree a+2, equation F . X_L
};

inline constexpr int kWitnessRetries = 16;

struct WitnessResult {
  WitnessMode mode;
  SecondOrderODE<Rationals> ode;
  PlaneWeb<Rationals> web;
  Certificate web_certificate;  // invariant curves of W (and fibers in L-mode)
  Certificate ode_certificate;  // solution curves (V) or invariant fibers (L)
  int attempts = 0;

  /// 0: both certificates empty, 1: every attempt hit, 2: inconclusive.
  int exit_code() const;
};

/// V-mode screens the web and the equation for curves of degree <= r. In
/// L-mode every line solves F . X_L, so curves are screened on the web and
/// the equation is screened for invariant fibers instead.
WitnessResult genericity_witness(int a, int b, int r, std::uint64_t seed, WitnessMode mode,
                                 const ScreenOptions& base = {});

struct ProductWitness {
  PlaneWeb<Rationals> factor;   // (k-1)-web of degree d with a planted singular point
  PlaneWeb<Rationals> pencil;   // lines through `center`
  PlaneWeb<Rationals> product;  // k-web of degree d
  Point3<Rationals> center;
  std::array<mpq_class, 3> singular_point;  // chart (x, y, p)
  bool factor_singular = false;
  bool pencil_avoids = false;
  bool product_singular = false;
  int attempts = 0;
};

ProductWitness product_web_witness(int k, int d, std::uint64_t seed);

}  // namespace p2ode
