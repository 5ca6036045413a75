#pragma once

// Integer cohomology of the flag variety M = P(T P^2), presented as
// Z[h, hv] / (h^3, h^2 - h*hv + hv^2), where hv is the pullback of the
// hyperplane class from the dual plane.

#include <array>
#include <cstdint>
#include <string>

namespace p2ode {

/// Coefficients in the basis {1; h, hv; h^2, h*hv; pt}.
struct ChowClass {
  std::array<std::int64_t, 6> c{};

  static ChowClass one() { return {{1, 0, 0, 0, 0, 0}}; }
  static ChowClass h() { return {{0, 1, 0, 0, 0, 0}}; }
  static ChowClass hv() { return {{0, 0, 1, 0, 0, 0}}; }
  static ChowClass h2() { return {{0, 0, 0, 1, 0, 0}}; }
  static ChowClass hhv() { return {{0, 0, 0, 0, 1, 0}}; }
  static ChowClass pt() { return {{0, 0, 0, 0, 0, 1}}; }
  static ChowClass divisor(std::int64_t a, std::int64_t b) { return {{0, a, b, 0, 0, 0}}; }

  /// Degree of a homogeneous class, -1 for zero, -2 when mixed.
  int degree() const;
  bool is_zero() const;

  friend ChowClass operator+(const ChowClass& u, const ChowClass& v);
  friend ChowClass operator-(const ChowClass& u, const ChowClass& v);
  friend ChowClass operator*(const ChowClass& u, const ChowClass& v);
  friend ChowClass operator*(std::int64_t s, const ChowClass& u);
  bool operator==(const ChowClass&) const = default;

  std::string to_string() const;
};

inline ChowClass chow_mul(const ChowClass& u, const ChowClass& v) { return u * v; }

/// pt-coefficient of a class of pure degree 3 (throws otherwise).
std::int64_t intersection_number(const ChowClass& u);

/// The pair (a, b) with T*F = O_M(a, b). Entries may be negative.
struct Bidegree {
  int a = 0;
  int b = 0;
  bool operator==(const Bidegree&) const = default;
  ChowClass divisor() const { return ChowClass::divisor(a, b); }
};

namespace bundles {
inline constexpr Bidegree kCanonical{-2, -2};
inline constexpr Bidegree kContactNormal{1, 1};
inline constexpr Bidegree kTautological{2, -1};
inline constexpr Bidegree kLifted{-2, 1};    // every line's lift is a leaf
inline constexpr Bidegree kVertical{1, -2};  // fibers of M -> P^2 are leaves
}  // namespace bundles

/// Class of tang(F, T) as a curve: (a h + b hv + T) * T.
ChowClass tangency_class_surface(Bidegree f, const ChowClass& surface);

/// Number of tangencies between F and a smooth curve tangent to the contact
/// distribution: T*F.C + det(D).C - euler.
std::int64_t tangency_count_curve(Bidegree f, const ChowClass& curve, std::int64_t euler);

/// Divisor class of the tangency locus of two equations.
Bidegree tangency_class_pair(Bidegree f1, Bidegree f2);

/// h^0(M, O(a, b)) for a, b >= 0. Outside that range returns 0 and sets
/// *extrapolated when given.
std::int64_t dim_sections(int a, int b, bool* extrapolated = nullptr);

/// Projective dimension of E(a, b) for a, b >= 1; throws otherwise.
std::int64_t dim_ode_space(int a, int b);

/// Class d h + k hv of the lift of a k-web of degree d.
ChowClass web_lift_class(int k, int d);

}  // namespace p2ode
